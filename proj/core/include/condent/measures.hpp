// Directly computable entanglement measures and the convex-roof engine.
// The roof searches pure-member decompositions by applying an isometry to
// the purification environment; every reported number is a certified upper
// bound on the true roof value.
#pragma once

#include <functional>

#include "condent/optimize.hpp"
#include "condent/state.hpp"

namespace condent {

enum class MeasureKind {
  log_negativity,
  ent_of_formation,
  mutual_information_half,
  multipartite_I,
  multipartite_S,
};

struct MeasureSpec {
  MeasureKind kind = MeasureKind::mutual_information_half;
  Partition partition;
  OptimizerOptions options;
};

// log2 of the trace norm of the partial transpose across {a, complement}.
double log_negativity(const QuantumState& s, const LabelList& a);
// True iff the partial transpose across {a, complement} has min eigenvalue
// >= -tol (PPT).
bool ppt_check(const QuantumState& s, const LabelList& a,
               double tolerance = 1e-9);

using StateFunctional = std::function<double(const QuantumState&)>;

struct RoofOptions {
  // Decomposition cardinality; 0 selects the default min(2r, r^2) for rank r
  // (with a floor of r so the search space always contains the spectral
  // decomposition).
  int members = 0;
  OptimizerOptions optimizer;
  // Known decompositions of the target state, evaluated and merged as
  // candidates (their average must reproduce the state within 1e-8).
  std::vector<Ensemble> seed_ensembles;
};

// Upper bound on min over decompositions rho = sum_i p_i phi_i of
// sum_i p_i f(phi_i), with pure members read off from isometries applied to
// the purification environment. The single-member decomposition {1, rho} is
// always a candidate, so the result never exceeds f(rho).
OptimizationResult convex_roof(const StateFunctional& f, const QuantumState& s,
                               const RoofOptions& options = {});

// convex_roof with f = entropy of entanglement across {a, complement}.
OptimizationResult entanglement_of_formation(const QuantumState& s,
                                             const LabelList& a,
                                             const RoofOptions& options = {});

// convex_roof with f = (1/2) I(a : complement); upper bound on the
// c-squashed entanglement.
OptimizationResult c_squashed(const QuantumState& s, const LabelList& a,
                              const RoofOptions& options = {});

namespace detail {
// log2 trace norm of the partial transpose, on a raw matrix (no state
// validation); used by optimizer hot paths.
double log_negativity_matrix(const Matrix& m, const std::vector<int>& dims,
                             const std::vector<int>& transpose_positions);
}  // namespace detail

}  // namespace condent
