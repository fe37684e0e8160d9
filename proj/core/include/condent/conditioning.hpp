// Extension-based conditioned measures: the conditioned version of a base
// functional is inf over extensions of [base(enlarged split) - base(ancilla
// split)]. Extensions are parameterized as Stinespring isometries from the
// purifying system into the ancillas plus a discarded environment, so every
// search point is a valid extension and every reported value is a certified
// upper bound.
#pragma once

#include <optional>

#include "condent/measures.hpp"
#include "condent/optimize.hpp"
#include "condent/state.hpp"

namespace condent {

enum class AnsatzMode { symmetric, asymmetric, multipartite };

struct ExtensionAnsatz {
  AnsatzMode mode = AnsatzMode::symmetric;
  std::vector<int> out_dims;  // one ancilla dimension per output party
  int env_extra = 2;          // discarded environment dimension F >= 1
};

enum class BaseFunctional {
  mutual_information,
  log_negativity,
  formation,
  multipartite_I,
  multipartite_S,
};

struct ConditionedMeasure {
  BaseFunctional base = BaseFunctional::mutual_information;
  AnsatzMode conditioning = AnsatzMode::symmetric;
  double factor = 0.5;  // 1/2 for C_I and E_sq^q, 1 otherwise
  Partition groups;     // system groups: 2 for bipartite, n for multipartite
  // Budget for the inner convex roof when base == formation.
  OptimizerOptions inner{.restarts = 4, .max_iterations = 500};
};

// Convenience constructors for the measures named in the text.
ConditionedMeasure c_I_measure(const LabelList& a, const LabelList& b);
ConditionedMeasure e_sq_q_measure(const LabelList& a, const LabelList& b);
ConditionedMeasure ce_measure(BaseFunctional base, const LabelList& a,
                              const LabelList& b);
ConditionedMeasure multipartite_measure(const Partition& groups, bool use_I);

// Ancilla labels generated for a mode, avoiding collisions with the state.
LabelList default_ancilla_labels(const QuantumState& s, AnsatzMode mode,
                                 int count);

// Extension generated by the ansatz at the given parameters: isometry from
// the purifying system into ancillas (x) F, then F traced out. The result
// carries s's labels plus `ancilla_labels` (defaults when empty).
QuantumState build_extension(const QuantumState& s, const ExtensionAnsatz& a,
                             const std::vector<double>& params,
                             const LabelList& ancilla_labels = {});

// Classical-flag extension: sum_i p_i rho_i (x) |i><i|^(x flag_copies).
// flag_copies = 2 realizes the symmetric A'/B' construction, 1 the
// asymmetric (c-squashed) form, n the multipartite one.
QuantumState flag_extension(const Ensemble& ensemble, int flag_copies,
                            const LabelList& flag_labels);

// Objective value factor * [base(groups + ancillas) - base(ancillas)] of an
// explicit extension state; ancilla_groups pairs up with cm.groups
// (symmetric/multipartite) or is the single conditioning system
// (asymmetric).
double conditioned_objective(const QuantumState& extension,
                             const ConditionedMeasure& cm,
                             const std::vector<LabelList>& ancilla_groups);

struct SeedExtension {
  QuantumState state;
  std::vector<LabelList> ancilla_groups;
  std::string description;
};

struct ConditioningSeeds {
  // Decompositions of s; injected as flag extensions.
  std::vector<Ensemble> ensembles;
  // Explicit extension states (must trace back to s within 1e-9).
  std::vector<SeedExtension> extensions;
};

// Certified upper bound on the conditioned measure. The trivial (product
// ancilla) extension and the spectral-decomposition flag extension are always
// evaluated, so result.value <= factor * base(s) by construction. When
// `ansatz` is empty a small escalation schedule chosen from the purification
// rank is searched.
OptimizationResult minimize_conditioned(
    const QuantumState& s, const ConditionedMeasure& cm,
    const std::optional<ExtensionAnsatz>& ansatz, const OptimizerOptions& opts,
    const ConditioningSeeds& seeds = {});

// E_sq^q upper bound: asymmetric conditioning of (1/2) I, evaluated through
// the identity I(A:BE) - I(A:E) = I(A:B|E).
OptimizationResult e_sq_q_bound(const QuantumState& s, const LabelList& a,
                                const std::optional<ExtensionAnsatz>& ansatz,
                                const OptimizerOptions& opts,
                                const ConditioningSeeds& seeds = {});

// Multipartite conditioned I_n or S_n (factor 1, matching the multipartite
// display; pass factor_half for n = 2 cross-checks against bipartite C_I).
OptimizationResult multipartite_conditioned(
    const QuantumState& s, const Partition& groups, bool use_I,
    const std::optional<ExtensionAnsatz>& ansatz, const OptimizerOptions& opts,
    const ConditioningSeeds& seeds = {}, bool factor_half = false);

}  // namespace condent
