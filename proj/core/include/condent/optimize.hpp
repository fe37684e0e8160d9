// Derivative-free minimization used by the convex-roof and extension
// searches: multi-start Nelder-Mead over real parameter vectors, with
// deterministic per-restart seeds and a value-then-index merge so results do
// not depend on how many threads ran the restarts.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "condent/state.hpp"

namespace condent {

struct OptimizerOptions {
  int restarts = 16;
  int max_iterations = 2000;
  double tolerance = 1e-7;  // absolute spread of simplex values
  std::uint64_t seed = 42;
  int threads = 1;
  double initial_step = 0.5;
  double random_scale = 1.0;  // stddev of random start coordinates
};

struct Certificate {
  std::string kind;  // "trivial" | "flag" | "injected" | "isometry" | "exact"
  std::string description;
  std::vector<double> params;  // isometry parameters when kind == "isometry"
};

struct OptimizationResult {
  double value = 0.0;
  Certificate certificate;
  std::vector<double> trace;  // best value after each step, non-increasing
  bool converged = false;
  int restarts_used = 0;
  // Best witnesses, populated by the callers that have them.
  std::optional<QuantumState> extension;
  std::optional<Ensemble> ensemble;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct StartPoint {
  std::vector<double> params;
  std::string description;
};

struct NelderMeadOutcome {
  std::vector<double> best;
  double value = 0.0;
  bool converged = false;
  std::vector<double> trace;
  long evaluations = 0;
};

NelderMeadOutcome nelder_mead(const Objective& f, const std::vector<double>& x0,
                              double step, int max_iterations, double ftol);

// Runs `options.restarts` Nelder-Mead instances: the provided start points
// first, the remainder from seeded Gaussian draws. Restart r uses the child
// seed derive(r) of options.seed; ties merge toward the lower restart index.
OptimizationResult minimize_multistart(const Objective& f, int n_params,
                                       const OptimizerOptions& options,
                                       const std::vector<StartPoint>& starts);

// --- isometry parameterization ------------------------------------------
// V = exp(i H) restricted to the first `cols` columns, H Hermitian built
// from rows^2 real parameters. Smooth and onto the isometry manifold.

int isometry_param_count(int rows);
Matrix hermitian_from_params(const std::vector<double>& params, int rows);
Matrix isometry_from_params(const std::vector<double>& params, int rows,
                            int cols);

// Runs body(i) for i in [0, n), using up to `threads` workers. Bodies must
// be independent; results are whatever the bodies write.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace condent
