#include "condent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "condent/entropy.hpp"

namespace condent {

namespace detail {

double log_negativity_matrix(const Matrix& m, const std::vector<int>& dims,
                             const std::vector<int>& transpose_positions) {
  Matrix pt = partial_transpose_matrix(m, dims, transpose_positions);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  return std::log2(es.eigenvalues().cwiseAbs().sum());
}

}  // namespace detail

double log_negativity(const QuantumState& s, const LabelList& a) {
  auto positions = detail::positions_of(s.labels(), a, "log_negativity");
  return detail::log_negativity_matrix(s.matrix(), s.dims(), positions);
}

bool ppt_check(const QuantumState& s, const LabelList& a, double tolerance) {
  Matrix pt = partial_transpose(s, a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tolerance;
}

namespace {

// Weighted value of a decomposition under f, skipping numerically empty
// branches.
double ensemble_value(const StateFunctional& f, const Ensemble& ensemble) {
  double acc = 0.0;
  for (const auto& m : ensemble.members()) {
    if (m.probability > tol::rank_cutoff) acc += m.probability * f(m.state);
  }
  return acc;
}

Ensemble branches_to_ensemble(const Matrix& branches,
                              const std::vector<int>& dims,
                              const LabelList& labels) {
  std::vector<double> probabilities;
  std::vector<QuantumState> members;
  for (Eigen::Index i = 0; i < branches.cols(); ++i) {
    const double p = branches.col(i).squaredNorm();
    if (p <= tol::rank_cutoff) continue;
    Vector v = branches.col(i) / std::sqrt(p);
    probabilities.push_back(p);
    members.push_back(QuantumState::trusted(v * v.adjoint(), dims, labels));
  }
  const double sum =
      std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  for (auto& p : probabilities) p /= sum;
  return Ensemble(std::move(probabilities), std::move(members));
}

}  // namespace

OptimizationResult convex_roof(const StateFunctional& f, const QuantumState& s,
                               const RoofOptions& options) {
  const int rank = numerical_rank(s);
  int members = options.members;
  if (members == 0) members = std::max(rank, std::min(2 * rank, rank * rank));
  if (members < rank) {
    throw std::invalid_argument(
        "convex_roof: member count below the state rank");
  }

  for (const auto& ens : options.seed_ensembles) {
    if ((ens.average().matrix() - s.matrix()).cwiseAbs().maxCoeff() > 1e-8) {
      throw std::invalid_argument(
          "convex_roof: seed ensemble does not average to the state");
    }
  }

  OptimizationResult result;
  result.value = std::numeric_limits<double>::infinity();
  auto offer = [&](double value, Certificate cert,
                   std::optional<Ensemble> ensemble) {
    result.trace.push_back(
        result.trace.empty() ? value : std::min(result.trace.back(), value));
    if (value < result.value) {
      result.value = value;
      result.certificate = std::move(cert);
      result.ensemble = std::move(ensemble);
    }
  };

  // The trivial single-member decomposition is always a candidate.
  {
    std::vector<double> p = {1.0};
    std::vector<QuantumState> m = {s};
    Ensemble single(std::move(p), std::move(m));
    offer(f(s), Certificate{"exact", "single-member decomposition", {}},
          std::move(single));
  }
  for (std::size_t i = 0; i < options.seed_ensembles.size(); ++i) {
    offer(ensemble_value(f, options.seed_ensembles[i]),
          Certificate{"flag", "seed ensemble " + std::to_string(i), {}},
          options.seed_ensembles[i]);
  }

  if (rank == 1) {
    // A pure state has no other decompositions.
    result.converged = true;
    result.restarts_used = 0;
    return result;
  }

  const PureState psi = purify(s, "__roof_env");
  const long sys_dim = s.dim();
  Matrix purification(sys_dim, rank);
  for (long i = 0; i < sys_dim; ++i) {
    for (int c = 0; c < rank; ++c) {
      purification(i, c) = psi.vector()[i * rank + c];
    }
  }

  const auto& dims = s.dims();
  const auto& labels = s.labels();
  const int n_params = isometry_param_count(members);
  const Objective objective = [&](const std::vector<double>& params) {
    Matrix w = isometry_from_params(params, members, rank);
    Matrix branches = purification * w.transpose();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < branches.cols(); ++i) {
      const double p = branches.col(i).squaredNorm();
      if (p <= tol::rank_cutoff) continue;
      Vector v = branches.col(i) / std::sqrt(p);
      acc += p * f(QuantumState::trusted(v * v.adjoint(), dims, labels));
    }
    return acc;
  };

  // Zero parameters give W = [I_r; 0], i.e. the spectral decomposition.
  std::vector<StartPoint> starts = {
      {std::vector<double>(n_params, 0.0), "spectral start"}};
  OptimizationResult opt =
      minimize_multistart(objective, n_params, options.optimizer, starts);

  for (double v : opt.trace) {
    result.trace.push_back(std::min(result.trace.back(), v));
  }
  if (opt.value < result.value) {
    result.value = opt.value;
    result.certificate = opt.certificate;
    Matrix w = isometry_from_params(opt.certificate.params, members, rank);
    result.ensemble = branches_to_ensemble(purification * w.transpose(), dims,
                                           labels);
    result.converged = opt.converged;
  } else {
    // An exact candidate won; the run is as converged as it gets.
    result.converged = true;
  }
  result.restarts_used = opt.restarts_used;
  return result;
}

OptimizationResult entanglement_of_formation(const QuantumState& s,
                                             const LabelList& a,
                                             const RoofOptions& options) {
  for (const auto& l : a) (void)s.index_of(l);
  const StateFunctional entanglement_entropy = [a](const QuantumState& member) {
    return subsystem_entropy(member, a);
  };
  return convex_roof(entanglement_entropy, s, options);
}

OptimizationResult c_squashed(const QuantumState& s, const LabelList& a,
                              const RoofOptions& options) {
  const LabelList b = s.complement(a);
  if (b.empty()) {
    throw std::invalid_argument("c_squashed: bipartition needs both sides");
  }
  const StateFunctional half_mutual = [a, b](const QuantumState& member) {
    return 0.5 * mutual_information(member, a, b);
  };
  return convex_roof(half_mutual, s, options);
}

}  // namespace condent
