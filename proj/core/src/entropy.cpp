#include "condent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace condent {

namespace detail {

double spectrum_entropy(const Eigen::VectorXd& eigenvalues) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues[i];
    if (lambda > tol::spectrum_clamp) {
      acc -= lambda * std::log2(lambda);
    }
  }
  return acc;
}

namespace {

void require_disjoint(const LabelList& a, const LabelList& b,
                      const char* what) {
  for (const auto& l : a) {
    if (std::find(b.begin(), b.end(), l) != b.end()) {
      throw std::invalid_argument(std::string(what) +
                                  ": label sets overlap at '" + l + "'");
    }
  }
}

LabelList join(const LabelList& a, const LabelList& b) {
  LabelList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace
}  // namespace detail

EntropyReport entropy_report(const QuantumState& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix(), Eigen::EigenvaluesOnly);
  EntropyReport report;
  report.spectrum.reserve(es.eigenvalues().size());
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    double lambda = es.eigenvalues()[i];
    if (lambda < 0.0) {
      report.clamped_mass += -lambda;
      lambda = 0.0;
    }
    report.spectrum.push_back(lambda);
  }
  Eigen::VectorXd clamped =
      Eigen::Map<const Eigen::VectorXd>(report.spectrum.data(),
                                        static_cast<long>(report.spectrum.size()));
  report.value = detail::spectrum_entropy(clamped);
  return report;
}

double von_neumann_entropy(const QuantumState& s) {
  return entropy_report(s).value;
}

double subsystem_entropy(const QuantumState& s, const LabelList& part) {
  if (part.size() == s.labels().size()) {
    bool all = true;
    for (const auto& l : part) all = all && s.has_label(l);
    if (all) return von_neumann_entropy(s);
  }
  return von_neumann_entropy(partial_trace(s, part));
}

double conditional_entropy(const QuantumState& s, const LabelList& a,
                           const LabelList& b) {
  detail::require_disjoint(a, b, "conditional_entropy");
  return subsystem_entropy(s, detail::join(a, b)) - subsystem_entropy(s, b);
}

double mutual_information(const QuantumState& s, const LabelList& a,
                          const LabelList& b) {
  detail::require_disjoint(a, b, "mutual_information");
  const LabelList ab = detail::join(a, b);
  QuantumState marginal = partial_trace(s, ab);
  return subsystem_entropy(marginal, a) + subsystem_entropy(marginal, b) -
         von_neumann_entropy(marginal);
}

double conditional_mutual_information(const QuantumState& s, const LabelList& a,
                                      const LabelList& b, const LabelList& e) {
  detail::require_disjoint(a, b, "conditional_mutual_information");
  detail::require_disjoint(a, e, "conditional_mutual_information");
  detail::require_disjoint(b, e, "conditional_mutual_information");
  const LabelList abe = detail::join(detail::join(a, b), e);
  QuantumState marginal = partial_trace(s, abe);
  return subsystem_entropy(marginal, detail::join(a, e)) +
         subsystem_entropy(marginal, detail::join(b, e)) -
         (e.empty() ? 0.0 : subsystem_entropy(marginal, e)) -
         von_neumann_entropy(marginal);
}

double holevo_quantity(const Ensemble& ensemble) {
  double avg_entropy = 0.0;
  for (const auto& m : ensemble.members()) {
    avg_entropy += m.probability * von_neumann_entropy(m.state);
  }
  return von_neumann_entropy(ensemble.average()) - avg_entropy;
}

double multipartite_I_n(const QuantumState& s, const Partition& partition) {
  if (partition.groups.size() < 2) {
    throw std::invalid_argument("multipartite_I_n: need at least 2 groups");
  }
  partition.validate(s);
  LabelList all;
  for (const auto& g : partition.groups) {
    all.insert(all.end(), g.begin(), g.end());
  }
  QuantumState marginal = partial_trace(s, all);
  double acc = -von_neumann_entropy(marginal);
  for (const auto& g : partition.groups) {
    acc += subsystem_entropy(marginal, g);
  }
  return acc;
}

double multipartite_S_n(const QuantumState& s, const Partition& partition) {
  const int n = static_cast<int>(partition.groups.size());
  if (n < 2) {
    throw std::invalid_argument("multipartite_S_n: need at least 2 groups");
  }
  partition.validate(s);
  LabelList all;
  for (const auto& g : partition.groups) {
    all.insert(all.end(), g.begin(), g.end());
  }
  QuantumState marginal = partial_trace(s, all);
  double acc = -(n - 1) * von_neumann_entropy(marginal);
  for (int i = 0; i < n; ++i) {
    LabelList rest;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      rest.insert(rest.end(), partition.groups[j].begin(),
                  partition.groups[j].end());
    }
    acc += subsystem_entropy(marginal, rest);
  }
  return acc;
}

double binary_entropy(double e) {
  if (e < 0.0 || e > 1.0) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  }
  double acc = 0.0;
  if (e > 0.0) acc -= e * std::log2(e);
  if (e < 1.0) acc -= (1.0 - e) * std::log2(1.0 - e);
  return acc;
}

double continuity_bound(double eps, double d_a) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("continuity_bound: eps outside [0, 1]");
  }
  return 4.0 * eps * std::log2(d_a) + 2.0 * binary_entropy(eps);
}

double continuity_bound_CI(double eps, double d_a_times_d_b) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("continuity_bound_CI: eps outside [0, 1]");
  }
  const double root = std::sqrt(eps);
  const double h = (2.0 * root <= 1.0) ? binary_entropy(2.0 * root) : 1.0;
  return 16.0 * root * std::log2(d_a_times_d_b) + 6.0 * h;
}

}  // namespace condent
