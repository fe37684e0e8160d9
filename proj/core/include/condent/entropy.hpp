// Entropic and correlation functionals. All values are in bits (base-2
// logarithms throughout).
#pragma once

#include "condent/state.hpp"

namespace condent {

struct EntropyReport {
  double value = 0.0;            // bits
  std::vector<double> spectrum;  // eigenvalues used (descending)
  double clamped_mass = 0.0;     // total magnitude of clamped negatives
};

EntropyReport entropy_report(const QuantumState& s);
double von_neumann_entropy(const QuantumState& s);

// Entropy of the marginal on the given labels.
double subsystem_entropy(const QuantumState& s, const LabelList& part);

// S(a|b) = S(ab) - S(b); label sets must be disjoint.
double conditional_entropy(const QuantumState& s, const LabelList& a,
                           const LabelList& b);

// I(a:b) = S(a) + S(b) - S(ab), computed on the marginal over a u b.
double mutual_information(const QuantumState& s, const LabelList& a,
                          const LabelList& b);

// I(a:b|e) = S(ae) + S(be) - S(e) - S(abe).
double conditional_mutual_information(const QuantumState& s, const LabelList& a,
                                      const LabelList& b, const LabelList& e);

// chi = S(avg) - sum_k p_k S(rho_k).
double holevo_quantity(const Ensemble& ensemble);

// I_n = sum_i S(G_i) - S(G_1...G_n) over the partition's groups.
double multipartite_I_n(const QuantumState& s, const Partition& groups);
// S_n = sum_i S(all but G_i) - (n-1) S(G_1...G_n).
double multipartite_S_n(const QuantumState& s, const Partition& groups);

double binary_entropy(double e);
// Fannes-type conditional-entropy bound: 4 eps log2(dA) + 2 H(eps).
double continuity_bound(double eps, double d_a);
// 16 sqrt(eps) log2(dA dB) + 6 H(2 sqrt(eps)), H clamped at its maximum 1
// when 2 sqrt(eps) > 1.
double continuity_bound_CI(double eps, double d_a_times_d_b);

namespace detail {
// Entropy of a clamped spectrum; shared by the mixed and pure-vector paths.
double spectrum_entropy(const Eigen::VectorXd& eigenvalues);
}  // namespace detail

}  // namespace condent
