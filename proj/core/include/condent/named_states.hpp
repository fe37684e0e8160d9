// Named state families used throughout the test harness and CLI.
#pragma once

#include <map>
#include <variant>

#include "condent/state.hpp"

namespace condent {

PureState bell_state();                      // (|00> + |11>)/sqrt(2) on A, B
PureState ghz_state(int parties);            // labels A, B, C, ...
PureState w_state(int parties);
QuantumState werner_state(double p, int d);  // p * normalized antisymmetric
                                             // projector + (1-p) * I/d^2
QuantumState isotropic_state(double fidelity_param, int d);
QuantumState maximally_mixed(int d, const std::string& label = "A");
QuantumState classically_correlated(int d);  // sum_i |ii><ii| / d on A, B
PureState product_basis_state(const std::vector<int>& dims);  // |0...0>

// Flower state on A1(d) A2(2) B1(d) B2(2) C(d):
//   (1/sqrt(2d)) sum_{i,j} |i>|j>|i>|j> U_j|i>,  U_0 = I, U_1 = DFT.
PureState flower_state(int d);

// Discrete Fourier transform matrix, unitary, dim x dim.
Matrix fourier_matrix(int dim);

// Family dispatch for the CLI: returns either a mixed or a pure state.
// Throws std::invalid_argument for unknown names or out-of-range parameters.
using NamedState = std::variant<QuantumState, PureState>;
NamedState make_named_state(const std::string& name,
                            const std::map<std::string, double>& params);

}  // namespace condent
