#include "condent/named_states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace condent {

namespace {

LabelList party_labels(int n) {
  if (n < 1 || n > 26) {
    throw std::invalid_argument("party count must be between 1 and 26");
  }
  LabelList labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::string(1, char('A' + i)));
  return labels;
}

int int_param(const std::map<std::string, double>& params,
              const std::string& key, int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  double v = it->second;
  int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9) {
    throw std::invalid_argument("parameter '" + key + "' must be an integer");
  }
  return i;
}

}  // namespace

PureState bell_state() {
  Vector v = Vector::Zero(4);
  v[0] = 1.0 / std::sqrt(2.0);
  v[3] = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), {2, 2}, {"A", "B"});
}

PureState ghz_state(int parties) {
  if (parties < 2) throw std::invalid_argument("ghz: need at least 2 parties");
  const long dim = 1L << parties;
  Vector v = Vector::Zero(dim);
  v[0] = 1.0 / std::sqrt(2.0);
  v[dim - 1] = 1.0 / std::sqrt(2.0);
  std::vector<int> dims(parties, 2);
  return PureState(std::move(v), dims, party_labels(parties));
}

PureState w_state(int parties) {
  if (parties < 2) throw std::invalid_argument("w: need at least 2 parties");
  const long dim = 1L << parties;
  Vector v = Vector::Zero(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(parties));
  for (int i = 0; i < parties; ++i) {
    v[1L << (parties - 1 - i)] = amp;
  }
  std::vector<int> dims(parties, 2);
  return PureState(std::move(v), dims, party_labels(parties));
}

QuantumState werner_state(double p, int d) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("werner: p out of range");
  if (d < 2) throw std::invalid_argument("werner: need d >= 2");
  const long dim = static_cast<long>(d) * d;
  // Antisymmetric projector (I - SWAP)/2, normalized to a state.
  Matrix swap = Matrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      swap(i * d + j, j * d + i) = 1.0;
    }
  }
  Matrix antisym = 0.5 * (Matrix::Identity(dim, dim) - swap);
  const double antisym_dim = static_cast<double>(d) * (d - 1) / 2.0;
  Matrix rho = p * antisym / antisym_dim +
               (1.0 - p) * Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return QuantumState::trusted(std::move(rho), {d, d}, {"A", "B"});
}

QuantumState isotropic_state(double fidelity_param, int d) {
  if (fidelity_param < 0.0 || fidelity_param > 1.0) {
    throw std::invalid_argument("isotropic: F out of range");
  }
  if (d < 2) throw std::invalid_argument("isotropic: need d >= 2");
  const long dim = static_cast<long>(d) * d;
  Vector phi = Vector::Zero(dim);
  for (int i = 0; i < d; ++i) phi[i * d + i] = 1.0 / std::sqrt(double(d));
  Matrix proj = phi * phi.adjoint();
  Matrix rho = fidelity_param * proj +
               (1.0 - fidelity_param) * (Matrix::Identity(dim, dim) - proj) /
                   static_cast<double>(dim - 1);
  return QuantumState::trusted(std::move(rho), {d, d}, {"A", "B"});
}

QuantumState maximally_mixed(int d, const std::string& label) {
  if (d < 1) throw std::invalid_argument("maximally_mixed: need d >= 1");
  Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
  return QuantumState::trusted(std::move(rho), {d}, {label});
}

QuantumState classically_correlated(int d) {
  if (d < 2) throw std::invalid_argument("classically_correlated: need d >= 2");
  const long dim = static_cast<long>(d) * d;
  Matrix rho = Matrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i) {
    rho(i * d + i, i * d + i) = 1.0 / static_cast<double>(d);
  }
  return QuantumState::trusted(std::move(rho), {d, d}, {"A", "B"});
}

PureState product_basis_state(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("product: empty dim list");
  const long dim = detail::product_of(dims);
  Vector v = Vector::Zero(dim);
  v[0] = 1.0;
  return PureState(std::move(v), dims, party_labels(static_cast<int>(dims.size())));
}

Matrix fourier_matrix(int dim) {
  Matrix f(dim, dim);
  const double root = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const double angle = 2.0 * std::numbers::pi * a * b / dim;
      f(a, b) = root * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return f;
}

PureState flower_state(int d) {
  if (d < 2) throw std::invalid_argument("flower: need d >= 2");
  const std::vector<int> dims = {d, 2, d, 2, d};
  const LabelList labels = {"A1", "A2", "B1", "B2", "C"};
  const Matrix dft = fourier_matrix(d);

  const auto strides = detail::strides_of(dims);
  Vector v = Vector::Zero(detail::product_of(dims));
  const double amp = 1.0 / std::sqrt(2.0 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int c = 0; c < d; ++c) {
        const Complex u = (j == 0) ? Complex(i == c ? 1.0 : 0.0, 0.0) : dft(c, i);
        if (u == Complex(0.0, 0.0)) continue;
        const long idx = i * strides[0] + j * strides[1] + i * strides[2] +
                         j * strides[3] + c * strides[4];
        v[idx] = amp * u;
      }
    }
  }
  return PureState(std::move(v), dims, labels);
}

NamedState make_named_state(const std::string& name,
                            const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback,
                 bool required = false) {
    auto it = params.find(key);
    if (it == params.end()) {
      if (required) {
        throw std::invalid_argument("missing parameter '" + key + "' for " +
                                    name);
      }
      return fallback;
    }
    return it->second;
  };

  if (name == "bell") return bell_state();
  if (name == "ghz") return ghz_state(int_param(params, "n", 3));
  if (name == "w") return w_state(int_param(params, "n", 3));
  if (name == "werner") {
    return werner_state(get("p", 0.0, true), int_param(params, "d", 2));
  }
  if (name == "isotropic") {
    return isotropic_state(get("F", 0.0, true), int_param(params, "d", 2));
  }
  if (name == "maximally_mixed") {
    return maximally_mixed(int_param(params, "d", 2));
  }
  if (name == "classically_correlated") {
    return classically_correlated(int_param(params, "d", 2));
  }
  if (name == "flower") return flower_state(int_param(params, "d", 2));
  if (name == "product") {
    std::vector<int> dims;
    for (int i = 0;; ++i) {
      auto it = params.find("d" + std::to_string(i));
      if (it == params.end()) break;
      dims.push_back(int_param(params, "d" + std::to_string(i), 2));
    }
    if (dims.empty()) dims = {2, 2};
    return product_basis_state(dims);
  }
  throw std::invalid_argument("unknown state family '" + name + "'");
}

}  // namespace condent
