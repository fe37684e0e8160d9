#include "condent/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace condent {

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Complex Rng::normal_complex() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::uint64_t Rng::derive(std::uint64_t stream) const {
  // splitmix64 over seed + stream offset.
  std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Matrix random_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols || cols < 1) {
    throw std::invalid_argument("random_isometry: need rows >= cols >= 1");
  }
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      g(i, j) = rng.normal_complex();
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // Fix column phases from the R diagonal so the distribution is Haar.
  for (int j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    double mag = std::abs(d);
    q.col(j) *= (mag > 1e-300) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

Matrix random_unitary(int dim, Rng& rng) { return random_isometry(dim, dim, rng); }

PureState random_pure_state(const std::vector<int>& dims,
                            const LabelList& labels, Rng& rng) {
  const long dim = detail::product_of(dims);
  Vector v(dim);
  for (long i = 0; i < dim; ++i) v[i] = rng.normal_complex();
  v /= v.norm();
  return PureState(std::move(v), dims, labels);
}

QuantumState random_state(const std::vector<int>& dims, const LabelList& labels,
                          int rank, Rng& rng) {
  const long dim = detail::product_of(dims);
  if (rank <= 0) rank = static_cast<int>(dim);
  Matrix g(dim, rank);
  for (int j = 0; j < rank; ++j) {
    for (long i = 0; i < dim; ++i) g(i, j) = rng.normal_complex();
  }
  const double norm = g.norm();
  g /= norm;
  Matrix rho = g * g.adjoint();
  return QuantumState::trusted(std::move(rho), dims, labels);
}

std::vector<Matrix> random_kraus_set(int dim, int outcomes, Rng& rng) {
  if (outcomes < 1) {
    throw std::invalid_argument("random_kraus_set: need at least one outcome");
  }
  Matrix v = random_isometry(dim * outcomes, dim, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(outcomes);
  for (int k = 0; k < outcomes; ++k) {
    kraus.push_back(v.middleRows(static_cast<long>(k) * dim, dim));
  }
  return kraus;
}

std::vector<double> random_probabilities(int n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    p[i] = -std::log(u);
    sum += p[i];
  }
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace condent
