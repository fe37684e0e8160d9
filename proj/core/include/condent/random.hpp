// Seeded randomness. All sampling is routed through Rng, which converts
// mt19937_64 output to doubles explicitly so streams are reproducible across
// standard libraries (std::normal_distribution is not portable).
#pragma once

#include <cstdint>
#include <random>

#include "condent/state.hpp"

namespace condent {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller over explicit uniforms.
  double normal();

  // Complex standard normal (unit total variance).
  Complex normal_complex();

  // Deterministic child seed for an independent stream.
  std::uint64_t derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Haar-random isometry (rows x cols, rows >= cols): V^dagger V = I.
Matrix random_isometry(int rows, int cols, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);

// Haar-random pure state on the given dims.
PureState random_pure_state(const std::vector<int>& dims,
                            const LabelList& labels, Rng& rng);

// Induced-measure mixed state: partial trace of a Haar-random pure state on
// dims (x) rank. rank <= 0 means full rank.
QuantumState random_state(const std::vector<int>& dims, const LabelList& labels,
                          int rank, Rng& rng);

// Random measurement: `outcomes` square Kraus operators on a dim-dimensional
// target, sliced from a Haar isometry (complete by construction).
std::vector<Matrix> random_kraus_set(int dim, int outcomes, Rng& rng);

// Random point on the probability simplex (normalized exponentials).
std::vector<double> random_probabilities(int n, Rng& rng);

}  // namespace condent
