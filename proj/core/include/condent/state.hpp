// Finite-dimensional quantum states over labeled subsystems: construction,
// composition, reduction, purification and channel application. All matrices
// are dense; subsystem order is the label-list order and flat indices are
// row-major with the first label most significant.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace condent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using LabelList = std::vector<std::string>;

namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double unit_norm = 1e-12;
inline constexpr double spectrum_clamp = 1e-12;
inline constexpr double rank_cutoff = 1e-12;
inline constexpr double extension_trace_back = 1e-9;
}  // namespace tol

class QuantumState {
 public:
  // Validates (squareness, Hermiticity, unit trace, positivity) and then
  // cleans the spectrum: symmetrize, zero eigenvalues of magnitude below
  // tol::spectrum_clamp, clamp the rest to [0, inf).
  QuantumState(Matrix matrix, std::vector<int> dims, LabelList labels);

  // Fast path for matrices that are valid by construction (internal results
  // such as partial traces of valid states). Skips validation and cleanup.
  static QuantumState trusted(Matrix matrix, std::vector<int> dims,
                              LabelList labels);

  const Matrix& matrix() const { return matrix_; }
  const std::vector<int>& dims() const { return dims_; }
  const LabelList& labels() const { return labels_; }

  Eigen::Index dim() const { return matrix_.rows(); }
  int subsystem_count() const { return static_cast<int>(dims_.size()); }

  bool has_label(const std::string& label) const;
  // Position of `label` in the label list; throws std::invalid_argument if
  // the label does not exist.
  int index_of(const std::string& label) const;
  int dim_of(const std::string& label) const { return dims_[index_of(label)]; }
  // Product of dims over a label subset.
  long dim_of(const LabelList& subset) const;
  LabelList complement(const LabelList& subset) const;

 private:
  struct TrustedTag {};
  QuantumState(TrustedTag, Matrix matrix, std::vector<int> dims,
               LabelList labels);

  Matrix matrix_;
  std::vector<int> dims_;
  LabelList labels_;
};

class PureState {
 public:
  PureState(Vector vector, std::vector<int> dims, LabelList labels);

  const Vector& vector() const { return vector_; }
  const std::vector<int>& dims() const { return dims_; }
  const LabelList& labels() const { return labels_; }
  Eigen::Index dim() const { return vector_.size(); }

  QuantumState projector() const;

 private:
  Vector vector_;
  std::vector<int> dims_;
  LabelList labels_;
};

// Ordered list of pairwise-disjoint label groups over a state's subsystems.
struct Partition {
  std::vector<LabelList> groups;

  Partition() = default;
  explicit Partition(std::vector<LabelList> g) : groups(std::move(g)) {}

  // Throws std::invalid_argument when groups overlap or name unknown labels.
  void validate(const QuantumState& state) const;
};

class Ensemble {
 public:
  struct Member {
    double probability;
    QuantumState state;
  };

  Ensemble(std::vector<double> probabilities, std::vector<QuantumState> states);

  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Member& operator[](std::size_t i) const { return members_[i]; }

  // Probability-weighted average state.
  QuantumState average() const;

 private:
  std::vector<Member> members_;
};

// --- state algebra -----------------------------------------------------

QuantumState tensor(const QuantumState& a, const QuantumState& b);
PureState tensor(const PureState& a, const PureState& b);

// Marginal on `keep` (original label order), tracing out the rest.
QuantumState partial_trace(const QuantumState& s, const LabelList& keep);
QuantumState partial_trace(const PureState& s, const LabelList& keep);

// Reorders the subsystems to `new_order` (a permutation of the labels).
QuantumState permute_subsystems(const QuantumState& s,
                                const LabelList& new_order);

// Purification with environment dimension equal to the numerical rank
// (eigenvalues above tol::rank_cutoff).
PureState purify(const QuantumState& s, const std::string& env_label);

// Transpose on the subsystems in `on`. The result is Hermitian with unit
// trace but may fail positivity, hence a plain matrix.
Matrix partial_transpose(const QuantumState& s, const LabelList& on);

// Applies the CPTP map given by `kraus` to the `target` subsystems (in the
// listed order). Each Kraus operator maps dim(target) -> prod(out_dims).
// When out_labels == target (same dims) the original subsystem order is
// preserved; otherwise the outputs are appended after the untouched
// subsystems.
QuantumState apply_channel(const QuantumState& s,
                           const std::vector<Matrix>& kraus,
                           const LabelList& target,
                           const std::vector<int>& out_dims,
                           const LabelList& out_labels);

// Measurement with square Kraus operators on `target`: returns the outcome
// ensemble {p_k, rho_k} (zero-probability outcomes dropped) and the flagged
// state sum_k p_k rho_k (x) |k><k| on a fresh subsystem `flag_label`.
std::pair<Ensemble, QuantumState> measurement_pushforward(
    const QuantumState& s, const std::vector<Matrix>& kraus,
    const LabelList& target, const std::string& flag_label);

// Trace norm of a - b (sum of absolute eigenvalues of the difference).
double trace_distance(const QuantumState& a, const QuantumState& b);
// Uhlmann fidelity (squared convention: 1 for identical states, |<phi|psi>|^2
// on pure pairs).
double fidelity(const QuantumState& a, const QuantumState& b);

// Numerical rank: count of eigenvalues above tol::rank_cutoff.
int numerical_rank(const QuantumState& s);

// Eigendecomposition as an ensemble of eigenvector projectors weighted by
// eigenvalues (zero eigenvalues dropped, descending order).
Ensemble spectral_ensemble(const QuantumState& s);

// Canonical purifications of a and b on a shared full-dimension environment,
// rotated so that |<phi|psi>|^2 equals fidelity(a, b).
std::pair<PureState, PureState> aligned_purifications(
    const QuantumState& a, const QuantumState& b, const std::string& env_label);

// --- low-level helpers (dense index bookkeeping) ------------------------

namespace detail {

// Row-major strides for the given dims (first subsystem most significant).
std::vector<long> strides_of(const std::vector<int>& dims);
long product_of(const std::vector<int>& dims);

// Positions of `subset` labels within `labels`, in label-list order.
std::vector<int> positions_of(const LabelList& labels, const LabelList& subset,
                              const char* what);

Matrix partial_trace_matrix(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep_positions);
Matrix partial_transpose_matrix(const Matrix& m, const std::vector<int>& dims,
                                const std::vector<int>& positions);
// Marginal of a pure state vector on the subsystems in keep_positions.
Matrix vector_marginal(const Vector& v, const std::vector<int>& dims,
                       const std::vector<int>& keep_positions);
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

}  // namespace detail

}  // namespace condent
