#include "condent/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace condent {

namespace detail {

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> strides(dims.size());
  long acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    strides[i] = acc;
    acc *= dims[i];
  }
  return strides;
}

long product_of(const std::vector<int>& dims) {
  long acc = 1;
  for (int d : dims) acc *= d;
  return acc;
}

std::vector<int> positions_of(const LabelList& labels, const LabelList& subset,
                              const char* what) {
  std::vector<int> positions;
  positions.reserve(subset.size());
  std::set<std::string> seen;
  for (const auto& name : subset) {
    if (!seen.insert(name).second) {
      throw std::invalid_argument(std::string(what) + ": duplicate label '" +
                                  name + "'");
    }
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) {
      throw std::invalid_argument(std::string(what) + ": unknown label '" +
                                  name + "'");
    }
    positions.push_back(static_cast<int>(it - labels.begin()));
  }
  std::sort(positions.begin(), positions.end());
  return positions;
}

namespace {

// Decomposes flat into digits over dims at the given positions only.
inline void decompose(long flat, const std::vector<long>& strides,
                      const std::vector<int>& dims, std::vector<int>& digits) {
  for (std::size_t i = 0; i < dims.size(); ++i) {
    digits[i] = static_cast<int>((flat / strides[i]) % dims[i]);
  }
}

}  // namespace

Matrix partial_trace_matrix(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep_positions) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int p : keep_positions) kept[p] = true;

  std::vector<int> traced_positions;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) traced_positions.push_back(i);
  }

  const auto strides = strides_of(dims);
  long keep_dim = 1, traced_dim = 1;
  for (int p : keep_positions) keep_dim *= dims[p];
  for (int p : traced_positions) traced_dim *= dims[p];

  // Flat offsets contributed by the kept (resp. traced) digit tuples.
  std::vector<long> keep_offsets(keep_dim), traced_offsets(traced_dim);
  {
    std::vector<int> digits(keep_positions.size(), 0);
    for (long k = 0; k < keep_dim; ++k) {
      long off = 0;
      long rem = k;
      for (int i = static_cast<int>(keep_positions.size()) - 1; i >= 0; --i) {
        int d = dims[keep_positions[i]];
        digits[i] = static_cast<int>(rem % d);
        rem /= d;
        off += digits[i] * strides[keep_positions[i]];
      }
      keep_offsets[k] = off;
    }
  }
  {
    for (long t = 0; t < traced_dim; ++t) {
      long off = 0;
      long rem = t;
      for (int i = static_cast<int>(traced_positions.size()) - 1; i >= 0; --i) {
        int d = dims[traced_positions[i]];
        off += static_cast<long>(rem % d) * strides[traced_positions[i]];
        rem /= d;
      }
      traced_offsets[t] = off;
    }
  }

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (long r = 0; r < keep_dim; ++r) {
    for (long c = 0; c < keep_dim; ++c) {
      Complex acc(0.0, 0.0);
      for (long t = 0; t < traced_dim; ++t) {
        acc += m(keep_offsets[r] + traced_offsets[t],
                 keep_offsets[c] + traced_offsets[t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix vector_marginal(const Vector& v, const std::vector<int>& dims,
                       const std::vector<int>& keep_positions) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int p : keep_positions) kept[p] = true;
  std::vector<int> traced_positions;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) traced_positions.push_back(i);
  }

  const auto strides = strides_of(dims);
  long keep_dim = 1, traced_dim = 1;
  for (int p : keep_positions) keep_dim *= dims[p];
  for (int p : traced_positions) traced_dim *= dims[p];

  std::vector<long> keep_offsets(keep_dim), traced_offsets(traced_dim);
  for (long k = 0; k < keep_dim; ++k) {
    long off = 0;
    long rem = k;
    for (int i = static_cast<int>(keep_positions.size()) - 1; i >= 0; --i) {
      int d = dims[keep_positions[i]];
      off += static_cast<long>(rem % d) * strides[keep_positions[i]];
      rem /= d;
    }
    keep_offsets[k] = off;
  }
  for (long t = 0; t < traced_dim; ++t) {
    long off = 0;
    long rem = t;
    for (int i = static_cast<int>(traced_positions.size()) - 1; i >= 0; --i) {
      int d = dims[traced_positions[i]];
      off += static_cast<long>(rem % d) * strides[traced_positions[i]];
      rem /= d;
    }
    traced_offsets[t] = off;
  }

  // rho_keep = M M^dagger with M(k, t) = v[keep_offset + traced_offset].
  Matrix reshaped(keep_dim, traced_dim);
  for (long k = 0; k < keep_dim; ++k) {
    for (long t = 0; t < traced_dim; ++t) {
      reshaped(k, t) = v[keep_offsets[k] + traced_offsets[t]];
    }
  }
  return reshaped * reshaped.adjoint();
}

Matrix partial_transpose_matrix(const Matrix& m, const std::vector<int>& dims,
                                const std::vector<int>& positions) {
  std::vector<bool> flip(dims.size(), false);
  for (int p : positions) flip[p] = true;
  const auto strides = strides_of(dims);
  const long dim = m.rows();
  Matrix out(dim, dim);
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) {
      long rr = 0, cc = 0;
      for (std::size_t p = 0; p < dims.size(); ++p) {
        long rd = (r / strides[p]) % dims[p];
        long cd = (c / strides[p]) % dims[p];
        if (flip[p]) std::swap(rd, cd);
        rr += rd * strides[p];
        cc += cd * strides[p];
      }
      out(rr, cc) = m(r, c);
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

}  // namespace detail

namespace {

void check_shape(const Matrix& matrix, const std::vector<int>& dims,
                 const LabelList& labels) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("state matrix is not square");
  }
  if (dims.size() != labels.size()) {
    throw std::invalid_argument("dims and labels differ in length");
  }
  if (dims.empty()) {
    throw std::invalid_argument("state needs at least one subsystem");
  }
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
  }
  if (detail::product_of(dims) != matrix.rows()) {
    throw std::invalid_argument(
        "matrix size does not match the product of subsystem dimensions");
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("duplicate subsystem label '" + l + "'");
    }
  }
}

}  // namespace

QuantumState::QuantumState(Matrix matrix, std::vector<int> dims,
                           LabelList labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  check_shape(matrix, dims_, labels_);

  const double herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol::hermiticity) {
    throw std::invalid_argument("state matrix is not Hermitian (max |M - M^t| = " +
                                std::to_string(herm_err) + ")");
  }
  const double tr_err = std::abs(matrix.trace() - Complex(1.0, 0.0));
  if (tr_err > tol::trace_one) {
    throw std::invalid_argument("state matrix trace differs from 1 by " +
                                std::to_string(tr_err));
  }

  Matrix h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed during validation");
  }
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) {
    throw std::invalid_argument("state matrix is not positive semidefinite "
                                "(min eigenvalue = " +
                                std::to_string(min_eig) + ")");
  }

  // Clean spectrum so downstream logs see no spurious negatives.
  Eigen::VectorXd vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) < tol::spectrum_clamp) vals[i] = 0.0;
    if (vals[i] < 0.0) vals[i] = 0.0;
  }
  matrix_ = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumState::QuantumState(TrustedTag, Matrix matrix, std::vector<int> dims,
                           LabelList labels)
    : matrix_(std::move(matrix)),
      dims_(std::move(dims)),
      labels_(std::move(labels)) {}

QuantumState QuantumState::trusted(Matrix matrix, std::vector<int> dims,
                                   LabelList labels) {
  check_shape(matrix, dims, labels);
  return QuantumState(TrustedTag{}, std::move(matrix), std::move(dims),
                      std::move(labels));
}

bool QuantumState::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int QuantumState::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("unknown subsystem label '" + label + "'");
  }
  return static_cast<int>(it - labels_.begin());
}

long QuantumState::dim_of(const LabelList& subset) const {
  long acc = 1;
  for (const auto& l : subset) acc *= dims_[index_of(l)];
  return acc;
}

LabelList QuantumState::complement(const LabelList& subset) const {
  for (const auto& l : subset) (void)index_of(l);
  LabelList rest;
  for (const auto& l : labels_) {
    if (std::find(subset.begin(), subset.end(), l) == subset.end()) {
      rest.push_back(l);
    }
  }
  return rest;
}

PureState::PureState(Vector vector, std::vector<int> dims, LabelList labels)
    : vector_(std::move(vector)),
      dims_(std::move(dims)),
      labels_(std::move(labels)) {
  if (dims_.size() != labels_.size()) {
    throw std::invalid_argument("dims and labels differ in length");
  }
  if (detail::product_of(dims_) != vector_.size()) {
    throw std::invalid_argument(
        "vector size does not match the product of subsystem dimensions");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("duplicate subsystem label '" + l + "'");
    }
  }
  const double norm_err = std::abs(vector_.norm() - 1.0);
  if (norm_err > tol::unit_norm) {
    throw std::invalid_argument("pure state norm differs from 1 by " +
                                std::to_string(norm_err));
  }
}

QuantumState PureState::projector() const {
  Matrix m = vector_ * vector_.adjoint();
  // Normalize away the (<= 1e-12) norm slack so the projector has exact
  // unit trace.
  m /= m.trace().real();
  return QuantumState::trusted(std::move(m), dims_, labels_);
}

void Partition::validate(const QuantumState& state) const {
  std::set<std::string> seen;
  for (const auto& group : groups) {
    for (const auto& l : group) {
      (void)state.index_of(l);
      if (!seen.insert(l).second) {
        throw std::invalid_argument("partition groups overlap at label '" + l +
                                    "'");
      }
    }
  }
}

Ensemble::Ensemble(std::vector<double> probabilities,
                   std::vector<QuantumState> states) {
  if (probabilities.size() != states.size()) {
    throw std::invalid_argument("ensemble probability/state count mismatch");
  }
  if (states.empty()) {
    throw std::invalid_argument("ensemble must have at least one member");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (probabilities[i] < 0.0) {
      throw std::invalid_argument("ensemble probability is negative");
    }
    if (states[i].dims() != states[0].dims() ||
        states[i].labels() != states[0].labels()) {
      throw std::invalid_argument("ensemble members live on different systems");
    }
    sum += probabilities[i];
  }
  if (std::abs(sum - 1.0) > tol::trace_one) {
    throw std::invalid_argument("ensemble probabilities sum to " +
                                std::to_string(sum));
  }
  members_.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    members_.push_back(Member{probabilities[i], std::move(states[i])});
  }
}

QuantumState Ensemble::average() const {
  Matrix acc = Matrix::Zero(members_[0].state.dim(), members_[0].state.dim());
  for (const auto& m : members_) acc += m.probability * m.state.matrix();
  return QuantumState::trusted(std::move(acc), members_[0].state.dims(),
                               members_[0].state.labels());
}

// --- state algebra -----------------------------------------------------

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  for (const auto& l : b.labels()) {
    if (a.has_label(l)) {
      throw std::invalid_argument("tensor: duplicate label '" + l + "'");
    }
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  LabelList labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return QuantumState::trusted(detail::kron(a.matrix(), b.matrix()),
                               std::move(dims), std::move(labels));
}

PureState tensor(const PureState& a, const PureState& b) {
  for (const auto& l : b.labels()) {
    if (std::find(a.labels().begin(), a.labels().end(), l) !=
        a.labels().end()) {
      throw std::invalid_argument("tensor: duplicate label '" + l + "'");
    }
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  LabelList labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return PureState(detail::kron(a.vector(), b.vector()), std::move(dims),
                   std::move(labels));
}

QuantumState partial_trace(const QuantumState& s, const LabelList& keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep set is empty");
  }
  auto positions = detail::positions_of(s.labels(), keep, "partial_trace");
  if (positions.size() == s.labels().size()) return s;

  std::vector<int> kept_dims;
  LabelList kept_labels;
  for (int p : positions) {
    kept_dims.push_back(s.dims()[p]);
    kept_labels.push_back(s.labels()[p]);
  }
  return QuantumState::trusted(
      detail::partial_trace_matrix(s.matrix(), s.dims(), positions),
      std::move(kept_dims), std::move(kept_labels));
}

QuantumState partial_trace(const PureState& s, const LabelList& keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep set is empty");
  }
  auto positions = detail::positions_of(s.labels(), keep, "partial_trace");
  std::vector<int> kept_dims;
  LabelList kept_labels;
  for (int p : positions) {
    kept_dims.push_back(s.dims()[p]);
    kept_labels.push_back(s.labels()[p]);
  }
  return QuantumState::trusted(
      detail::vector_marginal(s.vector(), s.dims(), positions),
      std::move(kept_dims), std::move(kept_labels));
}

QuantumState permute_subsystems(const QuantumState& s,
                                const LabelList& new_order) {
  if (new_order.size() != s.labels().size()) {
    throw std::invalid_argument("permute_subsystems: wrong label count");
  }
  std::vector<int> source(new_order.size());
  for (std::size_t i = 0; i < new_order.size(); ++i) {
    source[i] = s.index_of(new_order[i]);
  }
  std::vector<int> seen(s.labels().size(), 0);
  for (int p : source) {
    if (seen[p]++) {
      throw std::invalid_argument("permute_subsystems: repeated label");
    }
  }

  std::vector<int> new_dims(new_order.size());
  for (std::size_t i = 0; i < new_order.size(); ++i) {
    new_dims[i] = s.dims()[source[i]];
  }
  const auto old_strides = detail::strides_of(s.dims());
  const auto new_strides = detail::strides_of(new_dims);
  const long dim = s.dim();

  std::vector<long> old_of_new(dim);
  for (long idx = 0; idx < dim; ++idx) {
    long old_idx = 0;
    for (std::size_t p = 0; p < new_dims.size(); ++p) {
      long digit = (idx / new_strides[p]) % new_dims[p];
      old_idx += digit * old_strides[source[p]];
    }
    old_of_new[idx] = old_idx;
  }

  Matrix out(dim, dim);
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) {
      out(r, c) = s.matrix()(old_of_new[r], old_of_new[c]);
    }
  }
  return QuantumState::trusted(std::move(out), std::move(new_dims), new_order);
}

PureState purify(const QuantumState& s, const std::string& env_label) {
  if (s.has_label(env_label)) {
    throw std::invalid_argument("purify: environment label '" + env_label +
                                "' already present");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("purify: eigendecomposition failed");
  }
  // Keep eigenvalues above the rank cutoff, largest first.
  std::vector<int> order;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    if (es.eigenvalues()[i] > tol::rank_cutoff) {
      order.push_back(static_cast<int>(i));
    }
  }
  const int rank = static_cast<int>(order.size());
  if (rank == 0) throw std::runtime_error("purify: state has numerical rank 0");

  const long dim = s.dim();
  Vector psi = Vector::Zero(dim * rank);
  double norm2 = 0.0;
  for (int m = 0; m < rank; ++m) {
    const double lambda = es.eigenvalues()[order[m]];
    norm2 += lambda;
    const double root = std::sqrt(lambda);
    for (long i = 0; i < dim; ++i) {
      psi[i * rank + m] = root * es.eigenvectors()(i, order[m]);
    }
  }
  psi /= std::sqrt(norm2);

  std::vector<int> dims = s.dims();
  dims.push_back(rank);
  LabelList labels = s.labels();
  labels.push_back(env_label);
  return PureState(std::move(psi), std::move(dims), std::move(labels));
}

Matrix partial_transpose(const QuantumState& s, const LabelList& on) {
  if (on.empty()) {
    throw std::invalid_argument("partial_transpose: empty subsystem set");
  }
  auto positions = detail::positions_of(s.labels(), on, "partial_transpose");
  return detail::partial_transpose_matrix(s.matrix(), s.dims(), positions);
}

QuantumState apply_channel(const QuantumState& s,
                           const std::vector<Matrix>& kraus,
                           const LabelList& target,
                           const std::vector<int>& out_dims,
                           const LabelList& out_labels) {
  if (kraus.empty()) {
    throw std::invalid_argument("apply_channel: no Kraus operators");
  }
  if (out_dims.size() != out_labels.size()) {
    throw std::invalid_argument("apply_channel: out dims/labels mismatch");
  }
  std::vector<int> positions =
      detail::positions_of(s.labels(), target, "apply_channel");
  // Target subsystems in the order given by the caller (positions_of sorts,
  // so recompute in caller order for the Kraus index convention).
  std::vector<int> caller_positions;
  for (const auto& l : target) caller_positions.push_back(s.index_of(l));

  long target_dim = 1;
  for (int p : caller_positions) target_dim *= s.dims()[p];
  long out_dim = detail::product_of(out_dims);

  for (const auto& k : kraus) {
    if (k.rows() != out_dim || k.cols() != target_dim) {
      throw std::invalid_argument("apply_channel: Kraus operator shape "
                                  "mismatch");
    }
  }
  Matrix completeness = Matrix::Zero(target_dim, target_dim);
  for (const auto& k : kraus) completeness += k.adjoint() * k;
  const double comp_err =
      (completeness - Matrix::Identity(target_dim, target_dim))
          .cwiseAbs()
          .maxCoeff();
  if (comp_err > tol::hermiticity) {
    throw std::invalid_argument(
        "apply_channel: Kraus set is not trace preserving (deviation " +
        std::to_string(comp_err) + ")");
  }

  // Move targets to the end, in caller order.
  LabelList rest;
  for (const auto& l : s.labels()) {
    if (std::find(target.begin(), target.end(), l) == target.end()) {
      rest.push_back(l);
    }
  }
  LabelList permuted_order = rest;
  permuted_order.insert(permuted_order.end(), target.begin(), target.end());
  QuantumState moved = permute_subsystems(s, permuted_order);

  long rest_dim = moved.dim() / target_dim;
  Matrix acc = Matrix::Zero(rest_dim * out_dim, rest_dim * out_dim);
  Matrix id_rest = Matrix::Identity(rest_dim, rest_dim);
  for (const auto& k : kraus) {
    Matrix embedded = detail::kron(id_rest, k);
    acc += embedded * moved.matrix() * embedded.adjoint();
  }

  for (const auto& l : out_labels) {
    if (std::find(rest.begin(), rest.end(), l) != rest.end()) {
      throw std::invalid_argument("apply_channel: output label '" + l +
                                  "' collides with an untouched subsystem");
    }
  }

  std::vector<int> new_dims;
  LabelList new_labels = rest;
  for (const auto& l : rest) new_dims.push_back(moved.dim_of(l));
  new_dims.insert(new_dims.end(), out_dims.begin(), out_dims.end());
  new_labels.insert(new_labels.end(), out_labels.begin(), out_labels.end());
  QuantumState result =
      QuantumState::trusted(std::move(acc), std::move(new_dims), new_labels);

  // Restore the original subsystem order when the channel maps the targets
  // onto themselves.
  std::vector<int> target_dims;
  for (int p : caller_positions) target_dims.push_back(s.dims()[p]);
  if (out_labels == target && out_dims == target_dims) {
    return permute_subsystems(result, s.labels());
  }
  return result;
}

std::pair<Ensemble, QuantumState> measurement_pushforward(
    const QuantumState& s, const std::vector<Matrix>& kraus,
    const LabelList& target, const std::string& flag_label) {
  if (s.has_label(flag_label)) {
    throw std::invalid_argument("measurement_pushforward: flag label '" +
                                flag_label + "' already present");
  }
  std::vector<int> caller_positions;
  for (const auto& l : target) caller_positions.push_back(s.index_of(l));
  long target_dim = 1;
  for (int p : caller_positions) target_dim *= s.dims()[p];
  for (const auto& k : kraus) {
    if (k.rows() != target_dim || k.cols() != target_dim) {
      throw std::invalid_argument(
          "measurement_pushforward: Kraus operators must be square on the "
          "target");
    }
  }
  Matrix completeness = Matrix::Zero(target_dim, target_dim);
  for (const auto& k : kraus) completeness += k.adjoint() * k;
  if ((completeness - Matrix::Identity(target_dim, target_dim))
          .cwiseAbs()
          .maxCoeff() > tol::hermiticity) {
    throw std::invalid_argument(
        "measurement_pushforward: Kraus set is not complete");
  }

  const int outcomes = static_cast<int>(kraus.size());
  std::vector<double> probabilities;
  std::vector<QuantumState> members;
  const long dim = s.dim();
  Matrix flagged = Matrix::Zero(dim * outcomes, dim * outcomes);

  LabelList rest;
  for (const auto& l : s.labels()) {
    if (std::find(target.begin(), target.end(), l) == target.end()) {
      rest.push_back(l);
    }
  }
  LabelList permuted_order = rest;
  permuted_order.insert(permuted_order.end(), target.begin(), target.end());
  QuantumState moved = permute_subsystems(s, permuted_order);
  long rest_dim = moved.dim() / target_dim;
  Matrix id_rest = Matrix::Identity(rest_dim, rest_dim);

  for (int k = 0; k < outcomes; ++k) {
    Matrix embedded = detail::kron(id_rest, kraus[k]);
    Matrix branch = embedded * moved.matrix() * embedded.adjoint();
    double p = branch.trace().real();
    if (p > tol::rank_cutoff) {
      Matrix normalized = branch / p;
      QuantumState member = permute_subsystems(
          QuantumState::trusted(std::move(normalized), moved.dims(),
                                moved.labels()),
          s.labels());
      flagged.block(k * dim, k * dim, dim, dim) = p * member.matrix();
      probabilities.push_back(p);
      members.push_back(std::move(member));
    }
  }
  // Renormalize probabilities exactly (dropped zero outcomes carry < 1e-12).
  double sum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  for (auto& p : probabilities) p /= sum;

  // Flag subsystem goes first so the flagged blocks are contiguous.
  std::vector<int> flagged_dims = {outcomes};
  for (int d : s.dims()) flagged_dims.push_back(d);
  LabelList flagged_labels = {flag_label};
  for (const auto& l : s.labels()) flagged_labels.push_back(l);

  // Reorder block structure: built above as flag (x) system.
  Matrix flagged_norm = flagged / flagged.trace().real();
  QuantumState flag_first = QuantumState::trusted(
      std::move(flagged_norm), std::move(flagged_dims), flagged_labels);
  // Present as system (x) flag (flag label last).
  LabelList final_order = s.labels();
  final_order.push_back(flag_label);
  QuantumState flagged_state = permute_subsystems(flag_first, final_order);

  return {Ensemble(std::move(probabilities), std::move(members)),
          std::move(flagged_state)};
}

double trace_distance(const QuantumState& a, const QuantumState& b) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Matrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  return es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  Matrix sqrt_a = es.eigenvectors() *
                  vals.cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint();
  Matrix inner = sqrt_a * b.matrix() * sqrt_a;
  Eigen::SelfAdjointEigenSolver<Matrix> es2(inner);
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < es2.eigenvalues().size(); ++i) {
    root_sum += std::sqrt(std::max(0.0, es2.eigenvalues()[i]));
  }
  return root_sum * root_sum;
}

int numerical_rank(const QuantumState& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix(), Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > tol::rank_cutoff) ++rank;
  }
  return rank;
}

Ensemble spectral_ensemble(const QuantumState& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix());
  std::vector<double> probabilities;
  std::vector<QuantumState> members;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    const double lambda = es.eigenvalues()[i];
    if (lambda <= tol::rank_cutoff) continue;
    Vector v = es.eigenvectors().col(i);
    Matrix proj = v * v.adjoint();
    probabilities.push_back(lambda);
    members.push_back(
        QuantumState::trusted(std::move(proj), s.dims(), s.labels()));
  }
  double sum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  for (auto& p : probabilities) p /= sum;
  return Ensemble(std::move(probabilities), std::move(members));
}

std::pair<PureState, PureState> aligned_purifications(
    const QuantumState& a, const QuantumState& b,
    const std::string& env_label) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("aligned_purifications: dimension mismatch");
  }
  const long dim = a.dim();

  auto sqrt_of = [](const QuantumState& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix());
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    return Matrix(es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint());
  };
  Matrix ra = sqrt_of(a);
  Matrix rb = sqrt_of(b);

  // Canonical purifications |phi> = vec(sqrt(rho)) with env index as the
  // column; rotate b's environment by the Uhlmann-optimal unitary.
  Eigen::JacobiSVD<Matrix> svd(ra * rb, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix u_opt = (svd.matrixV() * svd.matrixU().adjoint()).transpose();

  Vector phi(dim * dim), psi(dim * dim);
  Matrix rb_rot = rb * u_opt.transpose();
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      phi[i * dim + j] = ra(i, j);
      psi[i * dim + j] = rb_rot(i, j);
    }
  }
  phi /= phi.norm();
  psi /= psi.norm();

  std::vector<int> dims = a.dims();
  dims.push_back(static_cast<int>(dim));
  LabelList labels = a.labels();
  labels.push_back(env_label);
  return {PureState(phi, dims, labels), PureState(psi, dims, labels)};
}

}  // namespace condent
