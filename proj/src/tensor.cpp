#include "tenmet/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace tenmet {

namespace {

Index checked_volume(const std::vector<Index>& dims) {
  if (dims.empty()) throw BadDims("tensor must have at least one mode");
  Index volume = 1;
  for (Index d : dims) {
    if (d < 1) throw BadDims("tensor dimensions must be positive");
    volume *= d;
  }
  return volume;
}

void require_mode(const DenseTensor& a, Index mode) {
  if (mode < 1 || mode > a.order()) {
    std::ostringstream oss;
    oss << "mode " << mode << " out of range for order-" << a.order()
        << " tensor";
    throw ModeOutOfRange(oss.str());
  }
}

// Cyclic unfolding permutation (l+1, ..., L, 1, ..., l-1), 0-based entries.
std::vector<Index> unfold_permutation(Index order, Index mode0) {
  std::vector<Index> perm;
  perm.reserve(static_cast<std::size_t>(order - 1));
  for (Index k = mode0 + 1; k < order; ++k) perm.push_back(k);
  for (Index k = 0; k < mode0; ++k) perm.push_back(k);
  return perm;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<Index> dims)
    : dims_(std::move(dims)),
      data_(static_cast<std::size_t>(checked_volume(dims_)), 0.0) {}

DenseTensor::DenseTensor(std::vector<Index> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (static_cast<std::size_t>(checked_volume(dims_)) != data_.size())
    throw BadDims("data length does not match the tensor shape volume");
}

Index DenseTensor::dim(Index mode) const {
  if (mode < 1 || mode > order()) throw ModeOutOfRange("dim: bad mode");
  return dims_[static_cast<std::size_t>(mode - 1)];
}

std::size_t DenseTensor::offset(std::span<const Index> idx) const {
  Index off = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) off = off * dims_[k] + idx[k];
  return static_cast<std::size_t>(off);
}

double scalar_product(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims())
    throw DimensionMismatch("scalar_product: tensor shapes differ");
  double sum = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) sum += da[i] * db[i];
  return sum;
}

double frobenius_norm(const DenseTensor& a) {
  return std::sqrt(scalar_product(a, a));
}

Matrix unfold(const DenseTensor& a, Index mode) {
  require_mode(a, mode);
  const Index mode0 = mode - 1;
  const Index order = a.order();
  const auto& dims = a.dims();
  const Index rows = dims[static_cast<std::size_t>(mode0)];
  const Index cols = a.size() / rows;

  const auto perm = unfold_permutation(order, mode0);
  std::vector<Index> stride(perm.size());
  Index s = 1;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    stride[k] = s;
    s *= dims[static_cast<std::size_t>(perm[k])];
  }

  Matrix out(rows, cols);
  std::vector<Index> idx(static_cast<std::size_t>(order), 0);
  for (Index flat = 0; flat < a.size(); ++flat) {
    Index col = 0;
    for (std::size_t k = 0; k < perm.size(); ++k)
      col += idx[static_cast<std::size_t>(perm[k])] * stride[k];
    out(idx[static_cast<std::size_t>(mode0)], col) = a[flat];
    // odometer over the multi-index, last mode fastest
    for (Index k = order - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

DenseTensor fold(const Matrix& m, Index mode, const std::vector<Index>& dims) {
  const Index order = static_cast<Index>(dims.size());
  if (order < 1) throw ShapeInconsistent("fold: empty shape");
  if (mode < 1 || mode > order) throw ShapeInconsistent("fold: bad mode");
  for (Index d : dims)
    if (d < 1) throw ShapeInconsistent("fold: non-positive dimension");
  const Index mode0 = mode - 1;
  Index volume = 1;
  for (Index d : dims) volume *= d;
  const Index rows = dims[static_cast<std::size_t>(mode0)];
  if (m.rows() != rows || m.cols() != volume / rows)
    throw ShapeInconsistent("fold: matrix shape inconsistent with dims/mode");

  const auto perm = unfold_permutation(order, mode0);
  std::vector<Index> stride(perm.size());
  Index s = 1;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    stride[k] = s;
    s *= dims[static_cast<std::size_t>(perm[k])];
  }

  DenseTensor out(dims);
  std::vector<Index> idx(static_cast<std::size_t>(order), 0);
  for (Index flat = 0; flat < volume; ++flat) {
    Index col = 0;
    for (std::size_t k = 0; k < perm.size(); ++k)
      col += idx[static_cast<std::size_t>(perm[k])] * stride[k];
    out[flat] = m(idx[static_cast<std::size_t>(mode0)], col);
    for (Index k = order - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

DenseTensor mode_product(const DenseTensor& a, const Matrix& u, Index mode) {
  require_mode(a, mode);
  if (u.cols() != a.dim(mode)) {
    std::ostringstream oss;
    oss << "mode_product: matrix has " << u.cols() << " columns but mode "
        << mode << " has size " << a.dim(mode);
    throw DimensionMismatch(oss.str());
  }
  Matrix contracted = u * unfold(a, mode);
  std::vector<Index> dims = a.dims();
  dims[static_cast<std::size_t>(mode - 1)] = u.rows();
  return fold(contracted, mode, dims);
}

std::vector<Index> multilinear_rank(const DenseTensor& a, double tol) {
  if (tol <= 0.0) throw InvalidArgument("multilinear_rank: tol must be positive");
  std::vector<Index> ranks;
  ranks.reserve(static_cast<std::size_t>(a.order()));
  for (Index l = 1; l <= a.order(); ++l) {
    Eigen::JacobiSVD<Matrix> svd(unfold(a, l));
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff && sv(i) > 0.0) ++r;
    ranks.push_back(r);
  }
  return ranks;
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) throw DimensionMismatch("tensor +: shapes differ");
  DenseTensor out = a;
  for (Index i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) throw DimensionMismatch("tensor -: shapes differ");
  DenseTensor out = a;
  for (Index i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

DenseTensor operator*(double s, const DenseTensor& a) {
  DenseTensor out = a;
  for (Index i = 0; i < out.size(); ++i) out[i] *= s;
  return out;
}

}  // namespace tenmet
