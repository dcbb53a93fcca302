#ifndef TENMET_TENSOR_HPP
#define TENMET_TENSOR_HPP

#include <span>
#include <vector>

#include "tenmet/errors.hpp"
#include "tenmet/types.hpp"

namespace tenmet {

/// Dense real tensor of arbitrary order. Entries are stored in one flat
/// array with the LAST index varying fastest, so a 2D tensor is a row-major
/// matrix and order-L generalizes that layout.
///
/// Modes are 1-based throughout the public API (mode l addresses dimension
/// I_l, l = 1..L), matching the usual multilinear-algebra convention.
class DenseTensor {
 public:
  DenseTensor() = default;

  /// Zero tensor of the given shape.
  explicit DenseTensor(std::vector<Index> dims);

  /// Adopts an existing flat buffer; data.size() must equal the shape volume.
  DenseTensor(std::vector<Index> dims, std::vector<double> data);

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim(Index mode) const;  // 1-based
  Index size() const { return static_cast<Index>(data_.size()); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }
  double& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }

  /// Element access by multi-index (0-based indices, one per mode).
  double at(std::span<const Index> idx) const { return data_[offset(idx)]; }
  double& at(std::span<const Index> idx) { return data_[offset(idx)]; }
  double at(std::initializer_list<Index> idx) const {
    return at(std::span<const Index>(idx.begin(), idx.size()));
  }
  double& at(std::initializer_list<Index> idx) {
    return at(std::span<const Index>(idx.begin(), idx.size()));
  }

  /// Flat offset of a multi-index under the last-index-fastest layout.
  std::size_t offset(std::span<const Index> idx) const;

  bool operator==(const DenseTensor& other) const {
    return dims_ == other.dims_ && data_ == other.data_;
  }

 private:
  std::vector<Index> dims_;
  std::vector<double> data_;
};

/// Sum over all entries of the elementwise product. Requires equal shapes.
double scalar_product(const DenseTensor& a, const DenseTensor& b);

/// sqrt(scalar_product(a, a)).
double frobenius_norm(const DenseTensor& a);

/// l-mode product a x_l u: contracts dimension I_l of `a` against the columns
/// of `u` (J_l x I_l), producing a tensor with dims[l] replaced by J_l.
DenseTensor mode_product(const DenseTensor& a, const Matrix& u, Index mode);

/// l-mode unfolding, an I_l x prod_{k != l} I_k matrix. Column order is fixed
/// by the cyclic permutation (l+1, ..., L, 1, ..., l-1), first entry fastest:
///   col = sum_k idx[pi_k] * prod_{k' < k} I_{pi_k'}.
Matrix unfold(const DenseTensor& a, Index mode);

/// Inverse of unfold: fold(unfold(a, l), l, a.dims()) == a for every mode.
DenseTensor fold(const Matrix& m, Index mode, const std::vector<Index>& dims);

/// Numerical multilinear rank: per mode, the count of singular values of the
/// unfolding exceeding tol * sigma_max.
std::vector<Index> multilinear_rank(const DenseTensor& a, double tol);

// Elementwise arithmetic (shapes must match).
DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(double s, const DenseTensor& a);

}  // namespace tenmet

#endif  // TENMET_TENSOR_HPP
