#ifndef TENMET_PROJECTION_HPP
#define TENMET_PROJECTION_HPP

#include <vector>

#include "tenmet/types.hpp"

namespace tenmet {

/// The learned per-mode projections U_l (J_l x I_l) together with their Gram
/// forms W_l = U_l^T U_l (I_l x I_l) and the discovered ranks J_l.
///
/// Embedding geometry depends on the grams only; the matrices are a
/// deterministic eigen-factorization of them.
struct ProjectionStack {
  std::vector<Matrix> matrices;  // U_l
  std::vector<Matrix> grams;     // W_l
  std::vector<Index> ranks;      // J_l

  Index order() const { return static_cast<Index>(matrices.size()); }

  /// Identity projections for the given ambient shape (no reduction).
  static ProjectionStack identity(const std::vector<Index>& dims);
};

}  // namespace tenmet

#endif  // TENMET_PROJECTION_HPP
