#ifndef TENMET_NEIGHBOR_GRAPH_HPP
#define TENMET_NEIGHBOR_GRAPH_HPP

#include <cstdint>
#include <vector>

#include "tenmet/dataset.hpp"
#include "tenmet/types.hpp"

namespace tenmet {

/// Binary neighbor relations over the training set, fixed after construction.
///
/// eta(i,j) = 1 iff i, j share a class and either is among the other's k1
/// nearest same-class points. psi(i,p) = 0 iff i, p have different classes
/// and either is among the other's k2 nearest different-class points; psi is
/// 1 elsewhere (diagonal included).
class NeighborGraph {
 public:
  NeighborGraph(Index n, int k1, int k2)
      : n_(n), k1_(k1), k2_(k2),
        eta_(static_cast<std::size_t>(n * n), 0),
        psi_(static_cast<std::size_t>(n * n), 1) {}

  Index size() const { return n_; }
  int k1() const { return k1_; }
  int k2() const { return k2_; }

  bool eta(Index i, Index j) const { return eta_[flat(i, j)] != 0; }
  bool psi(Index i, Index j) const { return psi_[flat(i, j)] != 0; }

  void set_eta(Index i, Index j) { eta_[flat(i, j)] = eta_[flat(j, i)] = 1; }
  void clear_psi(Index i, Index j) { psi_[flat(i, j)] = psi_[flat(j, i)] = 0; }

  /// Count of ordered pairs with eta = 1.
  Index eta_edge_count() const;

 private:
  std::size_t flat(Index i, Index j) const {
    return static_cast<std::size_t>(i * n_ + j);
  }
  Index n_;
  int k1_, k2_;
  std::vector<std::uint8_t> eta_, psi_;
};

/// Symmetric matrix of tensor Frobenius distances, zero diagonal.
Matrix pairwise_distances(const LabeledDataset& ds);

/// Builds the eta/psi relations under the tensor Frobenius distance.
/// Same-class neighbors are ranked among same-class points only, impostors
/// among different-class points only. Distance ties break by smaller index.
NeighborGraph build_graph(const LabeledDataset& ds, int k1, int k2);

}  // namespace tenmet

#endif  // TENMET_NEIGHBOR_GRAPH_HPP
