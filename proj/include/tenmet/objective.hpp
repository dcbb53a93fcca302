#ifndef TENMET_OBJECTIVE_HPP
#define TENMET_OBJECTIVE_HPP

#include <array>
#include <vector>

#include "tenmet/dataset.hpp"
#include "tenmet/neighbor_graph.hpp"
#include "tenmet/projection.hpp"

namespace tenmet {

/// All (i, j, p) with eta(i,j) = 1 and psi(i,p) = 0: the candidate set the
/// hinge term ranges over. The active subset (slack > 0) depends on W.
struct TripletSet {
  std::vector<std::array<Index, 3>> triplets;
};

TripletSet enumerate_triplets(const NeighborGraph& graph);

/// Everything needed to evaluate the per-mode objective and subgradient with
/// the other modes' projections folded in. `unfoldings[i]` is the mode-l
/// unfolding of sample i after applying every U_k, k != l; it stays constant
/// during one solve.
struct ModeContext {
  Index mode = 0;  // 1-based
  std::vector<Matrix> unfoldings;
  const NeighborGraph* graph = nullptr;
  double lambda = 0.0;
  Index sample_count = 0;
  Index order = 0;

  Matrix pull_matrix;    // sum_{ij} eta_ij (Y_i - Y_j)(Y_i - Y_j)^T
  TripletSet triplets;

  Index rows() const { return unfoldings.front().rows(); }
};

ModeContext make_context(const LabeledDataset& ds, const ProjectionStack& stack,
                         Index mode, const NeighborGraph& graph, double lambda);

/// Hinged slack of one triplet:
///   [1 + tr(D_ij W) - tr(D_ip W)]_+,  D_ab = (Y_a - Y_b)(Y_a - Y_b)^T.
double slack(const ModeContext& ctx, const Matrix& w, Index i, Index j, Index p);

/// Single-mode slice of the convexified objective:
///   mu ||W||_* + lambda/(2NL) sum eta_ij tr(D_ij W)
///             + 1/(2NL) sum_{ijp} eta_ij (1 - psi_ip) slack_ijp.
/// W is assumed PSD, so the nuclear norm is its trace.
double objective_value(const ModeContext& ctx, const Matrix& w, double mu);

/// Subgradient of the non-nuclear part at W:
///   lambda/(2NL) sum eta_ij D_ij
///   + 1/(2NL) sum over triplets with slack > 0 of (D_ij - D_ip).
Matrix subgradient(const ModeContext& ctx, const Matrix& w);

}  // namespace tenmet

#endif  // TENMET_OBJECTIVE_HPP
