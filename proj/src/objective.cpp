#include "tenmet/objective.hpp"

#include <cmath>

#include "tenmet/errors.hpp"

namespace tenmet {

namespace {

// tr((Y_a - Y_b)(Y_a - Y_b)^T W) for one pair, given the cached products
// WY_i = W * Y_i and self terms s_i = tr(Y_i^T W Y_i).
struct TraceCache {
  std::vector<Matrix> wy;
  std::vector<double> self;

  explicit TraceCache(const ModeContext& ctx, const Matrix& w) {
    const auto& ys = ctx.unfoldings;
    wy.reserve(ys.size());
    self.reserve(ys.size());
    for (const auto& y : ys) {
      wy.push_back(w * y);
      self.push_back(wy.back().cwiseProduct(y).sum());
    }
  }

  double pair_trace(const ModeContext& ctx, Index a, Index b) const {
    const auto& ya = ctx.unfoldings[static_cast<std::size_t>(a)];
    const auto& yb = ctx.unfoldings[static_cast<std::size_t>(b)];
    const double cross = wy[static_cast<std::size_t>(a)].cwiseProduct(yb).sum();
    return self[static_cast<std::size_t>(a)] + self[static_cast<std::size_t>(b)] -
           2.0 * cross;
  }
};

}  // namespace

TripletSet enumerate_triplets(const NeighborGraph& graph) {
  TripletSet set;
  const Index n = graph.size();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!graph.eta(i, j)) continue;
      for (Index p = 0; p < n; ++p)
        if (!graph.psi(i, p)) set.triplets.push_back({i, j, p});
    }
  return set;
}

ModeContext make_context(const LabeledDataset& ds, const ProjectionStack& stack,
                         Index mode, const NeighborGraph& graph, double lambda) {
  const Index order = static_cast<Index>(ds.dims().size());
  if (mode < 1 || mode > order) throw ModeOutOfRange("make_context: bad mode");
  if (stack.order() != order)
    throw ShapeMismatch("make_context: projection stack order differs from data");
  for (Index l = 1; l <= order; ++l)
    if (l != mode &&
        stack.matrices[static_cast<std::size_t>(l - 1)].cols() != ds.dims()[static_cast<std::size_t>(l - 1)])
      throw ShapeMismatch("make_context: projection shape differs from data");

  ModeContext ctx;
  ctx.mode = mode;
  ctx.graph = &graph;
  ctx.lambda = lambda;
  ctx.sample_count = ds.size();
  ctx.order = order;

  ctx.unfoldings.reserve(ds.tensors.size());
  for (const auto& sample : ds.tensors) {
    DenseTensor projected = sample;
    for (Index l = 1; l <= order; ++l)
      if (l != mode)
        projected = mode_product(projected, stack.matrices[static_cast<std::size_t>(l - 1)], l);
    ctx.unfoldings.push_back(unfold(projected, mode));
  }

  const Index rows = ctx.rows();
  ctx.pull_matrix = Matrix::Zero(rows, rows);
  for (Index i = 0; i < ctx.sample_count; ++i)
    for (Index j = i + 1; j < ctx.sample_count; ++j)
      if (graph.eta(i, j)) {
        const Matrix diff = ctx.unfoldings[static_cast<std::size_t>(i)] -
                            ctx.unfoldings[static_cast<std::size_t>(j)];
        // eta is symmetric, so each unordered pair appears twice in the sum.
        ctx.pull_matrix.selfadjointView<Eigen::Lower>().rankUpdate(diff, 2.0);
      }
  ctx.pull_matrix = Matrix(ctx.pull_matrix.selfadjointView<Eigen::Lower>());

  ctx.triplets = enumerate_triplets(graph);
  return ctx;
}

double slack(const ModeContext& ctx, const Matrix& w, Index i, Index j, Index p) {
  const auto& ys = ctx.unfoldings;
  const Matrix dij = ys[static_cast<std::size_t>(i)] - ys[static_cast<std::size_t>(j)];
  const Matrix dip = ys[static_cast<std::size_t>(i)] - ys[static_cast<std::size_t>(p)];
  const double tij = (w * dij).cwiseProduct(dij).sum();
  const double tip = (w * dip).cwiseProduct(dip).sum();
  return std::max(0.0, 1.0 + tij - tip);
}

double objective_value(const ModeContext& ctx, const Matrix& w, double mu) {
  const double scale = 1.0 / (2.0 * static_cast<double>(ctx.sample_count) *
                              static_cast<double>(ctx.order));
  const TraceCache cache(ctx, w);

  double hinge = 0.0;
  for (const auto& [i, j, p] : ctx.triplets.triplets) {
    const double s =
        1.0 + cache.pair_trace(ctx, i, j) - cache.pair_trace(ctx, i, p);
    if (s > 0.0) hinge += s;
  }

  const double pull = ctx.pull_matrix.cwiseProduct(w).sum();  // tr(P W)
  return mu * w.trace() + ctx.lambda * scale * pull + scale * hinge;
}

Matrix subgradient(const ModeContext& ctx, const Matrix& w) {
  const double scale = 1.0 / (2.0 * static_cast<double>(ctx.sample_count) *
                              static_cast<double>(ctx.order));
  const TraceCache cache(ctx, w);

  // Shared pairs across active triplets collapse into per-pair weights.
  const Index n = ctx.sample_count;
  std::vector<double> weight(static_cast<std::size_t>(n * n), 0.0);
  auto at = [n](Index a, Index b) { return static_cast<std::size_t>(a * n + b); };
  for (const auto& [i, j, p] : ctx.triplets.triplets) {
    const double s =
        1.0 + cache.pair_trace(ctx, i, j) - cache.pair_trace(ctx, i, p);
    if (s > 0.0) {
      weight[at(i, j)] += 1.0;
      weight[at(i, p)] -= 1.0;
    }
  }

  const Index rows = ctx.rows();
  Matrix g = Matrix::Zero(rows, rows);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const double c = weight[at(a, b)];
      if (c == 0.0) continue;
      const Matrix diff = ctx.unfoldings[static_cast<std::size_t>(a)] -
                          ctx.unfoldings[static_cast<std::size_t>(b)];
      g.selfadjointView<Eigen::Lower>().rankUpdate(diff, c);
    }
  g = Matrix(g.selfadjointView<Eigen::Lower>());
  return scale * (ctx.lambda * ctx.pull_matrix + g);
}

}  // namespace tenmet
