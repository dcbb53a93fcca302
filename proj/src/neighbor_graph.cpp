#include "tenmet/neighbor_graph.hpp"

#include <algorithm>

#include "tenmet/errors.hpp"

namespace tenmet {

Index NeighborGraph::eta_edge_count() const {
  Index count = 0;
  for (auto v : eta_) count += v;
  return count;
}

Matrix pairwise_distances(const LabeledDataset& ds) {
  const Index n = ds.size();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double dist = frobenius_norm(ds.tensors[static_cast<std::size_t>(i)] -
                                         ds.tensors[static_cast<std::size_t>(j)]);
      d(i, j) = d(j, i) = dist;
    }
  return d;
}

NeighborGraph build_graph(const LabeledDataset& ds, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw InvalidArgument("build_graph: k1, k2 must be >= 1");
  const auto counts = ds.class_sizes();
  for (int c = 0; c < ds.class_count; ++c)
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw EmptyClass("class " + std::to_string(c + 1) + " is empty");

  const Index n = ds.size();
  const Matrix dist = pairwise_distances(ds);
  NeighborGraph graph(n, k1, k2);

  std::vector<std::pair<double, Index>> pool;
  for (Index i = 0; i < n; ++i) {
    const int yi = ds.labels[static_cast<std::size_t>(i)];

    pool.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i && ds.labels[static_cast<std::size_t>(j)] == yi)
        pool.emplace_back(dist(i, j), j);
    std::sort(pool.begin(), pool.end());  // ties fall to the smaller index
    const std::size_t targets = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(k1));
    for (std::size_t k = 0; k < targets; ++k) graph.set_eta(i, pool[k].second);

    pool.clear();
    for (Index p = 0; p < n; ++p)
      if (ds.labels[static_cast<std::size_t>(p)] != yi) pool.emplace_back(dist(i, p), p);
    std::sort(pool.begin(), pool.end());
    const std::size_t impostors = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(k2));
    for (std::size_t k = 0; k < impostors; ++k) graph.clear_psi(i, pool[k].second);
  }
  return graph;
}

}  // namespace tenmet
