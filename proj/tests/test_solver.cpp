#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <limits>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tenmet/objective.hpp"
#include "tenmet/solver.hpp"

using namespace tenmet;

namespace {

struct Instance {
  LabeledDataset ds;
  NeighborGraph graph;
  ModeContext ctx;
};

Instance clustered_instance(int per_class, Index dim, double noise,
                            std::uint64_t seed) {
  LabeledDataset ds = synth_clusters(2, per_class, {dim}, {2}, noise, seed);
  NeighborGraph graph = build_graph(ds, 2, 3);
  ModeContext ctx =
      make_context(ds, ProjectionStack::identity(ds.dims()), 1, graph, 0.5);
  return {std::move(ds), std::move(graph), std::move(ctx)};
}

Vector sorted_eigenvalues(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("shrink applies the elementwise rule on diagonal input") {
  Matrix z = Matrix::Zero(3, 3);
  z.diagonal() << 3.0, 1.0, 0.2;
  const Matrix w = shrink(z, 0.5);
  Matrix want = Matrix::Zero(3, 3);
  want.diagonal() << 2.5, 0.5, 0.0;
  CHECK((w - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shrink with zero threshold fixes PSD matrices") {
  std::mt19937_64 rng(60);
  const Matrix w = oracles::random_psd(4, 4, rng);
  CHECK((shrink(w, 0.0) - w).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(shrink(w, -0.1), InvalidArgument);
}

TEST_CASE("shrink soft-thresholds the spectrum of indefinite input") {
  std::mt19937_64 rng(61);
  const Matrix z = oracles::random_symmetric(6, rng);
  const Matrix w = shrink(z, 0.3);

  const Vector in = sorted_eigenvalues(z);
  const Vector out = sorted_eigenvalues(w);
  double nuclear_want = 0.0;
  for (Index i = 0; i < 6; ++i) {
    const double want = std::max(0.0, in(i) - 0.3);
    CHECK(out(i) == doctest::Approx(want).epsilon(1e-10));
    CHECK(out(i) <= std::max(in(i), 0.0) + 1e-12);  // never increases
    nuclear_want += want;
  }
  CHECK(out.minCoeff() >= -1e-12);  // PSD result
  CHECK(w.trace() == doctest::Approx(nuclear_want).epsilon(1e-10));

  // Rank can only drop relative to the positive part of the input spectrum.
  const Index rank_in = (in.array() > 1e-12).count();
  const Index rank_out = (out.array() > 1e-12).count();
  CHECK(rank_out <= rank_in);
}

TEST_CASE("identical single-class data drives the iterate to zero") {
  LabeledDataset ds;
  ds.class_count = 1;
  for (int i = 0; i < 5; ++i) {
    ds.tensors.push_back(DenseTensor({3}, {2, 2, 2}));
    ds.labels.push_back(1);
  }
  const NeighborGraph graph = build_graph(ds, 2, 2);
  const ModeContext ctx =
      make_context(ds, ProjectionStack::identity({3}), 1, graph, 1.0);

  SolverConfig cfg;
  const SolverState state = mfpc_solve(ctx, Matrix::Identity(3, 3), cfg);
  CHECK(state.w.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("every recorded iterate stays symmetric and PSD") {
  auto inst = clustered_instance(6, 4, 0.1, 5);
  SolverConfig cfg;
  cfg.record_iterates = true;
  cfg.t_max = 60;
  const SolverState state = mfpc_solve(inst.ctx, Matrix::Identity(4, 4), cfg);
  REQUIRE(!state.iterates.empty());
  for (const auto& w : state.iterates) {
    CHECK((w - Matrix(w.transpose())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sorted_eigenvalues(w).minCoeff() >= -1e-10);
  }
}

TEST_CASE("auto step size yields non-increasing objectives at fixed mu") {
  auto inst = clustered_instance(8, 5, 0.2, 6);
  SolverConfig cfg;
  const SolverState state = mfpc_solve(inst.ctx, Matrix::Identity(5, 5), cfg);
  REQUIRE(state.objective_trace.size() == state.mu_trace.size());
  for (std::size_t t = 1; t < state.objective_trace.size(); ++t)
    if (state.mu_trace[t] == state.mu_trace[t - 1])
      CHECK(state.objective_trace[t] <= state.objective_trace[t - 1] + 1e-9);
}

TEST_CASE("one-order solves agree across restarts") {
  auto inst = clustered_instance(6, 4, 0.05, 7);

  SolverConfig cfg;
  cfg.mu_bar = 1e-3;
  cfg.rel_tol = 1e-9;
  cfg.t_max = 1000;

  const SolverState from_identity =
      mfpc_solve(inst.ctx, Matrix::Identity(4, 4), cfg);
  const double f_identity =
      objective_value(inst.ctx, from_identity.w, cfg.mu_bar);

  std::mt19937_64 rng(70);
  double f_best = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < 5; ++restart) {
    const Matrix w0 = oracles::random_psd(4, 3, rng);
    const SolverState state = mfpc_solve(inst.ctx, w0, cfg);
    f_best = std::min(f_best, objective_value(inst.ctx, state.w, cfg.mu_bar));
  }
  CHECK(std::abs(f_identity - f_best) <= 1e-6 * (1.0 + std::abs(f_best)));
}

TEST_CASE("infinite tolerance stops after one iteration per continuation stage") {
  auto inst = clustered_instance(6, 4, 0.1, 8);
  SolverConfig cfg;
  cfg.rel_tol = std::numeric_limits<double>::infinity();
  const SolverState state = mfpc_solve(inst.ctx, Matrix::Identity(4, 4), cfg);

  const std::set<double> stages(state.mu_trace.begin(), state.mu_trace.end());
  CHECK(state.objective_trace.size() == stages.size());
  CHECK(state.iterations_used == static_cast<int>(stages.size()));
  // The schedule is strictly decreasing down to the final weight.
  CHECK(state.mu_current == *stages.begin());
}

TEST_CASE("a sane fixed step size completes and descends at fixed mu") {
  auto inst = clustered_instance(6, 4, 0.1, 9);
  const Matrix g0 =
      subgradient(inst.ctx, Matrix::Identity(4, 4));
  SolverConfig cfg;
  cfg.tau = 0.5 / max_eigenvalue(g0);  // inside the theoretical stability range
  cfg.t_max = 80;
  const SolverState state = mfpc_solve(inst.ctx, Matrix::Identity(4, 4), cfg);
  CHECK(state.iterations_used > 0);
  CHECK(sorted_eigenvalues(state.w).minCoeff() >= -1e-10);
}

TEST_CASE("solver configuration is validated") {
  auto inst = clustered_instance(4, 3, 0.1, 10);
  SolverConfig bad;
  bad.t_max = 0;
  CHECK_THROWS_AS(mfpc_solve(inst.ctx, Matrix::Identity(3, 3), bad),
                  InvalidArgument);
  SolverConfig bad_decay;
  bad_decay.mu_decay = 1.0;
  CHECK_THROWS_AS(mfpc_solve(inst.ctx, Matrix::Identity(3, 3), bad_decay),
                  InvalidArgument);
}

TEST_CASE("max_eigenvalue picks the top of the spectrum") {
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 1.0, 5.0, 2.0;
  CHECK(max_eigenvalue(m) == doctest::Approx(5.0));
}

}  // TEST_SUITE
