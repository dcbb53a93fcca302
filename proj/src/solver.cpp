#include "tenmet/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <utility>
#include <vector>

#ifdef TENMET_SOLVER_TRACE
#include <cstdio>
#define TENMET_TRACE(...) std::fprintf(stderr, __VA_ARGS__)
#else
#define TENMET_TRACE(...) (void)0
#endif

#include "tenmet/errors.hpp"

namespace tenmet {

namespace {

constexpr double kLambdaFloor = 1e-12;   // keeps 1/lambda_max finite
constexpr int kMaxBacktracks = 60;
constexpr int kDivergenceLimit = 5;
constexpr std::size_t kWindowLen = 8;    // acceptance looks at this many recent values
constexpr int kStallLimit = 30;          // steps without a new best before damping
constexpr double kStageLift = 1e-2;      // stage starts this far off the cone boundary

double descent_slack(double f) { return 1e-12 * (1.0 + std::abs(f)); }

// Near a hinge kink the one-sided slopes differ, so -subgradient can point
// across the crease instead of along it and every backtracked step stalls.
constexpr double kCreaseBands[] = {1e-3, 1e-5, 1e-7};  // relative near-kink margins
constexpr std::size_t kMaxKinkSet = 64;
constexpr int kCreaseHalvings = 10;    // halvings that make a step "suspicious"
constexpr int kMinNormIters = 20000;

struct StepCandidate {
  Matrix w;
  double f = 0.0;
  int halvings = 0;
  bool accepted = false;
};

// Monotone step search along one direction: start from the stage step size
// and halve until the composite objective stops increasing.
StepCandidate try_ladder(const ModeContext& ctx, const Matrix& w,
                         const Matrix& dir, double tau_base, double mu,
                         double f_cur) {
  StepCandidate out;
  double tau = tau_base;
  for (int bt = 0; bt < kMaxBacktracks; ++bt) {
    Matrix w_next = shrink(w - tau * dir, tau * mu);
    const double f_next = objective_value(ctx, w_next, mu);
    if (f_next <= f_cur + descent_slack(f_cur)) {
      out.w = std::move(w_next);
      out.f = f_next;
      out.halvings = bt;
      out.accepted = true;
      break;
    }
    tau *= 0.5;
  }
  return out;
}

// Steepest-descent direction at a crease: the minimum-norm matrix among the
// valid subgradient choices, with hinge terms near their kink free to take
// any weight in [0, 1]. Solved as a small box-constrained quadratic program
// by projected gradient. Returns an empty matrix when no term is near a kink.
Matrix crease_direction(const ModeContext& ctx, const Matrix& w,
                        double band_rel) {
  const auto& ys = ctx.unfoldings;
  const std::size_t n_samples = ys.size();
  std::vector<Matrix> wy(n_samples);
  std::vector<double> self(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    wy[i] = w * ys[i];
    self[i] = wy[i].cwiseProduct(ys[i]).sum();
  }
  auto pair_trace = [&](Index a, Index b) {
    return self[static_cast<std::size_t>(a)] + self[static_cast<std::size_t>(b)] -
           2.0 * wy[static_cast<std::size_t>(a)].cwiseProduct(ys[static_cast<std::size_t>(b)]).sum();
  };

  struct Kink {
    double closeness;  // |margin| / band, for picking the tightest terms
    double margin;
    Index i, j, p;
  };
  std::vector<Kink> kinks;
  const Index n = ctx.sample_count;
  std::vector<double> weight(static_cast<std::size_t>(n * n), 0.0);
  auto at = [n](Index a, Index b) { return static_cast<std::size_t>(a * n + b); };
  for (const auto& [i, j, p] : ctx.triplets.triplets) {
    const double tij = pair_trace(i, j);
    const double tip = pair_trace(i, p);
    const double m = 1.0 + tij - tip;
    const double band = band_rel * (1.0 + std::abs(tij) + std::abs(tip));
    if (std::abs(m) <= band) {
      kinks.push_back({std::abs(m) / band, m, i, j, p});
    } else if (m > 0.0) {
      weight[at(i, j)] += 1.0;
      weight[at(i, p)] -= 1.0;
    }
  }
  if (kinks.empty()) return Matrix();
  if (kinks.size() > kMaxKinkSet) {
    std::sort(kinks.begin(), kinks.end(),
              [](const Kink& a, const Kink& b) { return a.closeness < b.closeness; });
    for (std::size_t b = kMaxKinkSet; b < kinks.size(); ++b)
      if (kinks[b].margin > 0.0) {  // overflow terms keep their strict weight
        weight[at(kinks[b].i, kinks[b].j)] += 1.0;
        weight[at(kinks[b].i, kinks[b].p)] -= 1.0;
      }
    kinks.resize(kMaxKinkSet);
  }

  const double scale = 1.0 / (2.0 * static_cast<double>(ctx.sample_count) *
                              static_cast<double>(ctx.order));
  const Index rows = ctx.rows();
  Matrix fixed = Matrix::Zero(rows, rows);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const double c = weight[at(a, b)];
      if (c == 0.0) continue;
      const Matrix diff = ys[static_cast<std::size_t>(a)] -
                          ys[static_cast<std::size_t>(b)];
      fixed.selfadjointView<Eigen::Lower>().rankUpdate(diff, c);
    }
  fixed = Matrix(fixed.selfadjointView<Eigen::Lower>());
  fixed = scale * (ctx.lambda * ctx.pull_matrix + fixed);

  const std::size_t m = kinks.size();
  std::vector<Matrix> basis;
  basis.reserve(m);
  for (const auto& k : kinks) {
    const Matrix dij = ys[static_cast<std::size_t>(k.i)] - ys[static_cast<std::size_t>(k.j)];
    const Matrix dip = ys[static_cast<std::size_t>(k.i)] - ys[static_cast<std::size_t>(k.p)];
    basis.push_back(scale * (dij * dij.transpose() - dip * dip.transpose()));
  }

  Vector q(static_cast<Index>(m));
  Vector theta(static_cast<Index>(m));
  Matrix gram(static_cast<Index>(m), static_cast<Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    q[static_cast<Index>(a)] = basis[a].cwiseProduct(fixed).sum();
    theta[static_cast<Index>(a)] = kinks[a].margin > 0.0 ? 1.0 : 0.0;
    for (std::size_t b = 0; b <= a; ++b) {
      const double h = basis[a].cwiseProduct(basis[b]).sum();
      gram(static_cast<Index>(a), static_cast<Index>(b)) = h;
      gram(static_cast<Index>(b), static_cast<Index>(a)) = h;
    }
  }

  const double step = 1.0 / std::max(max_eigenvalue(gram), kLambdaFloor);
#ifdef TENMET_SOLVER_TRACE
  Matrix dir0 = fixed;
  for (std::size_t b = 0; b < m; ++b) dir0 += theta[static_cast<Index>(b)] * basis[b];
#endif
  int used = 0;
  for (int it = 0; it < kMinNormIters; ++it, ++used) {
    Vector next = (theta - step * (q + gram * theta)).cwiseMax(0.0).cwiseMin(1.0);
    const double shift = (next - theta).cwiseAbs().maxCoeff();
    theta = std::move(next);
    if (shift < 1e-15) break;
  }

  Matrix dir = fixed;
  for (std::size_t b = 0; b < m; ++b) dir += theta[static_cast<Index>(b)] * basis[b];
#ifdef TENMET_SOLVER_TRACE
  double kkt = 0.0;
  const Vector grad_fin = q + gram * theta;
  for (Index b = 0; b < static_cast<Index>(m); ++b) {
    if (theta[b] <= 0.0) kkt = std::max(kkt, std::max(0.0, -grad_fin[b]));
    else if (theta[b] >= 1.0) kkt = std::max(kkt, std::max(0.0, grad_fin[b]));
    else kkt = std::max(kkt, std::abs(grad_fin[b]));
  }
  TENMET_TRACE("      qp m=%zu |dir0|=%.4g |dir|=%.4g iters=%d kkt=%.3g\n",
               m, dir0.norm(), dir.norm(), used, kkt);
#endif
  return dir;
}

#ifndef NDEBUG
void assert_psd_iterate(const Matrix& w) {
  assert((w - Matrix(w.transpose())).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + w.cwiseAbs().maxCoeff()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  assert(es.info() == Eigen::Success);
  assert(es.eigenvalues().minCoeff() >= -1e-10 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff()));
}
#endif

}  // namespace

double max_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw EigenFailure("eigenvalue computation did not converge");
  return es.eigenvalues().maxCoeff();
}

Matrix shrink(const Matrix& z, double threshold) {
  if (threshold < 0.0) throw InvalidArgument("shrink: threshold must be >= 0");
  const Matrix sym = 0.5 * (z + Matrix(z.transpose()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw EigenFailure("shrink: eigendecomposition did not converge");
  Vector clamped = (es.eigenvalues().array() - threshold).max(0.0);
  Matrix w = es.eigenvectors() * clamped.asDiagonal() *
             es.eigenvectors().transpose();
  return 0.5 * (w + Matrix(w.transpose()));
}

SolverState mfpc_solve(const ModeContext& ctx, const Matrix& w0,
                       const SolverConfig& cfg) {
  if (cfg.t_max < 1) throw InvalidArgument("mfpc_solve: t_max must be >= 1");
  if (cfg.mu_decay <= 0.0 || cfg.mu_decay >= 1.0)
    throw InvalidArgument("mfpc_solve: mu_decay must lie in (0, 1)");

  SolverState state;
  state.w = 0.5 * (w0 + Matrix(w0.transpose()));

  const double lam0 = std::max(max_eigenvalue(subgradient(ctx, state.w)), kLambdaFloor);
  double mu = cfg.mu_init_scale * lam0;
  const double mu_bar = cfg.mu_bar > 0.0 ? cfg.mu_bar : 1e-4 * mu;
  if (mu < mu_bar) mu = mu_bar;

  while (true) {
    // The fixed-point walk v may hop over hinge kinks where the objective
    // briefly rises; state.w keeps the best iterate seen, so the reported
    // objective trace stays non-increasing while the walk can slide along
    // creases instead of stalling against them. Each step sizes itself from
    // the current subgradient and backtracks against the worst recent value,
    // which rules out catastrophic jumps but still allows level crease hops.
    // The walk starts slightly off the boundary of the PSD cone: a rank-
    // deficient incumbent pins the step against the cone at hinge corners
    // (the face cannot rotate), while a small full-rank lift lets it escape.
    // The incumbent itself is only ever replaced by a better point.
    double f_best = objective_value(ctx, state.w, mu);
    Matrix v = state.w + kStageLift * std::max(max_eigenvalue(state.w), 0.0) *
                             Matrix::Identity(state.w.rows(), state.w.cols());
    double f_v = objective_value(ctx, v, mu);
    if (f_v < f_best) {
      f_best = f_v;
      state.w = v;
    }
    TENMET_TRACE("  stage mu=%.6g f0=%.10g flift=%.10g\n", mu, f_best, f_v);
    std::deque<double> window{f_v};  // recent accepted objective values
    double damp = 1.0;               // annealed when the best value stalls
    int stall = 0;
    int consecutive_increases = 0;

    for (int t = 0; t < cfg.t_max; ++t) {
      const Matrix g = subgradient(ctx, v);

      Matrix v_next;
      double f_next = 0.0;
      if (cfg.tau > 0.0) {
        v_next = shrink(v - cfg.tau * g, cfg.tau * mu);
        f_next = objective_value(ctx, v_next, mu);
        if (f_next > f_v + descent_slack(f_v)) {
          if (++consecutive_increases >= kDivergenceLimit)
            throw StepSizeDiverged(
                "objective increased five steps in a row; tau too large");
        } else {
          consecutive_increases = 0;
        }
      } else {
        const double tau = damp / std::max({max_eigenvalue(g), 1e-6 * g.norm(),
                                            kLambdaFloor});
        const double f_ref = *std::max_element(window.begin(), window.end());
        StepCandidate cand = try_ladder(ctx, v, g, tau, mu, f_ref);
        double moved = cand.accepted
                           ? (cand.w - v).norm() / std::max(1.0, v.norm())
                           : 0.0;
        TENMET_TRACE("    t=%d mu=%.4g tau=%.4g lmaxg=%.4g acc=%d bt=%d moved=%.3g f=%.10g\n",
                     t, mu, tau, max_eigenvalue(g), cand.accepted ? 1 : 0,
                     cand.halvings, moved, cand.accepted ? cand.f : f_v);
        // A heavily backtracked or vanishing step means the walk is pinned
        // against a hinge crease; retry along the minimum-norm subgradient,
        // which follows the crease instead of bouncing off it.
        if (!cand.accepted || cand.halvings >= kCreaseHalvings ||
            moved < cfg.rel_tol) {
          for (const double band : kCreaseBands) {
            const Matrix dir = crease_direction(ctx, v, band);
            TENMET_TRACE("      band=%.1g kinks=%s |dir|=%.4g\n", band,
                         dir.size() == 0 ? "none" : "some",
                         dir.size() == 0 ? 0.0 : dir.norm());
            if (dir.size() == 0 || dir.norm() <= kLambdaFloor) continue;
            const double tau_dir =
                damp / std::max({max_eigenvalue(dir), 1e-6 * dir.norm(),
                                 kLambdaFloor});
            StepCandidate alt = try_ladder(ctx, v, dir, tau_dir, mu, f_ref);
            TENMET_TRACE("      band=%.1g alt acc=%d bt=%d f=%.10g\n", band,
                         alt.accepted ? 1 : 0, alt.halvings,
                         alt.accepted ? alt.f : 0.0);
            if (!alt.accepted) continue;
            const double alt_moved =
                (alt.w - v).norm() / std::max(1.0, v.norm());
            const bool better = !cand.accepted || alt.f < cand.f ||
                                (alt_moved > 10.0 * moved &&
                                 alt.f <= cand.f + descent_slack(cand.f));
            if (better) {
              cand = std::move(alt);
              moved = alt_moved;
              if (moved >= cfg.rel_tol && cand.halvings < kCreaseHalvings)
                break;
            }
          }
        }
        if (!cand.accepted) break;  // every hop rises: stage is converged
        v_next = std::move(cand.w);
        f_next = cand.f;
      }

      const double rel_change =
          (v_next - v).norm() / std::max(1.0, v.norm());
      v = std::move(v_next);
      f_v = f_next;
      window.push_back(f_v);
      if (window.size() > kWindowLen) window.pop_front();
      if (f_v < f_best) {
        f_best = f_v;
        state.w = v;
        damp = std::min(1.0, 2.0 * damp);
        stall = 0;
      } else if (++stall >= kStallLimit) {
        damp *= 0.75;  // tighten the walk around the best point found
        stall = 0;
      }
      state.objective_trace.push_back(f_best);
      state.mu_trace.push_back(mu);
      if (cfg.record_iterates) state.iterates.push_back(v);
#ifndef NDEBUG
      assert_psd_iterate(v);
#endif
      ++state.iterations_used;
      if (rel_change < cfg.rel_tol) break;
    }

    state.mu_current = mu;
    if (mu <= mu_bar) break;
    mu = std::max(mu_bar, cfg.mu_decay * mu);
  }
  return state;
}

}  // namespace tenmet
