#include "tenmet/trainer.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <utility>

#include "tenmet/errors.hpp"
#include "tenmet/neighbor_graph.hpp"
#include "tenmet/objective.hpp"

namespace tenmet {

Matrix recover_projection(const Matrix& w, double rank_tol) {
  const Matrix sym = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    throw EigenFailure("recover_projection: eigendecomposition failed");

  const Vector& evals = es.eigenvalues();  // ascending
  const Index n = sym.rows();
  const double lam_max = std::max(evals(n - 1), 0.0);
  const double cutoff = rank_tol * lam_max;

  std::vector<Index> kept;
  for (Index s = n - 1; s >= 0; --s)  // descending order for determinism
    if (evals(s) > cutoff && evals(s) > 0.0) kept.push_back(s);
  if (kept.empty()) kept.push_back(n - 1);  // leading eigenpair fallback

  const Index j = static_cast<Index>(kept.size());
  Matrix u(j, n);
  for (Index r = 0; r < j; ++r) {
    const double lam = std::max(evals(kept[static_cast<std::size_t>(r)]), 0.0);
    u.row(r) = std::sqrt(lam) *
               es.eigenvectors().col(kept[static_cast<std::size_t>(r)]).transpose();
    // Eigenvector sign is arbitrary; pin it (largest-|entry| coordinate
    // positive) so the factorization is deterministic. U^T U is unaffected.
    Index peak = 0;
    u.row(r).cwiseAbs().maxCoeff(&peak);
    if (u(r, peak) < 0.0) u.row(r) = -u.row(r);
  }
  return u;
}

LabeledDataset transform(const ProjectionStack& stack, const LabeledDataset& ds) {
  const Index order = static_cast<Index>(ds.dims().size());
  if (stack.order() != order)
    throw ShapeMismatch("transform: stack order differs from data order");
  for (Index l = 0; l < order; ++l)
    if (stack.matrices[static_cast<std::size_t>(l)].cols() !=
        ds.dims()[static_cast<std::size_t>(l)])
      throw ShapeMismatch("transform: projection width differs from data dim");

  LabeledDataset out;
  out.labels = ds.labels;
  out.class_count = ds.class_count;
  out.tensors.reserve(ds.tensors.size());
  for (const auto& sample : ds.tensors) {
    DenseTensor b = sample;
    for (Index l = 1; l <= order; ++l)
      b = mode_product(b, stack.matrices[static_cast<std::size_t>(l - 1)], l);
    out.tensors.push_back(std::move(b));
  }
  return out;
}

double global_objective(const LabeledDataset& ds, const ProjectionStack& stack,
                        const NeighborGraph& graph, double lambda, double mu) {
  const LabeledDataset emb = transform(stack, ds);
  const Index n = emb.size();

  Matrix sq = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = frobenius_norm(emb.tensors[static_cast<std::size_t>(i)] -
                                      emb.tensors[static_cast<std::size_t>(j)]);
      sq(i, j) = sq(j, i) = d * d;
    }

  double nuclear = 0.0;
  for (const auto& w : stack.grams) nuclear += w.trace();

  // The per-mode trace terms all equal the embedding-space distances, so the
  // sum over L modes cancels the 1/L in the objective's normalizer.
  double pull = 0.0, hinge = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!graph.eta(i, j)) continue;
      pull += sq(i, j);
      for (Index p = 0; p < n; ++p)
        if (!graph.psi(i, p))
          hinge += std::max(0.0, 1.0 + sq(i, j) - sq(i, p));
    }

  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  return mu * nuclear + lambda * scale * pull + scale * hinge;
}

namespace {

FitResult fit_impl(const LabeledDataset& ds, int k1, int k2, double lambda,
                   const SolverConfig& cfg, int outer_max, double outer_tol,
                   std::uint64_t seed, ProjectionStack stack) {
  (void)seed;  // reserved: the default pipeline has no randomized choices
  const auto start = std::chrono::steady_clock::now();
  ds.validate();
  if (outer_max < 1) throw InvalidArgument("fit: outer_max must be >= 1");

  const NeighborGraph graph = build_graph(ds, k1, k2);
  if (graph.eta_edge_count() == 0)
    throw DegenerateGraph("fit: no within-class neighbor edges");

  const Index order = static_cast<Index>(ds.dims().size());

  // Pin the final regularization weight up front so one objective is being
  // minimized across all mode-solves. The automatic rule matches what the
  // solver would pick for the first solve.
  SolverConfig solver_cfg = cfg;
  if (solver_cfg.mu_bar <= 0.0) {
    const ModeContext ctx0 = make_context(ds, stack, 1, graph, lambda);
    const Matrix g0 = subgradient(ctx0, stack.grams.front());
    const double mu1 =
        cfg.mu_init_scale * std::max(max_eigenvalue(g0), 1e-12);
    solver_cfg.mu_bar = 1e-4 * mu1;
  }
  const double mu = solver_cfg.mu_bar;

  FitResult result;
  result.report.objective_history.reserve(
      static_cast<std::size_t>(outer_max) * static_cast<std::size_t>(order));
  double f_cur = global_objective(ds, stack, graph, lambda, mu);

  for (int sweep = 0; sweep < outer_max; ++sweep) {
    const double f_sweep_start = f_cur;
    for (Index l = 1; l <= order; ++l) {
      const ModeContext ctx = make_context(ds, stack, l, graph, lambda);
      const SolverState state =
          mfpc_solve(ctx, stack.grams[static_cast<std::size_t>(l - 1)], solver_cfg);

      ProjectionStack candidate = stack;
      candidate.grams[static_cast<std::size_t>(l - 1)] = state.w;
      Matrix u = recover_projection(state.w, kRankTol);
      candidate.ranks[static_cast<std::size_t>(l - 1)] = u.rows();
      candidate.matrices[static_cast<std::size_t>(l - 1)] = std::move(u);

      // Each solve descends on its own mode's slice; cross-mode coupling can
      // still push the full objective up, so keep the better stack.
      const double f_new = global_objective(ds, candidate, graph, lambda, mu);
      if (f_new <= f_cur) {
        stack = std::move(candidate);
        f_cur = f_new;
      }
      result.report.objective_history.push_back(f_cur);
    }
    ++result.report.outer_iterations;

    const double drop =
        (f_sweep_start - f_cur) / std::max(1.0, std::abs(f_sweep_start));
    if (drop < outer_tol) break;
  }

  result.report.final_ranks = stack.ranks;
  result.stack = std::move(stack);
  result.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

FitResult fit(const LabeledDataset& ds, int k1, int k2, double lambda,
              const SolverConfig& cfg, int outer_max, double outer_tol,
              std::uint64_t seed) {
  ds.validate();
  return fit_impl(ds, k1, k2, lambda, cfg, outer_max, outer_tol, seed,
                  ProjectionStack::identity(ds.dims()));
}

FitResult fit(const LabeledDataset& ds, int k1, int k2, double lambda,
              const SolverConfig& cfg, int outer_max, double outer_tol,
              std::uint64_t seed, const std::vector<Matrix>& initial_grams) {
  ds.validate();
  const auto& dims = ds.dims();
  if (initial_grams.size() != dims.size())
    throw ShapeMismatch("fit: one initial gram per mode required");

  ProjectionStack stack;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    const Matrix& w = initial_grams[l];
    if (w.rows() != dims[l] || w.cols() != dims[l])
      throw ShapeMismatch("fit: initial gram shape differs from data dim");
    Matrix u = recover_projection(w, kRankTol);
    stack.grams.push_back(0.5 * (w + w.transpose()));
    stack.ranks.push_back(u.rows());
    stack.matrices.push_back(std::move(u));
  }
  return fit_impl(ds, k1, k2, lambda, cfg, outer_max, outer_tol, seed,
                  std::move(stack));
}

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw TruncatedFile("model file ends inside a header field");
  return v;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double)) * m.size());
}

Matrix read_matrix(std::istream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double)) * m.size());
  if (!in) throw TruncatedFile("model file ends inside a matrix block");
  return m;
}

constexpr char kModelMagic[4] = {'L', 'M', 'M', '1'};

}  // namespace

void save_model(const ProjectionStack& stack, const std::string& metadata,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open model file for writing: " + path.string());

  out.write(kModelMagic, sizeof kModelMagic);
  write_u32(out, static_cast<std::uint32_t>(stack.order()));
  for (Index l = 0; l < stack.order(); ++l) {
    const Matrix& u = stack.matrices[static_cast<std::size_t>(l)];
    const Matrix& w = stack.grams[static_cast<std::size_t>(l)];
    write_u32(out, static_cast<std::uint32_t>(u.rows()));
    write_u32(out, static_cast<std::uint32_t>(u.cols()));
    write_matrix(out, u);
    write_matrix(out, w);
  }
  write_u32(out, static_cast<std::uint32_t>(metadata.size()));
  out.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
  if (!out) throw IoFailure("failed writing model file: " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open model file: " + path.string());

  char magic[4] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
    throw BadMagic("not a model file (bad magic)");

  const std::uint32_t order = read_u32(in);
  if (order == 0 || order > 32)
    throw ShapeInconsistent("model file order out of range");

  LoadedModel model;
  for (std::uint32_t l = 0; l < order; ++l) {
    const std::uint32_t j = read_u32(in);
    const std::uint32_t i = read_u32(in);
    if (j == 0 || i == 0 || j > i)
      throw ShapeInconsistent("model file projection shape invalid");
    model.stack.matrices.push_back(
        read_matrix(in, static_cast<Index>(j), static_cast<Index>(i)));
    model.stack.grams.push_back(
        read_matrix(in, static_cast<Index>(i), static_cast<Index>(i)));
    model.stack.ranks.push_back(static_cast<Index>(j));
  }

  const std::uint32_t meta_len = read_u32(in);
  model.metadata.resize(meta_len);
  in.read(model.metadata.data(), static_cast<std::streamsize>(meta_len));
  if (!in) throw TruncatedFile("model file ends inside the metadata block");
  return model;
}

}  // namespace tenmet
