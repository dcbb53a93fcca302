#ifndef TENMET_TRAINER_HPP
#define TENMET_TRAINER_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tenmet/dataset.hpp"
#include "tenmet/projection.hpp"
#include "tenmet/solver.hpp"

namespace tenmet {

struct TrainReport {
  int outer_iterations = 0;
  std::vector<double> objective_history;  // one entry per mode-solve
  std::vector<Index> final_ranks;
  double wall_time = 0.0;  // seconds
};

struct FitResult {
  ProjectionStack stack;
  TrainReport report;
};

/// Relative eigenvalue cutoff used when factoring U out of W.
inline constexpr double kRankTol = 1e-8;

/// Eigen-factorization of a PSD gram: keep eigenvalues above
/// rank_tol * lambda_max, return U = Lambda_+^{1/2} V_+^T (J x I) so that
/// U^T U reconstructs W. Falls back to the single leading eigenpair when
/// everything is below the cutoff.
Matrix recover_projection(const Matrix& w, double rank_tol);

/// Alternating per-mode optimization. Starts from identity grams, sweeps
/// modes 1..L, solving each with MFPC while the others stay fixed, and stops
/// when the relative objective decrease over a sweep drops below outer_tol
/// or after outer_max sweeps. A mode update is kept only if it does not
/// increase the full objective, so the recorded history is non-increasing.
///
/// The embedding dimensionality (J_1..J_L) falls out of the shrinkage and
/// the rank cutoff; there is no target-dimension parameter.
FitResult fit(const LabeledDataset& ds, int k1, int k2, double lambda,
              const SolverConfig& cfg, int outer_max, double outer_tol,
              std::uint64_t seed);

/// Same, from explicit initial gram matrices (one I_l x I_l PSD per mode).
FitResult fit(const LabeledDataset& ds, int k1, int k2, double lambda,
              const SolverConfig& cfg, int outer_max, double outer_tol,
              std::uint64_t seed, const std::vector<Matrix>& initial_grams);

/// Projects every sample: B_i = A_i x_1 U_1 ... x_L U_L. Labels carry over.
LabeledDataset transform(const ProjectionStack& stack, const LabeledDataset& ds);

/// Full objective of the current stack: mu ||W_l||_* summed over modes plus
/// the pull and hinge terms evaluated on the embeddings.
double global_objective(const LabeledDataset& ds, const ProjectionStack& stack,
                        const NeighborGraph& graph, double lambda, double mu);

/// LMM1 model container.
void save_model(const ProjectionStack& stack, const std::string& metadata,
                const std::filesystem::path& path);

struct LoadedModel {
  ProjectionStack stack;
  std::string metadata;
};

LoadedModel load_model(const std::filesystem::path& path);

}  // namespace tenmet

#endif  // TENMET_TRAINER_HPP
