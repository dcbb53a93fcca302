#ifndef TENMET_DATASET_HPP
#define TENMET_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tenmet/tensor.hpp"

namespace tenmet {

/// Labeled tensor collection. All tensors share one shape; labels are
/// 1-based class ids in [1, class_count] and every class is non-empty.
struct LabeledDataset {
  std::vector<DenseTensor> tensors;
  std::vector<int> labels;
  int class_count = 0;

  Index size() const { return static_cast<Index>(tensors.size()); }
  const std::vector<Index>& dims() const { return tensors.front().dims(); }

  /// Throws if any structural invariant is violated.
  void validate() const;

  /// Per-class sample counts, indexed by class id - 1.
  std::vector<Index> class_sizes() const;
};

/// Stratified fold assignment: per-class counts in any two folds differ by
/// at most one.
struct FoldPlan {
  int fold_count = 0;
  std::vector<int> assignments;  // per-sample fold index in [0, fold_count)
  std::uint64_t seed = 0;
};

/// Reads a TDS1 container (see docs in README). Validates the result.
LabeledDataset load_dataset(const std::filesystem::path& path);

/// Writes a TDS1 container readable by load_dataset. Byte-exact round-trip.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);

/// Synthetic clustered data: class means are random tensors confined to a
/// shared low-multilinear-rank subspace (random orthonormal per-mode factors
/// applied to per-class core tensors) plus isotropic Gaussian noise.
/// Deterministic under `seed`.
LabeledDataset synth_clusters(int class_count, int per_class,
                              const std::vector<Index>& dims,
                              const std::vector<Index>& subspace_dims,
                              double noise_sigma, std::uint64_t seed);

/// Stratified fold assignment, deterministic under `seed`. Requires every
/// class to have at least fold_count samples.
FoldPlan make_folds(const LabeledDataset& ds, int fold_count,
                    std::uint64_t seed);

/// Subsets by fold membership: samples with assignment == fold go to the
/// second result (held out), the rest to the first.
std::pair<LabeledDataset, LabeledDataset> split_by_fold(
    const LabeledDataset& ds, const FoldPlan& plan, int fold);

}  // namespace tenmet

#endif  // TENMET_DATASET_HPP
