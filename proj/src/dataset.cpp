#include "tenmet/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "tenmet/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "TDS1 reader/writer assumes a little-endian host");

namespace tenmet {

namespace {

constexpr char kMagic[4] = {'T', 'D', 'S', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw TruncatedFile("unexpected end of file in TDS1 header");
  return v;
}

// QR-orthonormalized Gaussian matrix, rows x cols with cols <= rows.
Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

}  // namespace

void LabeledDataset::validate() const {
  if (tensors.empty()) throw DimsMismatch("dataset has no samples");
  if (labels.size() != tensors.size())
    throw DimsMismatch("label count does not match sample count");
  if (class_count < 1) throw LabelOutOfRange("class_count must be >= 1");
  const auto& shape = tensors.front().dims();
  for (const auto& t : tensors)
    if (t.dims() != shape) throw DimsMismatch("samples have differing shapes");
  std::vector<Index> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 1 || y > class_count) {
      std::ostringstream oss;
      oss << "label " << y << " outside [1, " << class_count << "]";
      throw LabelOutOfRange(oss.str());
    }
    ++counts[static_cast<std::size_t>(y - 1)];
  }
  for (int c = 0; c < class_count; ++c)
    if (counts[static_cast<std::size_t>(c)] == 0) {
      std::ostringstream oss;
      oss << "class " << (c + 1) << " has no samples";
      throw LabelOutOfRange(oss.str());
    }
}

std::vector<Index> LabeledDataset::class_sizes() const {
  std::vector<Index> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());

  char magic[4] = {};
  in.read(magic, 4);
  if (!in) throw TruncatedFile("file shorter than the TDS1 magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw BadMagic("not a TDS1 container: " + path.string());

  const std::uint32_t order = read_u32(in);
  if (order < 1 || order > 32)
    throw DimsMismatch("TDS1 header declares an unreasonable tensor order");
  std::vector<Index> dims(order);
  Index volume = 1;
  for (auto& d : dims) {
    const std::uint32_t v = read_u32(in);
    if (v == 0) throw DimsMismatch("TDS1 header contains a zero dimension");
    d = static_cast<Index>(v);
    volume *= d;
  }
  const std::uint32_t n = read_u32(in);
  const std::uint32_t c = read_u32(in);
  if (n == 0) throw DimsMismatch("TDS1 header declares zero samples");

  LabeledDataset ds;
  ds.class_count = static_cast<int>(c);
  ds.labels.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    ds.labels.push_back(static_cast<int>(read_u32(in)));

  ds.tensors.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<double> data(static_cast<std::size_t>(volume));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) {
      std::ostringstream oss;
      oss << "TDS1 payload truncated at sample " << i << " of " << n;
      throw TruncatedFile(oss.str());
    }
    ds.tensors.emplace_back(dims, std::move(data));
  }
  ds.validate();
  return ds;
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");

  out.write(kMagic, 4);
  const auto& dims = ds.dims();
  write_u32(out, static_cast<std::uint32_t>(dims.size()));
  for (Index d : dims) write_u32(out, static_cast<std::uint32_t>(d));
  write_u32(out, static_cast<std::uint32_t>(ds.size()));
  write_u32(out, static_cast<std::uint32_t>(ds.class_count));
  for (int y : ds.labels) write_u32(out, static_cast<std::uint32_t>(y));
  for (const auto& t : ds.tensors)
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.data().size() * sizeof(double)));
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

LabeledDataset synth_clusters(int class_count, int per_class,
                              const std::vector<Index>& dims,
                              const std::vector<Index>& subspace_dims,
                              double noise_sigma, std::uint64_t seed) {
  if (class_count < 1 || per_class < 1)
    throw BadDims("synth_clusters: class_count and per_class must be >= 1");
  if (dims.empty() || dims.size() != subspace_dims.size())
    throw BadDims("synth_clusters: dims and subspace_dims must match in length");
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (dims[l] < 1 || subspace_dims[l] < 1)
      throw BadDims("synth_clusters: dimensions must be positive");
    if (subspace_dims[l] > dims[l])
      throw BadDims("synth_clusters: subspace_dims must not exceed dims");
  }
  if (noise_sigma < 0.0)
    throw BadDims("synth_clusters: noise_sigma must be non-negative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // One shared subspace: orthonormal lift per mode.
  std::vector<Matrix> lifts;
  lifts.reserve(dims.size());
  for (std::size_t l = 0; l < dims.size(); ++l)
    lifts.push_back(random_orthonormal(dims[l], subspace_dims[l], rng));

  LabeledDataset ds;
  ds.class_count = class_count;
  for (int c = 1; c <= class_count; ++c) {
    DenseTensor core(subspace_dims);
    for (Index i = 0; i < core.size(); ++i) core[i] = gauss(rng);
    DenseTensor mean = core;
    for (std::size_t l = 0; l < dims.size(); ++l)
      mean = mode_product(mean, lifts[l], static_cast<Index>(l + 1));
    for (int s = 0; s < per_class; ++s) {
      DenseTensor sample = mean;
      if (noise_sigma > 0.0)
        for (Index i = 0; i < sample.size(); ++i)
          sample[i] += noise_sigma * gauss(rng);
      ds.tensors.push_back(std::move(sample));
      ds.labels.push_back(c);
    }
  }
  ds.validate();
  return ds;
}

FoldPlan make_folds(const LabeledDataset& ds, int fold_count,
                    std::uint64_t seed) {
  ds.validate();
  if (fold_count < 2) throw InvalidArgument("make_folds: fold_count must be >= 2");
  const auto counts = ds.class_sizes();
  for (int c = 0; c < ds.class_count; ++c)
    if (counts[static_cast<std::size_t>(c)] < fold_count) {
      std::ostringstream oss;
      oss << "class " << (c + 1) << " has " << counts[static_cast<std::size_t>(c)]
          << " samples, fewer than " << fold_count << " folds";
      throw TooFewSamples(oss.str());
    }

  std::mt19937_64 rng(seed);
  FoldPlan plan;
  plan.fold_count = fold_count;
  plan.seed = seed;
  plan.assignments.assign(ds.tensors.size(), 0);
  for (int c = 1; c <= ds.class_count; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < ds.size(); ++i)
      if (ds.labels[static_cast<std::size_t>(i)] == c) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    // Rotate the round-robin start so no fold is systematically the largest.
    const int start = static_cast<int>(rng() % static_cast<std::uint64_t>(fold_count));
    for (std::size_t k = 0; k < members.size(); ++k)
      plan.assignments[static_cast<std::size_t>(members[k])] =
          static_cast<int>((start + k) % static_cast<std::size_t>(fold_count));
  }
  return plan;
}

std::pair<LabeledDataset, LabeledDataset> split_by_fold(
    const LabeledDataset& ds, const FoldPlan& plan, int fold) {
  if (plan.assignments.size() != ds.tensors.size())
    throw InvalidArgument("split_by_fold: plan does not match dataset");
  if (fold < 0 || fold >= plan.fold_count)
    throw InvalidArgument("split_by_fold: fold index out of range");
  LabeledDataset train, test;
  train.class_count = test.class_count = ds.class_count;
  for (std::size_t i = 0; i < ds.tensors.size(); ++i) {
    auto& dst = plan.assignments[i] == fold ? test : train;
    dst.tensors.push_back(ds.tensors[i]);
    dst.labels.push_back(ds.labels[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace tenmet
