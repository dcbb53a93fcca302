#include "tenmet/classifier.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "tenmet/errors.hpp"
#include "tenmet/trainer.hpp"

namespace tenmet {

KnnModel make_knn(const LabeledDataset& embedded, int k) {
  if (k < 1) throw InvalidArgument("make_knn: k must be >= 1");
  if (static_cast<Index>(k) > embedded.size())
    throw InvalidArgument("make_knn: k exceeds training size");
  return KnnModel{embedded.tensors, embedded.labels, k};
}

int predict(const KnnModel& model, const DenseTensor& query) {
  const Index n = static_cast<Index>(model.train_embeddings.size());
  if (n == 0 || model.k < 1 || static_cast<Index>(model.k) > n)
    throw InvalidArgument("predict: model has no usable neighbor set");
  if (query.dims() != model.train_embeddings.front().dims())
    throw ShapeMismatch("predict: query shape differs from training embeddings");

  std::vector<std::pair<double, Index>> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    order.emplace_back(
        frobenius_norm(query - model.train_embeddings[static_cast<std::size_t>(i)]),
        i);
  std::partial_sort(order.begin(), order.begin() + model.k, order.end());

  std::map<int, int> votes;
  for (int s = 0; s < model.k; ++s)
    ++votes[model.train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(s)].second)]];

  int best_label = 0, best_count = -1;
  for (const auto& [label, count] : votes)  // ascending label: ties pick smallest
    if (count > best_count) {
      best_label = label;
      best_count = count;
    }
  return best_label;
}

double evaluate(const ProjectionStack& stack, const LabeledDataset& train,
                const LabeledDataset& test, int k) {
  if (train.dims() != test.dims())
    throw ShapeMismatch("evaluate: train/test shapes differ");
  const KnnModel model = make_knn(transform(stack, train), k);
  const LabeledDataset embedded = transform(stack, test);

  Index correct = 0;
  for (Index i = 0; i < embedded.size(); ++i)
    if (predict(model, embedded.tensors[static_cast<std::size_t>(i)]) ==
        embedded.labels[static_cast<std::size_t>(i)])
      ++correct;
  return static_cast<double>(correct) / static_cast<double>(embedded.size());
}

}  // namespace tenmet
