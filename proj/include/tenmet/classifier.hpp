#ifndef TENMET_CLASSIFIER_HPP
#define TENMET_CLASSIFIER_HPP

#include <vector>

#include "tenmet/dataset.hpp"
#include "tenmet/projection.hpp"

namespace tenmet {

/// Nearest-neighbor reference set in embedding space.
struct KnnModel {
  std::vector<DenseTensor> train_embeddings;
  std::vector<int> train_labels;
  int k = 1;
};

KnnModel make_knn(const LabeledDataset& embedded, int k);

/// Majority label among the k nearest training embeddings under the tensor
/// Frobenius distance. Distance ties admit the smaller training index; vote
/// ties resolve to the smallest class id among the tied labels.
int predict(const KnnModel& model, const DenseTensor& query);

/// Projects train and test through the stack, then scores k-NN accuracy of
/// the test set against the training embeddings.
double evaluate(const ProjectionStack& stack, const LabeledDataset& train,
                const LabeledDataset& test, int k);

}  // namespace tenmet

#endif  // TENMET_CLASSIFIER_HPP
