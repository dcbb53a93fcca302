#include "tenmet/projection.hpp"

namespace tenmet {

ProjectionStack ProjectionStack::identity(const std::vector<Index>& dims) {
  ProjectionStack stack;
  stack.matrices.reserve(dims.size());
  stack.grams.reserve(dims.size());
  stack.ranks.reserve(dims.size());
  for (Index d : dims) {
    stack.matrices.push_back(Matrix::Identity(d, d));
    stack.grams.push_back(Matrix::Identity(d, d));
    stack.ranks.push_back(d);
  }
  return stack;
}

}  // namespace tenmet
