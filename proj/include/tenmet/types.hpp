#ifndef TENMET_TYPES_HPP
#define TENMET_TYPES_HPP

#include <Eigen/Dense>

namespace tenmet {

using Index = Eigen::Index;

// Row-major so that Matrix::data() is the on-disk layout of the container
// formats (TDS1 payloads, LMM1 factor blocks).
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace tenmet

#endif  // TENMET_TYPES_HPP
