#pragma once

#include <Eigen/Dense>

namespace ircg {

using Vector = Eigen::VectorXd;
/// Data matrices are row-major: one sample per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace ircg
