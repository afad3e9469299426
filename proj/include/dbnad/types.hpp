#pragma once

#include <Eigen/Dense>

namespace dbnad {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace dbnad
