#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace acil {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using ClassId = std::uint32_t;
using ClassList = std::vector<ClassId>;

}  // namespace acil
