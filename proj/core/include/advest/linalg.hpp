#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

namespace advest {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// sign(r) in {-1, 0, +1}; zero only for an exact zero.
inline int sign(double r) { return (r > 0.0) - (r < 0.0); }

// Throws std::invalid_argument naming `what` when sizes differ.
void require_size(Index actual, Index expected, const std::string& what);

}  // namespace advest
