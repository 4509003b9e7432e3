#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace advest {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
  std::size_t used = 0;
  // Checkpoints dropped because their value was not positive.
  std::vector<double> excluded;
};

// Least-squares line through (ln n, ln value). Nonpositive values are
// excluded and listed; fewer than 5 usable points is an error.
RateFit fit_rate(const std::vector<std::pair<double, double>>& checkpoints);

}  // namespace advest
