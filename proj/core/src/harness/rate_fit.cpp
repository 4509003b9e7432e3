#include "advest/harness/rate_fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace advest {

RateFit fit_rate(const std::vector<std::pair<double, double>>& checkpoints) {
  RateFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, v] : checkpoints) {
    if (!(n > 0.0)) throw std::invalid_argument("fit_rate: checkpoint n must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) {
      fit.excluded.push_back(n);
      continue;
    }
    xs.push_back(std::log(n));
    ys.push_back(std::log(v));
  }
  fit.used = xs.size();
  if (fit.used < 5) {
    throw std::invalid_argument("fit_rate: need at least 5 positive checkpoints, have " +
                                std::to_string(fit.used));
  }
  const double k = static_cast<double>(fit.used);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: checkpoints must have distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

}  // namespace advest
