#include "advest/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "advest/errors.hpp"

namespace advest {

double delta_constant(Mode mode, Index d, double a_bar, double sigma, double mu_bar) {
  const double var = mode == Mode::Async ? sigma * sigma + mu_bar * mu_bar : sigma * sigma;
  return std::sqrt(static_cast<double>(d) * a_bar * a_bar * var);
}

double cn_constant(Mode mode, std::size_t N, std::size_t m) {
  const double honest = 2.0 * static_cast<double>(N - m);
  const double n = static_cast<double>(N);
  return mode == Mode::Async ? honest / std::sqrt(n) : honest / n;
}

RateConstants RateConstants::compute(const SensingProblem& problem, const BoxProjection& box,
                                     const Vector& x0, const RecoverabilityReport& report, Mode mode) {
  problem.validate();
  box.validate();
  RateConstants c;
  c.mode = mode;
  c.N = problem.num_workers();
  c.m = problem.m;
  c.eta = report.eta;
  c.K = robustness_K(report, problem.A, problem.m);
  c.A_bar = problem.max_row_norm();
  c.D_X = box.max_distance_from(x0);
  c.Delta = delta_constant(mode, problem.dim(), c.A_bar, problem.sigma, problem.max_abs_mean());
  c.C_N = cn_constant(mode, c.N, c.m);
  const Vector EY = problem.mean_measurements();
  c.E0_y = 0.0;
  for (std::size_t j : problem.honest_workers()) {
    c.E0_y = std::max(c.E0_y, std::abs(EY(static_cast<Index>(j))));
  }
  return c;
}

std::int64_t min_horizon(int statement) {
  switch (statement) {
    case 1: return 3;
    case 2: return 1;
    case 3: return 2;
  }
  throw std::invalid_argument("statement must be 1, 2 or 3");
}

double theorem_bound(int statement, const RateConstants& c, std::int64_t n, double r) {
  if (n < min_horizon(statement)) {
    throw std::invalid_argument("theorem_bound: statement " + std::to_string(statement) +
                                " needs n >= " + std::to_string(min_horizon(statement)));
  }
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("theorem_bound: r must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  const double sq = std::sqrt(nn);
  const double KD2 = c.K * c.D_X * c.D_X;
  const double A2 = c.A_bar * c.A_bar;
  const double CD = c.C_N * c.Delta;
  const double N = static_cast<double>(c.N);
  const double honest = static_cast<double>(c.N - c.m);
  switch (statement) {
    case 1:
      return (2.0 * KD2 / (1.0 - r) + A2 / 2.0 + 40.0 * r * honest * c.E0_y / (N * (1.0 - r))) / sq +
             CD / std::sqrt(2.0 * r) * std::sqrt(std::log(nn) / nn);
    case 2:
      return (2.0 * KD2 / (1.0 - r) + A2 / 2.0 +
              CD * (1.0 / std::sqrt(r) + 2.0 * (1.0 - std::sqrt(r))) / (1.0 - r)) /
             sq;
    case 3:
      return (4.0 * KD2 + (2.0 * A2 + 4.0 * CD) * std::log(2.0 / r)) / ((1.0 - r) * sq);
  }
  throw std::invalid_argument("statement must be 1, 2 or 3");
}

double y_recursion_bound(double E0_y, double Delta, std::span<const double> betas, Mode mode,
                         std::size_t N) {
  const double c = mode == Mode::Async ? static_cast<double>(N) : 1.0;
  // Backward pass: tail = prod_{l > t} (1 - b_l)^2.
  double tail = 1.0;
  double noise = 0.0;
  for (std::size_t k = betas.size(); k-- > 0;) {
    const double b = betas[k];
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("y_recursion_bound: beta outside (0, 1]");
    noise += b * b * tail;
    tail *= (1.0 - b) * (1.0 - b);
  }
  return E0_y * E0_y * tail + c * Delta * Delta * noise;
}

}  // namespace advest
