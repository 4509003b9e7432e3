#pragma once

#include <cstdint>
#include <span>

#include "advest/linalg.hpp"
#include "advest/problem.hpp"
#include "advest/recoverability.hpp"

namespace advest {

struct RateConstants {
  double K = 1.0;
  double D_X = 0.0;
  double A_bar = 0.0;
  double C_N = 0.0;
  double Delta = 0.0;
  double E0_y = 0.0;
  double eta = 0.0;
  Mode mode = Mode::Async;
  std::size_t N = 1;
  std::size_t m = 0;

  // From the problem, the box, the starting point x0 and a certified eta.
  // Throws RecoverabilityError when the report does not establish eta > 0.
  static RateConstants compute(const SensingProblem& problem, const BoxProjection& box, const Vector& x0,
                               const RecoverabilityReport& report, Mode mode);
};

// Delta: sqrt(d Abar^2 (sigma^2 + mubar^2)) async, sqrt(d Abar^2 sigma^2) sync.
double delta_constant(Mode mode, Index d, double a_bar, double sigma, double mu_bar);
// C_N: 2(N-m)/sqrt(N) async, 2(N-m)/N sync.
double cn_constant(Mode mode, std::size_t N, std::size_t m);

// Smallest horizon each statement admits: 3, 1, 2.
std::int64_t min_horizon(int statement);

// Right-hand side of the rate theorem for statement 1, 2 or 3.
double theorem_bound(int statement, const RateConstants& c, std::int64_t n, double r);

// E0^2 prod_l (1 - b_l)^2 + c Delta^2 sum_t b_t^2 prod_{l > t} (1 - b_l)^2, with
// c = N (async) or 1 (sync) and b = betas[0..n-1].
double y_recursion_bound(double E0_y, double Delta, std::span<const double> betas, Mode mode,
                         std::size_t N);

}  // namespace advest
