#pragma once

// Independent reference computations used to pin expected values. They share
// no code with the library beyond the Eigen types.

#include <cstdint>
#include <vector>

#include "advest/linalg.hpp"

namespace advest::testing {

// (1/N) min over |S| = m of [sum_{S^c} |a_j^T x| - sum_S |a_j^T x|], by
// trying every subset explicitly. x need not be normalized (it is here).
double brute_margin(const Matrix& A, std::size_t m, const Vector& x);

// Dense angle grid on the unit circle (d = 2), then a shrinking 1-D
// compass search around the best grid angle.
double eta_circle_oracle(const Matrix& A, std::size_t m, int angles = 100000);

// Hyperspherical angle grid for d = 3 or 4. An upper bound on eta.
double eta_sphere_grid(const Matrix& A, std::size_t m, int resolution);

// Brute-force l1 fit over scalar (alpha, beta): coarse grid over
// [lo, hi]^2, then a 1e-3 grid around the coarse optimum.
struct GridFit {
  double alpha;
  double beta;
  double objective;
};
GridFit l1_grid_oracle(const Matrix& A, const Vector& u, const Vector& v, const Vector& y, double lo,
                       double hi);

// y-recursion bound with each product evaluated from scratch (O(n^2)).
double y_bound_direct(double E0, double Delta, const std::vector<double>& betas, double c);

// Krum by enumerating every neighbour subset of size N - f - 2.
std::size_t krum_oracle(const std::vector<Vector>& vectors, std::size_t f);

}  // namespace advest::testing
