#include "fixtures.hpp"

#include "advest/matrix_io.hpp"
#include "advest/random.hpp"

namespace advest::testing {

std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(ADVEST_DATA_DIR) / relative;
}

Matrix paths_matrix() {
  Matrix A(7, 4);
  A << 2, 0, 0, 1,
       2, 1, 0, 0,
       2, 0, 1, 0,
       2, 1, 0, 1,
       2, 1, 1, 0,
       2, 0, 1, 1,
       2, 1, 1, 1;
  return A;
}

Vector paths_mean() {
  Vector mu(4);
  mu << 5.47, 7.88, 11.51, 13.58;
  return mu;
}

Matrix partial_matrix() {
  Matrix A(5, 2);
  A << 1, 0,
       1, 0,
       1, 0,
       1, -1,
       1, 1;
  return A;
}

SensingProblem paths_problem(double sigma) {
  SensingProblem p;
  p.A = paths_matrix();
  p.mu_true = paths_mean();
  p.sigma = sigma;
  p.m = 1;
  p.adversaries = {6};
  return p;
}

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  RandomSource rng(seed, 99);
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) A(i, j) = rng.normal();
  }
  return A;
}

}  // namespace advest::testing
