#include <gtest/gtest.h>

#include <cmath>

#include "advest/errors.hpp"
#include "advest/matrix_io.hpp"
#include "advest/random.hpp"
#include "advest/recoverability.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace advest;
using namespace advest::testing;

namespace {

EtaOptions exact() {
  EtaOptions o;
  o.method = EtaMethod::Exact;
  return o;
}

EtaOptions multistart() {
  EtaOptions o;
  o.method = EtaMethod::Multistart;
  return o;
}

// Regression constant for the seven-path matrix at m = 1; exact enumeration
// and multistart agree, and it equals 2 / (7 sqrt 13).
const double kPathsEta = 2.0 / (7.0 * std::sqrt(13.0));

}  // namespace

TEST(ComputeEta, IdentityExamples) {
  const Matrix I = Matrix::Identity(2, 2);
  const auto r0 = compute_eta(I, 0, exact());
  EXPECT_NEAR(r0.eta, 0.5, 1e-12);
  EXPECT_TRUE(r0.holds_nsp);
  EXPECT_TRUE(r0.certified);
  EXPECT_NEAR(eta_circle_oracle(I, 0), 0.5, 1e-6);

  const auto r1 = compute_eta(I, 1, exact());
  EXPECT_NEAR(r1.eta, -0.5, 1e-12);
  EXPECT_FALSE(r1.holds_nsp);
  EXPECT_TRUE(std::isinf(r1.K));
  EXPECT_NEAR(eta_circle_oracle(I, 1), -0.5, 1e-6);
}

TEST(ComputeEta, SevenPathPinned) {
  const Matrix A = paths_matrix();
  const auto r = compute_eta(A, 1, exact());
  EXPECT_TRUE(r.holds_nsp);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.method, EtaMethod::Exact);
  EXPECT_NEAR(r.eta, kPathsEta, 1e-10);
  EXPECT_NEAR(r.eta, 0.079242885175, 1e-11);
  // The grid can only overestimate the minimum.
  const double grid = eta_sphere_grid(A, 1, 120);
  EXPECT_GE(grid + 1e-12, r.eta);
  EXPECT_LE(grid, r.eta + 5e-3);

  const auto ms = compute_eta(A, 1, multistart());
  EXPECT_FALSE(ms.certified);
  EXPECT_GE(ms.eta, r.eta - 1e-12);
  EXPECT_NEAR(ms.eta, r.eta, 1e-6);
}

TEST(ComputeEta, WitnessAttainsReportedMargin) {
  const Matrix A = paths_matrix();
  const auto r = compute_eta(A, 1, exact());
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NEAR(r.witness->direction.norm(), 1.0, 1e-12);
  EXPECT_EQ(r.witness->subset.size(), 1u);
  EXPECT_NEAR(nsp_margin(A, r.witness->subset, r.witness->direction), r.eta, 1e-10);
  EXPECT_NEAR(brute_margin(A, 1, r.witness->direction), r.eta, 1e-10);
}

TEST(ComputeEta, MarginAgreesWithBruteForce) {
  const Matrix A = random_matrix(6, 3, 17);
  RandomSource rng(3, 0);
  for (int k = 0; k < 200; ++k) {
    Vector x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.normal();
    for (std::size_t m = 0; m <= 2; ++m) {
      ASSERT_NEAR(worst_subset_margin(A, m, x), brute_margin(A, m, x.normalized()), 1e-12);
    }
  }
}

TEST(ComputeEta, Homogeneity) {
  const Matrix A = paths_matrix();
  const double base = compute_eta(A, 1, exact()).eta;
  for (double c : {2.0, -3.0, 0.5}) {
    EXPECT_NEAR(compute_eta(c * A, 1, exact()).eta, std::abs(c) * base, 1e-9) << "c=" << c;
  }
}

TEST(ComputeEta, MonotoneInBudget) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix A = random_matrix(8, 3, seed);
    double prev = compute_eta(A, 0, exact()).eta;
    for (std::size_t m = 1; m < 5; ++m) {
      const double cur = compute_eta(A, m, exact()).eta;
      EXPECT_LE(cur, prev + 1e-12);
      prev = cur;
    }
  }
}

TEST(ComputeEta, MultistartUpperBoundsExact) {
  std::vector<std::pair<Matrix, std::size_t>> cases = {
      {random_matrix(6, 2, 5), 1}, {random_matrix(9, 3, 6), 1}, {random_matrix(7, 3, 8), 2},
      {random_matrix(5, 2, 9), 0}, {partial_matrix(), 1}};
  for (const auto& [A, m] : cases) {
    const double ex = compute_eta(A, m, exact()).eta;
    const double ms = compute_eta(A, m, multistart()).eta;
    EXPECT_GE(ms, ex - 1e-12);
    EXPECT_NEAR(ms, ex, 1e-6);
  }
  // d = 2: the circle oracle agrees with the exact value.
  const Matrix B = random_matrix(6, 2, 5);
  EXPECT_NEAR(eta_circle_oracle(B, 1), compute_eta(B, 1, exact()).eta, 1e-6);
}

TEST(ComputeEta, ErrorsAndDegenerateInputs) {
  EXPECT_THROW(compute_eta(Matrix::Identity(2, 2), 2), std::invalid_argument);
  const auto z = compute_eta(Matrix::Zero(3, 2), 1);
  EXPECT_EQ(z.eta, 0.0);
  EXPECT_FALSE(z.holds_nsp);
  // Exact mode refuses instances above the enumeration limits.
  EXPECT_THROW(compute_eta(random_matrix(13, 3, 1), 1, exact()), std::invalid_argument);
  const auto big = compute_eta(random_matrix(13, 3, 1), 1);
  EXPECT_EQ(big.method, EtaMethod::Multistart);
  EXPECT_FALSE(big.certified);
}

TEST(RobustnessK, Examples) {
  const Matrix I = Matrix::Identity(2, 2);
  const auto r0 = compute_eta(I, 0, exact());
  EXPECT_DOUBLE_EQ(robustness_K(r0, I, 0), 1.0);
  EXPECT_DOUBLE_EQ(r0.K, 1.0);

  const Matrix A = paths_matrix();
  const auto r = compute_eta(A, 1, exact());
  const double K = 2.0 * std::sqrt(7.0) / (7.0 * r.eta) + 1.0;
  EXPECT_NEAR(robustness_K(r, A, 1), K, 1e-9);
  EXPECT_NEAR(r.K, 10.5393920142, 1e-8);
  EXPECT_DOUBLE_EQ(r.a_bar, std::sqrt(7.0));

  const auto bad = compute_eta(I, 1, exact());
  EXPECT_THROW(robustness_K(bad, I, 1), RecoverabilityError);
}

TEST(PartialRecovery, PartialInstance) {
  const Matrix A = partial_matrix();
  EXPECT_FALSE(compute_eta(A, 1, exact()).holds_nsp);
  PartialStructure s;
  s.U = Matrix::Identity(2, 2).col(0);
  s.V = Matrix::Identity(2, 2).col(1);
  s.q = 1;
  const auto v = check_partial_recovery(A, s);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.certified);
  EXPECT_GT(v.margin, 1e-9);
  // q = 2 exceeds what this instance supports.
  s.q = 2;
  EXPECT_FALSE(check_partial_recovery(A, s).holds);
}

TEST(PartialRecovery, IdentityWithZeroBudget) {
  PartialStructure s;
  s.U = Matrix::Identity(2, 2).col(0);
  s.V = Matrix::Identity(2, 2).col(1);
  s.q = 0;
  const auto v = check_partial_recovery(Matrix::Identity(2, 2), s);
  EXPECT_TRUE(v.holds);
  EXPECT_NEAR(v.margin, 1.0, 1e-9);
}

TEST(PartialRecovery, RejectsNonDirectSum) {
  PartialStructure s;
  s.U = Vector::Ones(2);
  s.V = Vector::Ones(2);
  EXPECT_THROW(check_partial_recovery(partial_matrix(), s), std::invalid_argument);
  s.V = Matrix::Identity(2, 2);
  EXPECT_THROW(s.validate(2), std::invalid_argument);
}

TEST(L1Fit, ZeroErrorRecovers) {
  const Matrix A = partial_matrix();
  const Vector u = Vector::Unit(2, 0), v = Vector::Unit(2, 1);
  const Vector y = A * (3.0 * u + 2.0 * v);
  const L1Fit fit = l1_fit(A, u, v, y);
  EXPECT_NEAR(fit.residual, 0.0, 1e-12);
  EXPECT_NEAR(fit.alpha(0), 3.0, 1e-10);
  EXPECT_TRUE(fit.certified);
}

TEST(L1Fit, OneSparseErrorIsCorrected) {
  const Matrix A = partial_matrix();
  const Vector u = Vector::Unit(2, 0), v = Vector::Unit(2, 1);
  Vector y = A * (3.0 * u + 2.0 * v);
  y(1) += 4.0;
  const L1Fit fit = l1_fit(A, u, v, y);
  EXPECT_NEAR(fit.alpha(0), 3.0, 1e-10);
  EXPECT_LE(fit.residual, 4.0 + 1e-12);
  EXPECT_TRUE(fit.certified);
  const GridFit g = l1_grid_oracle(A, u, v, y, -10, 10);
  EXPECT_NEAR(g.alpha, 3.0, 2e-3);
  EXPECT_NEAR(g.objective, fit.residual, 1e-2);
  EXPECT_LE(fit.residual, g.objective + 1e-12);
}

TEST(L1Fit, TwoSparseErrorStillOptimal) {
  const Matrix A = partial_matrix();
  const Vector u = Vector::Unit(2, 0), v = Vector::Unit(2, 1);
  Vector y = A * (3.0 * u + 2.0 * v);
  y(0) += 10.0;
  y(1) += 10.0;
  const L1Fit fit = l1_fit(A, u, v, y);
  EXPECT_TRUE(fit.certified);
  EXPECT_LE(fit.residual, 20.0 + 1e-12);
  const GridFit g = l1_grid_oracle(A, u, v, y, -20, 20);
  EXPECT_LE(fit.residual, g.objective + 1e-12);
  EXPECT_NEAR(fit.residual, g.objective, 1e-2);
}

// Regression: a 128-row Gaussian instance used to be reported unbounded
// because drifted reduced costs made a split free variable look improving.
TEST(L1Fit, TallGaussianNotFalselyUnbounded) {
  RandomSource rng(1, 0);
  const Matrix A = Matrix::NullaryExpr(128, 4, [&](Index, Index) { return rng.normal(); });
  const Matrix U = Matrix::Identity(4, 4).leftCols(2), V = Matrix::Identity(4, 4).rightCols(2);
  Vector y = A * Vector::Ones(4);
  y(0) += 10.0;
  const L1Fit fit = l1_fit(A, U, V, y);
  EXPECT_TRUE(fit.certified);
  EXPECT_GE(fit.residual, 0.0);
  EXPECT_LE(fit.residual, 10.0 + 1e-9);
  EXPECT_NEAR(fit.alpha(0), 1.0, 1e-8);
  EXPECT_NEAR(fit.alpha(1), 1.0, 1e-8);
}

TEST(ComposeTomography, Examples) {
  const Matrix P = read_matrix(data_path("tomography/P.txt"));
  const Matrix B = read_matrix(data_path("tomography/B.txt"));
  EXPECT_EQ(compose_tomography(P, B), paths_matrix());
  EXPECT_EQ(compose_tomography(P, Matrix::Identity(8, 8)), P);
  EXPECT_EQ(compose_tomography(Matrix::Zero(7, 8), B), Matrix::Zero(7, 4));
  EXPECT_THROW(compose_tomography(P, Matrix::Identity(4, 4)), std::invalid_argument);
  Matrix bad = P;
  bad(0, 0) = 0.5;
  EXPECT_THROW(compose_tomography(bad, B), std::invalid_argument);
}

TEST(ForEachSubset, CountsAndOrder) {
  int count = 0;
  std::vector<std::size_t> first;
  for_each_subset(5, 2, [&](const std::vector<std::size_t>& s) {
    if (count++ == 0) first = s;
  });
  EXPECT_EQ(count, 10);
  EXPECT_EQ(first, (std::vector<std::size_t>{0, 1}));
  count = 0;
  for_each_subset(3, 0, [&](const std::vector<std::size_t>&) { ++count; });
  EXPECT_EQ(count, 1);
}
