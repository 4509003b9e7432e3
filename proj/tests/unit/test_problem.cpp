#include <gtest/gtest.h>

#include <cmath>

#include "advest/problem.hpp"
#include "fixtures.hpp"

using namespace advest;
using advest::testing::paths_problem;

TEST(SampleMeasurement, NoiselessIsDotProduct) {
  SensingProblem p = paths_problem(0.0);
  RandomSource rng(1, 0);
  EXPECT_DOUBLE_EQ(sample_measurement(p, 0, rng), 24.52);
}

TEST(SampleMeasurement, ZeroRowGivesZero) {
  SensingProblem p;
  p.A = Matrix::Zero(2, 2);
  p.A(1, 0) = 1.0;
  p.mu_true = Vector::Constant(2, 3.0);
  RandomSource rng(1, 0);
  EXPECT_EQ(sample_measurement(p, 0, rng), 0.0);
}

TEST(SampleMeasurement, MonteCarloMean) {
  SensingProblem p = paths_problem(100.0);
  RandomSource rng(5, 0);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_measurement(p, 0, rng);
  const double norm = p.A.row(0).norm();
  EXPECT_NEAR(sum / n, 24.52, 3.0 * 100.0 * norm / 1000.0);
}

TEST(SampleMeasurement, RejectsAdversarialAndOutOfRange) {
  SensingProblem p = paths_problem(1.0);
  RandomSource rng(1, 0);
  EXPECT_THROW(sample_measurement(p, 6, rng), std::invalid_argument);
  EXPECT_THROW(sample_measurement(p, 7, rng), std::invalid_argument);
}

TEST(SensingProblem, ValidateInvariants) {
  SensingProblem p = paths_problem(1.0);
  EXPECT_NO_THROW(p.validate());
  SensingProblem q = p;
  q.m = 0;
  EXPECT_THROW(q.validate(), std::invalid_argument);  // |adversaries| > m
  q = p;
  q.A = Matrix::Zero(7, 4);
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = p;
  q.sigma = -1;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = p;
  q.mu_true = Vector::Zero(3);
  EXPECT_THROW(q.validate(), std::invalid_argument);
  EXPECT_EQ(p.honest_workers().size(), 6u);
  EXPECT_DOUBLE_EQ(p.max_row_norm(), std::sqrt(7.0));
  EXPECT_DOUBLE_EQ(p.max_abs_mean(), 13.58);
}

TEST(ProjectBox, Examples) {
  const BoxProjection box = BoxProjection::uniform(2, 0.0, 30.0);
  Vector x(2);
  x << -1, 5;
  EXPECT_EQ(project_box(x, box), Vector((Vector(2) << 0, 5).finished()));
  x << 31, 31;
  EXPECT_EQ(project_box(x, box), Vector((Vector(2) << 30, 30).finished()));
  x << 12.5, 0.0;
  EXPECT_EQ(project_box(x, box), x);
  EXPECT_THROW(project_box(Vector::Zero(3), box), std::invalid_argument);
}

TEST(ProjectBox, NonExpansive) {
  RandomSource rng(9, 0);
  BoxProjection box;
  box.lo = Vector(3);
  box.hi = Vector(3);
  box.lo << -1, 0, 2;
  box.hi << 1, 5, 2.5;
  for (int i = 0; i < 1000; ++i) {
    Vector x(3), y(3);
    for (int k = 0; k < 3; ++k) {
      x(k) = 10 * rng.normal();
      y(k) = 10 * rng.normal();
    }
    const Vector px = project_box(x, box);
    ASSERT_TRUE(box.contains(px));
    ASSERT_LE((px - project_box(y, box)).norm(), (x - y).norm() + 1e-12);
  }
}

TEST(BoxProjection, CenterAndDiameter) {
  const BoxProjection box = BoxProjection::uniform(4, 0.0, 30.0);
  EXPECT_EQ(box.center(), Vector::Constant(4, 15.0));
  EXPECT_DOUBLE_EQ(box.max_distance_from(box.center()), 30.0);
  EXPECT_DOUBLE_EQ(box.max_distance_from(Vector::Zero(4)), 60.0);
  BoxProjection bad = BoxProjection::uniform(2, 1.0, 0.0);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Sign, ExactZeroOnly) {
  EXPECT_EQ(sign(2.5), 1);
  EXPECT_EQ(sign(0.0), 0);
  EXPECT_EQ(sign(-0.0), 0);
  EXPECT_EQ(sign(-3.0), -1);
  EXPECT_EQ(sign(1e-300), 1);
}

TEST(Mode, ParseAndPrint) {
  EXPECT_EQ(parse_mode("sync"), Mode::Sync);
  EXPECT_EQ(to_string(Mode::Async), "async");
  EXPECT_THROW(parse_mode("both"), std::invalid_argument);
}
