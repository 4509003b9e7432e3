#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "advest/linalg.hpp"

namespace advest {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
enum class VarKind { NonNegative, Free };
enum class Sense { LessEqual, GreaterEqual, Equal };

std::string to_string(LpStatus status);

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-11;
  double feasibility_tol = 1e-9;
  std::int64_t max_iterations = 200000;
  // Steepest-edge pricing for this many iterations, then Bland's rule.
  // Zero selects 10 * (rows + cols) of the standard-form problem.
  std::int64_t bland_after = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;        // original variables
  double objective = 0.0;
  Vector duals;    // one multiplier per constraint, in insertion order
  // max(primal infeasibility, dual infeasibility, |x_j * reduced_cost_j|) of
  // the standard-form problem at the returned basis.
  double optimality_residual = 0.0;
  std::int64_t iterations = 0;
  bool switched_to_bland = false;
};

// Minimize c^T x + offset subject to linear constraints, by a dense two-phase
// tableau simplex. Free variables are split into positive and negative parts.
class LinearProgram {
 public:
  int add_variable(double cost, VarKind kind = VarKind::NonNegative);
  void add_constraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs);
  void set_objective_offset(double offset) { offset_ = offset; }

  int num_variables() const { return static_cast<int>(costs_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  LpSolution solve(const SimplexOptions& options = {}) const;

 private:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };

  std::vector<double> costs_;
  std::vector<VarKind> kinds_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

// Standard form: minimize c^T x subject to A x = b, x >= 0. `b` may have any
// sign. Exposed for tests and benchmarks.
struct StandardFormResult {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  Vector duals;
  double objective = 0.0;
  double optimality_residual = 0.0;
  std::int64_t iterations = 0;
  bool switched_to_bland = false;
};

StandardFormResult solve_standard_form(const Matrix& A, const Vector& b, const Vector& c,
                                       const SimplexOptions& options = {});

}  // namespace advest
