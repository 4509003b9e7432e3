#include "advest/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace advest {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// Dense tableau over [structural | artificial] columns. Row i holds B^{-1} A
// and rhs(i) is the value of basic variable basis[i].
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const SimplexOptions& options)
      : rows_(A.rows()),
        structural_(A.cols()),
        T_(A.rows(), A.cols() + A.rows()),
        rhs_(b),
        basis_(static_cast<std::size_t>(A.rows())),
        options_(options) {
    T_.leftCols(structural_) = A;
    T_.rightCols(rows_).setIdentity();
    for (Index i = 0; i < rows_; ++i) {
      if (rhs_(i) < 0.0) {
        T_.row(i).head(structural_) *= -1.0;
        rhs_(i) = -rhs_(i);
      }
      basis_[static_cast<std::size_t>(i)] = structural_ + i;
    }
    bland_after_ = options.bland_after > 0 ? options.bland_after
                                           : 10 * (rows_ + structural_);
  }

  // Phase I: minimize the sum of artificials.
  LpStatus phase_one() {
    Vector cost = Vector::Zero(T_.cols());
    cost.tail(rows_).setOnes();
    price(cost);
    LpStatus status = iterate(T_.cols());
    if (status != LpStatus::Optimal) return status;
    const double scale = 1.0 + rhs_.cwiseAbs().maxCoeff();
    if (objective_ > options_.feasibility_tol * scale) return LpStatus::Infeasible;
    drive_out_artificials();
    return LpStatus::Optimal;
  }

  // Phase II over structural columns only.
  LpStatus phase_two(const Vector& c) {
    Vector cost = Vector::Zero(T_.cols());
    cost.head(structural_) = c;
    price(cost);
    return iterate(structural_);
  }

  const std::vector<Index>& basis() const { return basis_; }
  const std::vector<bool>& redundant() const { return redundant_; }
  const Vector& rhs() const { return rhs_; }
  std::int64_t iterations() const { return iterations_; }
  bool switched_to_bland() const { return iterations_ > bland_after_; }

 private:
  void price(const Vector& cost) {
    cost_ = cost;
    reduced_ = cost.transpose();
    objective_ = 0.0;
    for (Index i = 0; i < rows_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) {
        reduced_ -= cb * T_.row(i);
        objective_ += cb * rhs_(i);
      }
    }
  }

  Index choose_entering(Index allowed_cols) const {
    const bool bland = iterations_ >= bland_after_;
    Index best = -1;
    double best_score = 0.0;
    for (Index j = 0; j < allowed_cols; ++j) {
      if (is_basic(j)) continue;
      const double d = reduced_(j);
      if (d >= -options_.cost_tol) continue;
      if (bland) return j;
      const double score = d * d / (1.0 + T_.col(j).squaredNorm());
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  Index choose_leaving(Index col) const {
    Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rows_; ++i) {
      const double a = T_(i, col);
      if (a <= options_.pivot_tol) continue;
      const double ratio = std::max(rhs_(i), 0.0) / a;
      if (leave < 0) {
        best_ratio = ratio;
        leave = i;
        continue;
      }
      const double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
      if (ratio < best_ratio - tie) {
        best_ratio = ratio;
        leave = i;
      } else if (ratio <= best_ratio + tie &&
                 basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
        leave = i;
      }
    }
    return leave;
  }

  LpStatus iterate(Index allowed_cols) {
    bool fresh = false;  // reduced costs recomputed since the last pivot
    while (true) {
      if (iterations_ >= options_.max_iterations) return LpStatus::IterationLimit;
      const Index enter = choose_entering(allowed_cols);
      if (enter < 0) return LpStatus::Optimal;
      const Index leave = choose_leaving(enter);
      if (leave < 0) {
        // Incremental updates drift; the mirror column of a basic split free
        // variable can then look improving with no blocking row. Only trust
        // an unbounded ray found with freshly computed reduced costs.
        if (fresh) return LpStatus::Unbounded;
        price(cost_);
        fresh = true;
        continue;
      }
      pivot(leave, enter);
      fresh = false;
      ++iterations_;
    }
  }

  void pivot(Index r, Index col) {
    const double p = T_(r, col);
    T_.row(r) /= p;
    rhs_(r) /= p;
    for (Index i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = T_(i, col);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      rhs_(i) -= f * rhs_(r);
      T_(i, col) = 0.0;
      if (std::abs(rhs_(i)) < 1e-14) rhs_(i) = 0.0;
    }
    const double f = reduced_(col);
    if (f != 0.0) {
      reduced_ -= f * T_.row(r);
      objective_ += f * rhs_(r);
      reduced_(col) = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = col;
  }

  void drive_out_artificials() {
    redundant_.assign(static_cast<std::size_t>(rows_), false);
    for (Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < structural_) continue;
      Index best = -1;
      double best_abs = options_.pivot_tol;
      for (Index j = 0; j < structural_; ++j) {
        if (is_basic(j)) continue;
        if (std::abs(T_(i, j)) > best_abs) {
          best_abs = std::abs(T_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
      } else {
        redundant_[static_cast<std::size_t>(i)] = true;
      }
    }
  }

  bool is_basic(Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  Index rows_;
  Index structural_;
  Matrix T_;
  Vector rhs_;
  Eigen::RowVectorXd reduced_;
  Vector cost_;
  double objective_ = 0.0;
  std::vector<Index> basis_;
  std::vector<bool> redundant_;
  SimplexOptions options_;
  std::int64_t iterations_ = 0;
  std::int64_t bland_after_ = 0;
};

}  // namespace

StandardFormResult solve_standard_form(const Matrix& A, const Vector& b, const Vector& c,
                                       const SimplexOptions& options) {
  require_size(b.size(), A.rows(), "simplex rhs");
  require_size(c.size(), A.cols(), "simplex cost");
  StandardFormResult result;
  result.x = Vector::Zero(A.cols());
  result.duals = Vector::Zero(A.rows());

  if (A.rows() == 0) {
    // Only bounds: optimal at zero unless some cost is negative.
    result.status = (c.array() < 0.0).any() ? LpStatus::Unbounded : LpStatus::Optimal;
    return result;
  }

  Tableau tableau(A, b, options);
  result.status = tableau.phase_one();
  if (result.status == LpStatus::Optimal) result.status = tableau.phase_two(c);
  result.iterations = tableau.iterations();
  result.switched_to_bland = tableau.switched_to_bland();
  if (result.status != LpStatus::Optimal) return result;

  // Re-solve the final basis against the original data to clean accumulated
  // elimination error, then recover the multipliers from B^T y = c_B.
  std::vector<Index> live_rows;
  std::vector<Index> live_cols;
  for (Index i = 0; i < A.rows(); ++i) {
    if (tableau.redundant()[static_cast<std::size_t>(i)]) continue;
    live_rows.push_back(i);
    live_cols.push_back(tableau.basis()[static_cast<std::size_t>(i)]);
  }
  const Index k = static_cast<Index>(live_rows.size());
  Matrix B(k, k);
  Vector b_live(k);
  Vector c_basis(k);
  for (Index r = 0; r < k; ++r) {
    b_live(r) = b(live_rows[r]);
    c_basis(r) = c(live_cols[r]);
    for (Index q = 0; q < k; ++q) B(r, q) = A(live_rows[r], live_cols[q]);
  }
  Eigen::FullPivLU<Matrix> lu(B);
  if (k > 0 && lu.isInvertible()) {
    Vector xb = lu.solve(b_live);
    Vector y_live = lu.transpose().solve(c_basis);
    for (Index q = 0; q < k; ++q) result.x(live_cols[q]) = std::max(xb(q), 0.0);
    for (Index r = 0; r < k; ++r) result.duals(live_rows[r]) = y_live(r);
  } else {
    for (Index i = 0; i < A.rows(); ++i) {
      const Index j = tableau.basis()[static_cast<std::size_t>(i)];
      if (j < A.cols()) result.x(j) = std::max(tableau.rhs()(i), 0.0);
    }
  }

  result.objective = c.dot(result.x);
  const Vector reduced = c - A.transpose() * result.duals;
  double residual = (A * result.x - b).cwiseAbs().maxCoeff();
  for (Index j = 0; j < A.cols(); ++j) {
    residual = std::max(residual, -reduced(j));
    residual = std::max(residual, std::abs(result.x(j) * reduced(j)));
  }
  result.optimality_residual = std::max(residual, 0.0);
  return result;
}

int LinearProgram::add_variable(double cost, VarKind kind) {
  costs_.push_back(cost);
  kinds_.push_back(kind);
  return static_cast<int>(costs_.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<std::pair<int, double>> terms, Sense sense,
                                   double rhs) {
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) {
      throw std::invalid_argument("LinearProgram: constraint references unknown variable");
    }
    (void)coef;
  }
  rows_.push_back({std::move(terms), sense, rhs});
}

LpSolution LinearProgram::solve(const SimplexOptions& options) const {
  // Column layout: one column per non-negative variable, two per free one,
  // then one slack/surplus per inequality.
  std::vector<Index> plus_col(costs_.size());
  std::vector<Index> minus_col(costs_.size(), -1);
  Index cols = 0;
  for (std::size_t v = 0; v < costs_.size(); ++v) {
    plus_col[v] = cols++;
    if (kinds_[v] == VarKind::Free) minus_col[v] = cols++;
  }
  const Index structural = cols;
  for (const Row& row : rows_) {
    if (row.sense != Sense::Equal) ++cols;
  }

  const Index m = static_cast<Index>(rows_.size());
  Matrix A = Matrix::Zero(m, cols);
  Vector b(m);
  Vector c = Vector::Zero(cols);
  for (std::size_t v = 0; v < costs_.size(); ++v) {
    c(plus_col[v]) = costs_[v];
    if (minus_col[v] >= 0) c(minus_col[v]) = -costs_[v];
  }
  Index slack = structural;
  for (Index i = 0; i < m; ++i) {
    const Row& row = rows_[static_cast<std::size_t>(i)];
    for (const auto& [var, coef] : row.terms) {
      A(i, plus_col[static_cast<std::size_t>(var)]) += coef;
      if (minus_col[static_cast<std::size_t>(var)] >= 0) {
        A(i, minus_col[static_cast<std::size_t>(var)]) -= coef;
      }
    }
    if (row.sense == Sense::LessEqual) A(i, slack++) = 1.0;
    if (row.sense == Sense::GreaterEqual) A(i, slack++) = -1.0;
    b(i) = row.rhs;
  }

  StandardFormResult sf = solve_standard_form(A, b, c, options);
  LpSolution out;
  out.status = sf.status;
  out.iterations = sf.iterations;
  out.switched_to_bland = sf.switched_to_bland;
  out.optimality_residual = sf.optimality_residual;
  out.duals = sf.duals;
  out.x = Vector::Zero(num_variables());
  for (std::size_t v = 0; v < costs_.size(); ++v) {
    double value = sf.x(plus_col[v]);
    if (minus_col[v] >= 0) value -= sf.x(minus_col[v]);
    out.x(static_cast<Index>(v)) = value;
  }
  out.objective = sf.objective + offset_;
  return out;
}

}  // namespace advest
