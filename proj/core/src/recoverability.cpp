#include "advest/recoverability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "advest/errors.hpp"
#include "advest/random.hpp"
#include "advest/simplex.hpp"

namespace advest {

std::string to_string(EtaMethod method) {
  switch (method) {
    case EtaMethod::Exact: return "exact-enumeration";
    case EtaMethod::Multistart: return "multistart";
    case EtaMethod::Auto: return "auto";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_j |r_j| - 2 * (sum of the m largest |r_j|), for r = A x.
double worst_subset_sum(const Vector& projections, std::size_t m) {
  std::vector<double> mags(static_cast<std::size_t>(projections.size()));
  for (Index j = 0; j < projections.size(); ++j) mags[static_cast<std::size_t>(j)] = std::abs(projections(j));
  double total = std::accumulate(mags.begin(), mags.end(), 0.0);
  if (m == 0) return total;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(m - 1), mags.end(),
                   std::greater<>());
  double top = 0.0;
  for (std::size_t k = 0; k < m; ++k) top += mags[k];
  return total - 2.0 * top;
}

std::vector<std::size_t> top_subset(const Vector& projections, std::size_t m) {
  std::vector<std::size_t> order(static_cast<std::size_t>(projections.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(projections(static_cast<Index>(a))) > std::abs(projections(static_cast<Index>(b)));
  });
  order.resize(m);
  std::sort(order.begin(), order.end());
  return order;
}

// Orthonormal basis (columns) of {x : rows * x = 0}. Returns the rank of
// `rows` through `rank`.
Matrix null_space(const Matrix& rows, Index dim, Index* rank) {
  if (rows.rows() == 0) {
    if (rank) *rank = 0;
    return Matrix::Identity(dim, dim);
  }
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++r;
  }
  if (rank) *rank = r;
  return svd.matrixV().rightCols(dim - r);
}

struct Best {
  double value = kInf;  // worst-subset sum, not yet divided by N
  Vector direction;

  void offer(double v, const Vector& x) {
    if (v < value) {
      value = v;
      direction = x;
    }
  }
};

RecoverabilityReport finish(const Matrix& A, std::size_t m, const Best& best, EtaMethod method,
                            bool certified, double margin_tol) {
  RecoverabilityReport report;
  report.N = static_cast<std::size_t>(A.rows());
  report.m = m;
  report.a_bar = A.rowwise().norm().maxCoeff();
  report.eta = best.value / static_cast<double>(report.N);
  report.method = method;
  report.certified = certified;
  report.holds_nsp = report.eta > margin_tol;
  report.K = report.holds_nsp
                 ? 2.0 * static_cast<double>(m) * report.a_bar /
                           (static_cast<double>(report.N) * report.eta) +
                       1.0
                 : kInf;
  Vector x = best.direction;
  report.witness = NspWitness{top_subset(A * x, m), x};
  return report;
}

RecoverabilityReport exact_eta(const Matrix& A, std::size_t m, double margin_tol) {
  const std::size_t N = static_cast<std::size_t>(A.rows());
  const Index d = A.cols();

  // Work in the row space: on the null space of A the margin is zero, and
  // a negative margin is only improved by discarding null components.
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  const Matrix Q = svd.matrixV().leftCols(rank);
  const Matrix R = A * Q;

  Best best;
  if (rank < d) best.offer(0.0, svd.matrixV().col(rank));

  auto offer = [&](const Vector& reduced) {
    best.offer(worst_subset_sum(R * reduced, m), Q * reduced);
  };

  // The minimizer of the piecewise-linear margin over the sphere lies in the
  // relative interior of a face of the arrangement {a_j^T x = 0}. Each face
  // spans some L = null(R_J); on it the margin is c^T x for a sign pattern,
  // minimized at -P_L c / ||P_L c|| or, for one-dimensional L, at the ray.
  const double row_scale = R.rowwise().norm().maxCoeff();
  for (std::size_t jsize = 0; jsize < static_cast<std::size_t>(rank); ++jsize) {
    for_each_subset(N, jsize, [&](const std::vector<std::size_t>& J) {
      Matrix RJ(static_cast<Index>(J.size()), rank);
      for (std::size_t i = 0; i < J.size(); ++i) RJ.row(static_cast<Index>(i)) = R.row(static_cast<Index>(J[i]));
      Index rj = 0;
      const Matrix L = null_space(RJ, rank, &rj);
      if (rj != static_cast<Index>(J.size())) return;  // dependent rows: same face as a smaller J
      if (L.cols() == 1) {
        offer(L.col(0));
        return;
      }
      const Matrix coords = R * L;  // row j: a_j projected onto L
      std::vector<Index> live;
      for (Index j = 0; j < coords.rows(); ++j) {
        if (coords.row(j).norm() > 1e-12 * row_scale) live.push_back(j);
      }
      if (live.empty()) return;
      const std::uint64_t patterns = std::uint64_t{1} << (live.size() - 1);
      std::vector<int> sigma(static_cast<std::size_t>(N), 0);
      for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        Eigen::RowVectorXd base = Eigen::RowVectorXd::Zero(L.cols());
        for (std::size_t q = 0; q < live.size(); ++q) {
          const int sg = (q == 0 || !((mask >> (q - 1)) & 1u)) ? 1 : -1;
          sigma[static_cast<std::size_t>(live[q])] = sg;
          base += sg * coords.row(live[q]);
        }
        for_each_subset(N, m, [&](const std::vector<std::size_t>& S) {
          Eigen::RowVectorXd c = base;
          for (std::size_t j : S) {
            c -= 2.0 * sigma[j] * coords.row(static_cast<Index>(j));
          }
          const double norm = c.norm();
          if (norm <= 1e-14 * std::max(1.0, row_scale)) return;
          offer(-(L * c.transpose()) / norm);
        });
        for (Index j : live) sigma[static_cast<std::size_t>(j)] = 0;
      }
    });
  }
  return finish(A, m, best, EtaMethod::Exact, true, margin_tol);
}

// Snap x onto the face it is (nearly) on and try that face's critical point.
void polish(const Matrix& A, std::size_t m, const Vector& x, Best& best) {
  const Vector proj = A * x;
  const Vector norms = A.rowwise().norm();
  for (double tol : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8}) {
    Matrix rows(0, A.cols());
    for (Index j = 0; j < A.rows(); ++j) {
      if (norms(j) == 0.0 || std::abs(proj(j)) > tol * norms(j)) continue;
      Matrix grown(rows.rows() + 1, A.cols());
      grown << rows, A.row(j);
      Index r = 0;
      null_space(grown, A.cols(), &r);
      if (r == grown.rows()) rows = grown;
    }
    const Matrix L = null_space(rows, A.cols(), nullptr);
    if (L.cols() == 0) continue;
    if (L.cols() == 1) {
      Vector u = L.col(0);
      best.offer(worst_subset_sum(A * u, m), u);
      continue;
    }
    const std::vector<std::size_t> S = top_subset(proj, m);
    Vector c = Vector::Zero(L.cols());
    for (Index j = 0; j < A.rows(); ++j) {
      const double w = std::find(S.begin(), S.end(), static_cast<std::size_t>(j)) != S.end() ? -1.0 : 1.0;
      const int sg = proj(j) >= 0 ? 1 : -1;
      c += w * sg * (L.transpose() * A.row(j).transpose());
    }
    if (c.norm() == 0.0) continue;
    Vector candidate = -(L * c) / c.norm();
    best.offer(worst_subset_sum(A * candidate, m), candidate);
  }
}

RecoverabilityReport multistart_eta(const Matrix& A, std::size_t m, const EtaOptions& options) {
  const Index d = A.cols();
  RandomSource rng(options.seed, 0);
  Best best;
  for (int start = 0; start < options.starts; ++start) {
    Vector x(d);
    for (Index k = 0; k < d; ++k) x(k) = rng.normal();
    if (x.norm() == 0.0) x(0) = 1.0;
    x.normalize();
    Best local;
    local.offer(worst_subset_sum(A * x, m), x);
    for (int it = 0; it < options.iterations; ++it) {
      const Vector proj = A * x;
      const std::vector<std::size_t> S = top_subset(proj, m);
      Vector g = Vector::Zero(d);
      for (Index j = 0; j < A.rows(); ++j) {
        const bool in_s = std::find(S.begin(), S.end(), static_cast<std::size_t>(j)) != S.end();
        g += (in_s ? -1.0 : 1.0) * sign(proj(j)) * A.row(j).transpose();
      }
      g -= g.dot(x) * x;  // tangent component on the sphere
      const double gn = g.norm();
      if (gn == 0.0) break;
      const double step = 0.5 / std::sqrt(static_cast<double>(it) + 1.0);
      x = (x - step * g / gn).normalized();
      local.offer(worst_subset_sum(A * x, m), x);
    }
    polish(A, m, local.direction, local);
    best.offer(local.value, local.direction);
  }
  return finish(A, m, best, EtaMethod::Multistart, false, options.margin_tol);
}

}  // namespace

double nsp_margin(const Matrix& A, const std::vector<std::size_t>& subset, const Vector& x) {
  require_size(x.size(), A.cols(), "nsp_margin direction");
  const double xn = x.norm();
  if (xn == 0.0) throw std::invalid_argument("nsp_margin: zero direction");
  const Vector proj = A * x;
  double total = proj.cwiseAbs().sum();
  for (std::size_t j : subset) {
    if (j >= static_cast<std::size_t>(A.rows())) throw std::invalid_argument("nsp_margin: subset index out of range");
    total -= 2.0 * std::abs(proj(static_cast<Index>(j)));
  }
  return total / (static_cast<double>(A.rows()) * xn);
}

double worst_subset_margin(const Matrix& A, std::size_t m, const Vector& x,
                           std::vector<std::size_t>* subset) {
  require_size(x.size(), A.cols(), "worst_subset_margin direction");
  const Vector proj = A * x;
  if (subset) *subset = top_subset(proj, m);
  return worst_subset_sum(proj, m) / (static_cast<double>(A.rows()) * x.norm());
}

RecoverabilityReport compute_eta(const Matrix& A, std::size_t m, const EtaOptions& options) {
  const std::size_t N = static_cast<std::size_t>(A.rows());
  if (N == 0 || A.cols() == 0) throw std::invalid_argument("compute_eta: empty matrix");
  if (m >= N) throw std::invalid_argument("compute_eta: need m < N");
  if (!A.allFinite()) throw std::invalid_argument("compute_eta: non-finite entries");

  if (A.cwiseAbs().maxCoeff() == 0.0) {
    Best zero;
    zero.offer(0.0, Vector::Unit(A.cols(), 0));
    return finish(A, m, zero, EtaMethod::Exact, true, options.margin_tol);
  }

  const bool small = N <= kExactMaxRows && A.cols() <= kExactMaxCols;
  switch (options.method) {
    case EtaMethod::Exact:
      if (!small) {
        throw std::invalid_argument("compute_eta: exact mode limited to N <= 12, d <= 4");
      }
      return exact_eta(A, m, options.margin_tol);
    case EtaMethod::Multistart:
      return multistart_eta(A, m, options);
    case EtaMethod::Auto:
      return small ? exact_eta(A, m, options.margin_tol) : multistart_eta(A, m, options);
  }
  throw std::logic_error("unknown eta method");
}

double robustness_K(const RecoverabilityReport& report, const Matrix& A, std::size_t m) {
  if (!(report.eta > 0.0)) {
    throw RecoverabilityError("robustness_K: eta = " + std::to_string(report.eta) +
                              " <= 0, null-space condition fails");
  }
  const double a_bar = A.rowwise().norm().maxCoeff();
  return 2.0 * static_cast<double>(m) * a_bar / (static_cast<double>(A.rows()) * report.eta) + 1.0;
}

void PartialStructure::validate(Index dim) const {
  require_size(U.rows(), dim, "partial structure U rows");
  require_size(V.rows(), dim, "partial structure V rows");
  if (U.cols() < 1) throw std::invalid_argument("partial structure: U needs at least one column");
  if (U.cols() + V.cols() != dim) {
    throw std::invalid_argument("partial structure: r + s must equal d");
  }
  Matrix UV(dim, dim);
  UV << U, V;
  Eigen::FullPivLU<Matrix> lu(UV);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("partial structure: span(U) and span(V) are not a direct sum");
  }
}

namespace {

// inf over beta of sum_{i not in K} |g_i| - sum_{i in K} s_i g_i, with
// g = AU alpha + AV beta. Returns -inf when unbounded below.
double inner_infimum(const Vector& gu, const Matrix& AV, const std::vector<std::size_t>& K,
                     const std::vector<int>& signs, Vector* beta_out) {
  const Index N = gu.size();
  const Index s = AV.cols();
  std::vector<bool> in_k(static_cast<std::size_t>(N), false);
  for (std::size_t i : K) in_k[i] = true;

  LinearProgram lp;
  std::vector<int> beta(static_cast<std::size_t>(s));
  std::vector<double> beta_cost(static_cast<std::size_t>(s), 0.0);
  double offset = 0.0;
  for (std::size_t q = 0; q < K.size(); ++q) {
    const Index i = static_cast<Index>(K[q]);
    offset -= signs[q] * gu(i);
    for (Index c = 0; c < s; ++c) beta_cost[static_cast<std::size_t>(c)] -= signs[q] * AV(i, c);
  }
  for (Index c = 0; c < s; ++c) beta[static_cast<std::size_t>(c)] = lp.add_variable(beta_cost[static_cast<std::size_t>(c)], VarKind::Free);
  for (Index i = 0; i < N; ++i) {
    if (in_k[static_cast<std::size_t>(i)]) continue;
    const int t = lp.add_variable(1.0);
    std::vector<std::pair<int, double>> up{{t, -1.0}};
    std::vector<std::pair<int, double>> down{{t, -1.0}};
    for (Index c = 0; c < s; ++c) {
      up.emplace_back(beta[static_cast<std::size_t>(c)], AV(i, c));
      down.emplace_back(beta[static_cast<std::size_t>(c)], -AV(i, c));
    }
    lp.add_constraint(std::move(up), Sense::LessEqual, -gu(i));
    lp.add_constraint(std::move(down), Sense::LessEqual, gu(i));
  }
  lp.set_objective_offset(offset);
  LpSolution sol = lp.solve();
  if (sol.status == LpStatus::Unbounded) {
    if (beta_out) beta_out->resize(0);
    return -std::numeric_limits<double>::infinity();
  }
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("check_partial_recovery: inner LP " + to_string(sol.status));
  }
  if (beta_out) {
    beta_out->resize(s);
    for (Index c = 0; c < s; ++c) (*beta_out)(c) = sol.x(beta[static_cast<std::size_t>(c)]);
  }
  return sol.objective;
}

}  // namespace

PartialRecoveryVerdict check_partial_recovery(const Matrix& A, const PartialStructure& structure,
                                              const PartialCheckOptions& options) {
  structure.validate(A.cols());
  const std::size_t N = static_cast<std::size_t>(A.rows());
  if (structure.q > N) throw std::invalid_argument("check_partial_recovery: q exceeds N");

  const Matrix AU = A * structure.U;
  const Matrix AV = A * structure.V;
  const Index r = structure.U.cols();

  std::vector<Vector> alphas;
  PartialRecoveryVerdict verdict;
  verdict.certified = (r == 1);
  for (Index k = 0; k < r; ++k) {
    alphas.push_back(Vector::Unit(r, k));
    alphas.push_back(-Vector::Unit(r, k));
  }
  if (r >= 2) {
    RandomSource rng(options.seed, 1);
    for (int i = 0; i < options.net_size; ++i) {
      Vector a(r);
      for (Index k = 0; k < r; ++k) a(k) = rng.normal();
      if (a.norm() > 0.0) alphas.push_back(a.normalized());
    }
  }

  verdict.margin = std::numeric_limits<double>::infinity();
  for (std::size_t size = 0; size <= structure.q; ++size) {
    for_each_subset(N, size, [&](const std::vector<std::size_t>& K) {
      for (const Vector& alpha : alphas) {
        const Vector gu = AU * alpha;
        const std::uint64_t patterns = std::uint64_t{1} << K.size();
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
          std::vector<int> signs(K.size());
          for (std::size_t q = 0; q < K.size(); ++q) signs[q] = ((mask >> q) & 1u) ? -1 : 1;
          Vector beta;
          const double value = inner_infimum(gu, AV, K, signs, &beta);
          if (value < verdict.margin) {
            verdict.margin = value;
            verdict.witness = PartialWitness{K, alpha, beta};
          }
        }
      }
    });
  }
  verdict.holds = verdict.margin > options.margin_tol;
  return verdict;
}

L1Fit l1_fit(const Matrix& A, const Matrix& U, const Matrix& V, const Vector& y) {
  require_size(U.rows(), A.cols(), "l1_fit U rows");
  require_size(V.rows(), A.cols(), "l1_fit V rows");
  require_size(y.size(), A.rows(), "l1_fit y");
  const Index r = U.cols();
  const Index s = V.cols();
  Matrix M(A.rows(), r + s);
  M << A * U, A * V;

  LinearProgram lp;
  std::vector<int> z(static_cast<std::size_t>(r + s));
  for (auto& v : z) v = lp.add_variable(0.0, VarKind::Free);
  for (Index i = 0; i < A.rows(); ++i) {
    const int t = lp.add_variable(1.0);
    std::vector<std::pair<int, double>> up{{t, -1.0}};
    std::vector<std::pair<int, double>> down{{t, -1.0}};
    for (Index c = 0; c < r + s; ++c) {
      up.emplace_back(z[static_cast<std::size_t>(c)], M(i, c));
      down.emplace_back(z[static_cast<std::size_t>(c)], -M(i, c));
    }
    lp.add_constraint(std::move(up), Sense::LessEqual, y(i));
    lp.add_constraint(std::move(down), Sense::LessEqual, -y(i));
  }
  LpSolution sol = lp.solve();
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("l1_fit: LP " + to_string(sol.status));
  }
  Vector zhat(r + s);
  for (Index c = 0; c < r + s; ++c) zhat(c) = sol.x(z[static_cast<std::size_t>(c)]);
  L1Fit fit;
  fit.alpha = zhat.head(r);
  fit.beta = zhat.tail(s);
  fit.residual = (M * zhat - y).cwiseAbs().sum();
  fit.optimality_residual = sol.optimality_residual;
  fit.certified = sol.optimality_residual <= 1e-9;
  return fit;
}

Matrix compose_tomography(const Matrix& P, const Matrix& B) {
  require_size(B.rows(), P.cols(), "compose_tomography inner dimension");
  if (!(P.array() == 0.0 || P.array() == 1.0).all()) {
    throw std::invalid_argument("compose_tomography: P must be a 0/1 path-link matrix");
  }
  return P * B;
}

}  // namespace advest
