#include "advest/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advest {

double objective_f(const Matrix& A, const Vector& EY, const Vector& x) {
  require_size(x.size(), A.cols(), "objective_f x");
  require_size(EY.size(), A.rows(), "objective_f EY");
  return (A * x - EY).cwiseAbs().sum() / static_cast<double>(A.rows());
}

void TailAccumulator::add(std::int64_t t, double alpha, const Vector& x) {
  if (t < from) return;
  if (weighted_sum.size() == 0) weighted_sum = Vector::Zero(x.size());
  weighted_sum += alpha * x;
  weight += alpha;
}

Vector TailAccumulator::average() const {
  if (empty()) throw std::logic_error("tail average requested before the window opened");
  return weighted_sum / weight;
}

EstimatorState EstimatorState::initial(const SensingProblem& problem, const BoxProjection& box,
                                       std::int64_t tail_from, const Vector* x0) {
  require_size(box.dim(), problem.dim(), "box dimension");
  EstimatorState s;
  s.x = x0 ? *x0 : box.center();
  require_size(s.x.size(), problem.dim(), "x0");
  s.y = Vector::Zero(static_cast<Index>(problem.num_workers()));
  s.t = 0;
  s.tail.from = tail_from;
  return s;
}

Vector async_x_update(const Matrix& A, std::size_t i, const Vector& x, const Vector& y, double alpha,
                      const BoxProjection& box) {
  const auto a = A.row(static_cast<Index>(i));
  const int s = sign(y(static_cast<Index>(i)) - a.dot(x));
  if (s == 0) return project_box(x, box);
  return project_box(x + (alpha * s) * a.transpose(), box);
}

void async_y_update(Vector& y, std::size_t i, double Y, double beta) {
  const double n = static_cast<double>(y.size());
  y *= (1.0 - beta);
  y(static_cast<Index>(i)) += beta * n * Y;
}

Vector sync_x_update(const Matrix& A, const Vector& x, const Vector& y, double alpha,
                     const BoxProjection& box) {
  Vector step = Vector::Zero(A.cols());
  const Vector resid = y - A * x;
  for (Index j = 0; j < A.rows(); ++j) {
    const int s = sign(resid(j));
    if (s != 0) step += s * A.row(j).transpose();
  }
  return project_box(x + alpha * step, box);
}

void sync_y_update(Vector& y, const Vector& Y, double beta) {
  require_size(Y.size(), y.size(), "sync_y_update");
  y += beta * (Y - y);
}

namespace {

double worker_report(const SensingProblem& problem, std::size_t j, const Vector& x, const Vector& y,
                     const AttackSpec& attack, TrialStreams& streams) {
  if (attack.attacks(problem, j)) return attack_measurement(attack, problem, j, x, y, streams.workers[j]);
  if (problem.is_adversarial(j)) return honest_style_sample(problem, j, streams.workers[j]);
  return sample_measurement(problem, j, streams.workers[j]);
}

}  // namespace

void async_step(EstimatorState& state, const SensingProblem& problem, const StepsizeSchedule& sched,
                const BoxProjection& box, const AttackSpec& attack, TrialStreams& streams) {
  const Stepsizes st = sched.at(state.t);
  const std::size_t i = streams.server.index(problem.num_workers());
  // The attacker sees x_n and y_n, before this step's update.
  const double Y = worker_report(problem, i, state.x, state.y, attack, streams);
  state.x = async_x_update(problem.A, i, state.x, state.y, st.alpha, box);
  async_y_update(state.y, i, Y, st.beta);
  ++state.t;
}

void sync_step(EstimatorState& state, const SensingProblem& problem, const StepsizeSchedule& sched,
               const BoxProjection& box, const AttackSpec& attack, TrialStreams& streams) {
  const Stepsizes st = sched.at(state.t);
  const std::size_t N = problem.num_workers();
  Vector Y(static_cast<Index>(N));
  for (std::size_t j = 0; j < N; ++j) {
    Y(static_cast<Index>(j)) = worker_report(problem, j, state.x, state.y, attack, streams);
  }
  state.x = sync_x_update(problem.A, state.x, state.y, st.alpha, box);
  sync_y_update(state.y, Y, st.beta);
  ++state.t;
}

CheckpointRecord make_checkpoint(const SensingProblem& problem, std::int64_t t, const Vector& x,
                                 const Vector& x_tail, const Vector& y) {
  const Vector EY = problem.mean_measurements();
  CheckpointRecord rec;
  rec.t = t;
  rec.x = x;
  rec.y = y;
  rec.x_tail = x_tail;
  rec.f_x = objective_f(problem.A, EY, x);
  rec.f_xtail = objective_f(problem.A, EY, x_tail);
  rec.err_x_l2 = (x - problem.mu_true).norm();
  double worst = 0.0;
  for (std::size_t j : problem.honest_workers()) {
    worst = std::max(worst, std::abs(y(static_cast<Index>(j)) - EY(static_cast<Index>(j))));
  }
  rec.max_honest_y_err = worst;
  return rec;
}

Trajectory run(const SensingProblem& problem, const StepsizeSchedule& sched, const BoxProjection& box,
               const AttackSpec& attack, const RunSpec& spec, TrialStreams& streams) {
  if (spec.n < 1) throw std::invalid_argument("run: n must be >= 1");
  if (!(spec.r > 0.0 && spec.r < 1.0)) throw std::invalid_argument("run: r must lie in (0, 1)");
  problem.validate();
  box.validate();
  attack.validate(problem);
  if (streams.workers.size() != problem.num_workers()) {
    throw std::invalid_argument("run: stream count does not match N");
  }

  std::vector<std::int64_t> marks = spec.checkpoints;
  if (marks.empty()) marks.push_back(spec.n);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (marks.front() < 1 || marks.back() > spec.n) {
    throw std::invalid_argument("run: checkpoints must lie in [1, n]");
  }

  std::vector<TailAccumulator> tails(marks.size());
  for (std::size_t c = 0; c < marks.size(); ++c) tails[c].from = tail_start(marks[c], spec.r);

  EstimatorState state = EstimatorState::initial(problem, box, tail_start(spec.n, spec.r), spec.x0);
  auto accumulate = [&](std::int64_t t, const Vector& x) {
    const double alpha = sched.at(t).alpha;
    state.tail.add(t, alpha, x);
    for (std::size_t c = 0; c < marks.size(); ++c) {
      if (t <= marks[c]) tails[c].add(t, alpha, x);
    }
  };
  accumulate(0, state.x);

  Trajectory out;
  std::size_t next = 0;
  while (state.t < spec.n) {
    if (spec.mode == Mode::Async) {
      async_step(state, problem, sched, box, attack, streams);
    } else {
      sync_step(state, problem, sched, box, attack, streams);
    }
    accumulate(state.t, state.x);
    if (spec.observer) spec.observer(state);
    while (next < marks.size() && marks[next] == state.t) {
      CheckpointRecord rec = make_checkpoint(problem, state.t, state.x, tails[next].average(), state.y);
      out.checkpoints.push_back(std::move(rec));
      ++next;
    }
  }
  out.final_state = std::move(state);
  return out;
}

Decomposition decompose(const SensingProblem& problem, const Vector& x, const Vector& y) {
  require_size(x.size(), problem.dim(), "decompose x");
  require_size(y.size(), static_cast<Index>(problem.num_workers()), "decompose y");
  const Matrix& A = problem.A;
  const Vector EY = problem.mean_measurements();
  const Vector Ax = A * x;
  const double N = static_cast<double>(A.rows());
  Decomposition dec{Vector::Zero(A.cols()), Vector::Zero(A.cols()), Vector::Zero(A.cols())};
  for (Index j = 0; j < A.rows(); ++j) {
    const auto a = A.row(j).transpose();
    const int s_true = sign(EY(j) - Ax(j));
    const int s_est = sign(y(j) - Ax(j));
    dec.g += s_true * a;
    if (problem.is_adversarial(static_cast<std::size_t>(j))) {
      dec.g_prime += s_est * a;
    } else {
      dec.g_prime += s_true * a;
      dec.eps += (s_est - s_true) * a;
    }
  }
  dec.g /= N;
  dec.g_prime /= N;
  dec.eps /= N;
  return dec;
}

Vector martingale_term(const SensingProblem& problem, const Decomposition& dec, const Vector& x,
                       const Vector& y, std::size_t i) {
  const auto a = problem.A.row(static_cast<Index>(i)).transpose();
  return sign(y(static_cast<Index>(i)) - a.dot(x)) * a - dec.g_prime - dec.eps;
}

}  // namespace advest
