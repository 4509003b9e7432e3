#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "advest/adversary.hpp"
#include "advest/linalg.hpp"
#include "advest/problem.hpp"
#include "advest/random.hpp"
#include "advest/stepsize.hpp"

namespace advest {

// f(x) = (1/N) ||A x - EY||_1
double objective_f(const Matrix& A, const Vector& EY, const Vector& x);

// Running alpha-weighted sum of x_k..x_t for one tail window.
struct TailAccumulator {
  std::int64_t from = 0;  // k
  Vector weighted_sum;
  double weight = 0.0;

  void add(std::int64_t t, double alpha, const Vector& x);
  bool empty() const { return weight == 0.0; }
  Vector average() const;
};

struct EstimatorState {
  Vector x;
  Vector y;
  std::int64_t t = 0;
  TailAccumulator tail;

  // x0 (box center unless given), y0 = 0, tail window starting at tail_from.
  static EstimatorState initial(const SensingProblem& problem, const BoxProjection& box,
                                std::int64_t tail_from, const Vector* x0 = nullptr);
};

// Pieces of one step, exposed for tests.
Vector async_x_update(const Matrix& A, std::size_t i, const Vector& x, const Vector& y, double alpha,
                      const BoxProjection& box);
// y(j) <- y(j) + beta (N Y 1{j = i} - y(j))
void async_y_update(Vector& y, std::size_t i, double Y, double beta);
Vector sync_x_update(const Matrix& A, const Vector& x, const Vector& y, double alpha,
                     const BoxProjection& box);
// y(j) <- y(j) + beta (Y(j) - y(j))
void sync_y_update(Vector& y, const Vector& Y, double beta);

// One server iteration t -> t+1. Honest workers draw from their own streams;
// the server draws the index from streams.server.
void async_step(EstimatorState& state, const SensingProblem& problem, const StepsizeSchedule& sched,
                const BoxProjection& box, const AttackSpec& attack, TrialStreams& streams);
void sync_step(EstimatorState& state, const SensingProblem& problem, const StepsizeSchedule& sched,
               const BoxProjection& box, const AttackSpec& attack, TrialStreams& streams);

struct CheckpointRecord {
  std::int64_t t = 0;
  double f_x = 0.0;
  double f_xtail = 0.0;
  double err_x_l2 = 0.0;
  double max_honest_y_err = 0.0;
  Vector x;
  Vector x_tail;
  Vector y;
};

// Metrics at time t against the true EY; max_honest_y_err over honest workers.
CheckpointRecord make_checkpoint(const SensingProblem& problem, std::int64_t t, const Vector& x,
                                 const Vector& x_tail, const Vector& y);

struct RunSpec {
  Mode mode = Mode::Async;
  std::int64_t n = 1000;
  double r = 0.5;
  // Times at which to record; each gets its own tail window from ceil(r t).
  // Empty means just n.
  std::vector<std::int64_t> checkpoints;
  const Vector* x0 = nullptr;
  // Called after every step with the updated state.
  std::function<void(const EstimatorState&)> observer;
};

struct Trajectory {
  std::vector<CheckpointRecord> checkpoints;
  EstimatorState final_state;
};

// Applies n steps, producing x_0..x_n; the tail average at checkpoint t is
// over x_{ceil(r t)}..x_t with weights alpha_s.
Trajectory run(const SensingProblem& problem, const StepsizeSchedule& sched, const BoxProjection& box,
               const AttackSpec& attack, const RunSpec& spec, TrialStreams& streams);

struct Decomposition {
  Vector g;        // (1/N) sum_j sign(EY(j) - a_j^T x) a_j
  Vector g_prime;  // same with y(j) in place of EY(j) for adversarial j
  Vector eps;      // (1/N) sum_{honest j} a_j [sign(y(j) - a_j^T x) - sign(EY(j) - a_j^T x)]
};

Decomposition decompose(const SensingProblem& problem, const Vector& x, const Vector& y);

// M = a_i sign(y(i) - a_i^T x) - g' - eps for a sampled index i.
Vector martingale_term(const SensingProblem& problem, const Decomposition& dec, const Vector& x,
                       const Vector& y, std::size_t i);

}  // namespace advest
