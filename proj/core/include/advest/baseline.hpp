#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "advest/adversary.hpp"
#include "advest/aggregators.hpp"
#include "advest/estimator.hpp"
#include "advest/problem.hpp"
#include "advest/random.hpp"

namespace advest {

enum class XSchedule {
  Sqrt,   // alpha_t = 1 / sqrt(t + 1)
  Pow09,  // alpha_t = 1 / (t + 1)^0.9
};

std::string to_string(XSchedule schedule);
XSchedule parse_x_schedule(const std::string& text);
double baseline_alpha(XSchedule schedule, std::int64_t t);

struct AggregatorSpec {
  Rule rule = Rule::Cm;
  Wrapper wrapper = Wrapper::None;
  std::size_t s = 1;
  std::size_t budget = 0;  // f, normally the adversary budget m

  void validate(std::size_t num_workers) const;
  std::string label() const;  // "cm+bucketing(s=3)"
};

// gamma_t = 1 / (t + 1)^0.9 for synchronous bucketing, zero otherwise.
double momentum_gamma(const AggregatorSpec& spec, Mode mode, std::int64_t t);

struct BaselineState {
  Vector x;
  Vector y;
  std::vector<Vector> momenta;
  std::int64_t t = 0;
  TailAccumulator tail;
};

struct BaselineRunSpec {
  Mode mode = Mode::Sync;
  std::int64_t n = 1000;
  double r = 0.5;
  XSchedule schedule_x = XSchedule::Sqrt;
  std::vector<std::int64_t> checkpoints;
  const Vector* x0 = nullptr;
  std::function<void(const BaselineState&)> observer;
};

struct BaselineTrajectory {
  std::vector<CheckpointRecord> checkpoints;
  BaselineState final_state;
  std::int64_t aggregation_steps = 0;  // x-updates actually applied
};

// Momentum-corrected l2 gradient descent with a robust aggregator; the
// y-updates match the estimator's rule for the mode, beta_t = 1/(t + 1).
BaselineTrajectory run_baseline(const SensingProblem& problem, const AggregatorSpec& spec,
                                const BoxProjection& box, const AttackSpec& attack,
                                const BaselineRunSpec& run, TrialStreams& streams);

}  // namespace advest
