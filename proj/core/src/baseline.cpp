#include "advest/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace advest {

std::string to_string(XSchedule schedule) { return schedule == XSchedule::Sqrt ? "sqrt" : "pow09"; }

XSchedule parse_x_schedule(const std::string& text) {
  if (text == "sqrt") return XSchedule::Sqrt;
  if (text == "pow09") return XSchedule::Pow09;
  throw std::invalid_argument("unknown x schedule '" + text + "' (expected sqrt or pow09)");
}

double baseline_alpha(XSchedule schedule, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("baseline_alpha: t < 0");
  const double base = static_cast<double>(t) + 1.0;
  return schedule == XSchedule::Sqrt ? 1.0 / std::sqrt(base) : std::pow(base, -0.9);
}

void AggregatorSpec::validate(std::size_t num_workers) const {
  if (s < 1) throw std::invalid_argument("aggregator: s must be >= 1");
  // Number of vectors the rule actually sees.
  std::size_t inputs = num_workers;
  if (wrapper != Wrapper::None) inputs = (num_workers + s - 1) / s;
  if (inputs == 1) return;  // a single bucket or buffer is used as is
  if (rule == Rule::Krum && inputs < 2 * budget + 3) {
    throw std::invalid_argument("krum needs at least 2f + 3 inputs; " + label() + " gives " +
                                std::to_string(inputs));
  }
  if ((rule == Rule::Ctm && inputs <= 2 * budget) || (rule == Rule::RageApprox && inputs <= budget)) {
    throw std::invalid_argument(label() + ": too few inputs for budget " + std::to_string(budget));
  }
}

std::string AggregatorSpec::label() const {
  std::ostringstream out;
  out << to_string(rule);
  if (wrapper != Wrapper::None) out << "+" << to_string(wrapper) << "(s=" << s << ")";
  return out.str();
}

double momentum_gamma(const AggregatorSpec& spec, Mode mode, std::int64_t t) {
  if (mode == Mode::Sync && spec.wrapper == Wrapper::Bucketing) {
    return std::pow(static_cast<double>(t) + 1.0, -0.9);
  }
  return 0.0;
}

namespace {

std::vector<Vector> honest_snapshot(const SensingProblem& problem, const std::vector<Vector>& momenta) {
  std::vector<Vector> out;
  for (std::size_t j : problem.honest_workers()) out.push_back(momenta[j]);
  return out;
}

class BaselineStepper {
 public:
  BaselineStepper(const SensingProblem& problem, const AggregatorSpec& spec, const BoxProjection& box,
                  const AttackSpec& attack, const BaselineRunSpec& run, TrialStreams& streams,
                  BaselineState& state)
      : problem_(problem), spec_(spec), box_(box), attack_(attack), run_(run), streams_(streams),
        state_(state) {
    if (spec.wrapper == Wrapper::Buffered) {
      buffers_.emplace(problem.num_workers(), spec.s, spec.rule, spec.budget);
    }
  }

  std::int64_t applied() const { return applied_; }

  void step() {
    const std::int64_t t = state_.t;
    const double beta = 1.0 / (static_cast<double>(t) + 1.0);
    const double gamma = momentum_gamma(spec_, run_.mode, t);
    const double alpha = baseline_alpha(run_.schedule_x, t);
    std::optional<Vector> direction;
    if (run_.mode == Mode::Sync) {
      direction = sync_round(beta, gamma);
    } else {
      direction = async_round(beta, gamma);
    }
    if (direction) {
      state_.x = project_box(state_.x - alpha * *direction, box_);
      ++applied_;
    }
    ++state_.t;
  }

 private:
  Vector a(std::size_t j) const { return problem_.A.row(static_cast<Index>(j)).transpose(); }

  double honest_report(std::size_t j) {
    if (problem_.is_adversarial(j)) return honest_style_sample(problem_, j, streams_.workers[j]);
    return sample_measurement(problem_, j, streams_.workers[j]);
  }

  std::optional<Vector> sync_round(double beta, double gamma) {
    const std::size_t N = problem_.num_workers();
    std::vector<std::size_t> attackers;
    for (std::size_t j = 0; j < N; ++j) {
      if (attack_.attacks(problem_, j)) {
        attackers.push_back(j);
        continue;
      }
      const double Y = honest_report(j);
      double& yj = state_.y(static_cast<Index>(j));
      yj += beta * (Y - yj);
      state_.momenta[j] = momentum_update(state_.momenta[j], l2_gradient(a(j), state_.x, yj), gamma);
    }
    // Attackers move last and see this round's honest momenta.
    const std::vector<Vector> honest = honest_snapshot(problem_, state_.momenta);
    for (std::size_t j : attackers) corrupt(j, beta, gamma, 1.0, honest);

    switch (spec_.wrapper) {
      case Wrapper::None: return aggregate(spec_.rule, state_.momenta, spec_.budget);
      case Wrapper::Bucketing:
        return bucketing_aggregate(spec_.rule, state_.momenta, spec_.s, spec_.budget, streams_.aux);
      case Wrapper::Buffered: {
        std::optional<Vector> out;
        for (std::size_t j = 0; j < N; ++j) {
          auto emitted = buffers_->report(j, state_.momenta[j]);
          if (emitted) out = emitted;
        }
        return out;
      }
    }
    return std::nullopt;
  }

  std::optional<Vector> async_round(double beta, double gamma) {
    const std::size_t N = problem_.num_workers();
    const std::size_t i = streams_.server.index(N);
    if (attack_.attacks(problem_, i)) {
      const std::vector<Vector> honest = honest_snapshot(problem_, state_.momenta);
      corrupt(i, beta, gamma, static_cast<double>(N), honest);
    } else {
      const double Y = honest_report(i);
      state_.y *= (1.0 - beta);
      state_.y(static_cast<Index>(i)) += beta * static_cast<double>(N) * Y;
      state_.momenta[i] =
          momentum_update(state_.momenta[i], l2_gradient(a(i), state_.x, state_.y(static_cast<Index>(i))), gamma);
    }
    switch (spec_.wrapper) {
      case Wrapper::None: return aggregate(spec_.rule, state_.momenta, spec_.budget);
      case Wrapper::Bucketing:
        return bucketing_aggregate(spec_.rule, state_.momenta, spec_.s, spec_.budget, streams_.aux);
      case Wrapper::Buffered: return buffers_->report(i, state_.momenta[i]);
    }
    return std::nullopt;
  }

  // Applies worker j's attack to y and its momentum. gain is 1 (sync) or N
  // (async, where the other coordinates also decay).
  void corrupt(std::size_t j, double beta, double gamma, double gain, const std::vector<Vector>& honest) {
    MomentumContext ctx;
    ctx.x = state_.x;
    ctx.y_prev = state_.y(static_cast<Index>(j));
    ctx.m_prev = state_.momenta[j];
    ctx.beta = beta;
    ctx.gamma = gamma;
    ctx.y_gain = gain;
    ctx.honest_momenta = honest;
    const MomentumAttack att = attack_momentum(attack_, problem_, j, ctx, streams_.workers[j]);
    if (run_.mode == Mode::Async) {
      state_.y *= (1.0 - beta);
      state_.y(static_cast<Index>(j)) += beta * gain * att.Y;
    } else {
      double& yj = state_.y(static_cast<Index>(j));
      yj += beta * (att.Y - yj);
    }
    if (att.momentum) {
      state_.momenta[j] = *att.momentum;
    } else {
      state_.momenta[j] = momentum_update(state_.momenta[j],
                                          l2_gradient(a(j), state_.x, state_.y(static_cast<Index>(j))), gamma);
    }
  }

  const SensingProblem& problem_;
  const AggregatorSpec& spec_;
  const BoxProjection& box_;
  const AttackSpec& attack_;
  const BaselineRunSpec& run_;
  TrialStreams& streams_;
  BaselineState& state_;
  std::optional<BufferedAggregator> buffers_;
  std::int64_t applied_ = 0;
};

}  // namespace

BaselineTrajectory run_baseline(const SensingProblem& problem, const AggregatorSpec& spec,
                                const BoxProjection& box, const AttackSpec& attack,
                                const BaselineRunSpec& run, TrialStreams& streams) {
  if (run.n < 1) throw std::invalid_argument("run_baseline: n must be >= 1");
  if (!(run.r > 0.0 && run.r < 1.0)) throw std::invalid_argument("run_baseline: r must lie in (0, 1)");
  problem.validate();
  box.validate();
  attack.validate(problem);
  spec.validate(problem.num_workers());
  require_size(box.dim(), problem.dim(), "box dimension");
  if (streams.workers.size() != problem.num_workers()) {
    throw std::invalid_argument("run_baseline: stream count does not match N");
  }

  std::vector<std::int64_t> marks = run.checkpoints;
  if (marks.empty()) marks.push_back(run.n);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (marks.front() < 1 || marks.back() > run.n) {
    throw std::invalid_argument("run_baseline: checkpoints must lie in [1, n]");
  }
  std::vector<TailAccumulator> tails(marks.size());
  for (std::size_t c = 0; c < marks.size(); ++c) tails[c].from = tail_start(marks[c], run.r);

  BaselineState state;
  state.x = run.x0 ? *run.x0 : box.center();
  require_size(state.x.size(), problem.dim(), "x0");
  state.y = Vector::Zero(static_cast<Index>(problem.num_workers()));
  state.momenta.assign(problem.num_workers(), Vector::Zero(problem.dim()));
  state.tail.from = tail_start(run.n, run.r);

  auto accumulate = [&](std::int64_t t, const Vector& x) {
    const double alpha = baseline_alpha(run.schedule_x, t);
    state.tail.add(t, alpha, x);
    for (std::size_t c = 0; c < marks.size(); ++c) {
      if (t <= marks[c]) tails[c].add(t, alpha, x);
    }
  };
  accumulate(0, state.x);

  BaselineStepper stepper(problem, spec, box, attack, run, streams, state);
  BaselineTrajectory out;
  std::size_t next = 0;
  while (state.t < run.n) {
    stepper.step();
    accumulate(state.t, state.x);
    if (run.observer) run.observer(state);
    while (next < marks.size() && marks[next] == state.t) {
      out.checkpoints.push_back(make_checkpoint(problem, state.t, state.x, tails[next].average(), state.y));
      ++next;
    }
  }
  out.aggregation_steps = stepper.applied();
  out.final_state = std::move(state);
  return out;
}

}  // namespace advest
