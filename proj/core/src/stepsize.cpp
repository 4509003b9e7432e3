#include "advest/stepsize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace advest {
namespace {

void check_fraction(double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("tail fraction r must lie in (0, 1)");
}

void check_unit_interval(const Stepsizes& s, std::int64_t t) {
  if (!(s.alpha > 0.0 && s.alpha <= 1.0 && s.beta > 0.0 && s.beta <= 1.0)) {
    throw std::domain_error("stepsizes at t=" + std::to_string(t) +
                            " leave (0, 1]: alpha=" + std::to_string(s.alpha) +
                            " beta=" + std::to_string(s.beta));
  }
}

}  // namespace

StepsizeSchedule StepsizeSchedule::const_const(std::int64_t horizon, double r) {
  if (horizon < 3) throw std::invalid_argument("ConstConst schedule needs n >= 3");
  check_fraction(r);
  const double n = static_cast<double>(horizon);
  const double numerator = std::log(n) - 2.0 * std::log(std::log(n));
  if (!(numerator > 0.0)) {
    throw std::domain_error("ConstConst: ln n - 2 ln ln n must be positive");
  }
  StepsizeSchedule s;
  s.regime_ = Regime::ConstConst;
  s.horizon_ = horizon;
  s.r_ = r;
  s.const_beta_ = numerator / (2.0 * r * n);
  if (s.const_beta_ > 1.0) {
    throw std::domain_error("ConstConst: beta = " + std::to_string(s.const_beta_) +
                            " exceeds 1 for this (n, r)");
  }
  return s;
}

StepsizeSchedule StepsizeSchedule::const_decay(std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("ConstDecay schedule needs n >= 1");
  StepsizeSchedule s;
  s.regime_ = Regime::ConstDecay;
  s.horizon_ = horizon;
  return s;
}

StepsizeSchedule StepsizeSchedule::decay_decay() {
  StepsizeSchedule s;
  s.regime_ = Regime::DecayDecay;
  return s;
}

StepsizeSchedule StepsizeSchedule::custom(std::function<Stepsizes(std::int64_t)> fn,
                                          std::optional<std::int64_t> horizon) {
  if (!fn) throw std::invalid_argument("custom schedule needs a function");
  StepsizeSchedule s;
  s.regime_ = Regime::Custom;
  s.horizon_ = horizon;
  s.custom_ = std::move(fn);
  return s;
}

StepsizeSchedule StepsizeSchedule::for_statement(int statement, std::int64_t horizon,
                                                 double r) {
  switch (statement) {
    case 1: return const_const(horizon, r);
    case 2: return const_decay(horizon);
    case 3: return decay_decay();
    default: throw std::invalid_argument("statement must be 1, 2 or 3");
  }
}

Stepsizes StepsizeSchedule::at(std::int64_t t) const {
  if (t < 0) throw std::invalid_argument("stepsizes_at: negative iteration");
  if (horizon_ && t > *horizon_) {
    throw std::invalid_argument("stepsizes_at: t=" + std::to_string(t) +
                                " beyond horizon " + std::to_string(*horizon_));
  }
  const double tp1 = static_cast<double>(t) + 1.0;
  switch (regime_) {
    case Regime::ConstConst:
      return {1.0 / std::sqrt(static_cast<double>(*horizon_)), const_beta_};
    case Regime::ConstDecay:
      return {1.0 / std::sqrt(static_cast<double>(*horizon_)), 1.0 / tp1};
    case Regime::DecayDecay:
      return {1.0 / std::sqrt(tp1), 1.0 / tp1};
    case Regime::Custom: {
      Stepsizes s = custom_(t);
      check_unit_interval(s, t);
      return s;
    }
  }
  throw std::logic_error("unknown regime");
}

std::string StepsizeSchedule::name() const {
  switch (regime_) {
    case Regime::ConstConst: return "s1";
    case Regime::ConstDecay: return "s2";
    case Regime::DecayDecay: return "s3";
    case Regime::Custom: return "custom";
  }
  return "?";
}

Stepsizes stepsizes_at(const StepsizeSchedule& schedule, std::int64_t t) {
  return schedule.at(t);
}

std::vector<double> tail_weights(std::span<const double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("tail_weights: empty window");
  double total = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("tail_weights: alpha must be positive");
    total += a;
  }
  std::vector<double> w;
  w.reserve(alphas.size());
  for (double a : alphas) w.push_back(a / total);
  return w;
}

std::int64_t tail_start(std::int64_t n, double r) {
  const double v = r * static_cast<double>(n);
  double k = std::ceil(v);
  // r * n one ulp above an integer (0.1 * 30) must not round up.
  if (k - v > 1.0 - 1e-9) k -= 1.0;
  return static_cast<std::int64_t>(k);
}

}  // namespace advest
