#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace advest {

struct Stepsizes {
  double alpha;  // x-update (slow timescale)
  double beta;   // y-update (fast timescale)
};

enum class Regime {
  ConstConst,  // alpha = n^{-1/2}, beta = (ln n - 2 ln ln n) / (2 r n)
  ConstDecay,  // alpha = n^{-1/2}, beta = 1 / (t + 1)
  DecayDecay,  // alpha = (t + 1)^{-1/2}, beta = 1 / (t + 1)
  Custom,
};

// The three rate-theorem stepsize regimes plus a user-supplied one. Every
// produced value lies in (0, 1].
class StepsizeSchedule {
 public:
  static StepsizeSchedule const_const(std::int64_t horizon, double r);
  static StepsizeSchedule const_decay(std::int64_t horizon);
  static StepsizeSchedule decay_decay();
  static StepsizeSchedule custom(std::function<Stepsizes(std::int64_t)> fn,
                                 std::optional<std::int64_t> horizon = std::nullopt);

  // Statement number (1, 2, 3) to regime, as used by the CLI and harness.
  static StepsizeSchedule for_statement(int statement, std::int64_t horizon, double r);

  Stepsizes at(std::int64_t t) const;

  Regime regime() const { return regime_; }
  std::optional<std::int64_t> horizon() const { return horizon_; }
  double tail_fraction() const { return r_; }
  std::string name() const;

 private:
  StepsizeSchedule() = default;

  Regime regime_ = Regime::DecayDecay;
  std::optional<std::int64_t> horizon_;
  double r_ = 0.5;
  double const_beta_ = 0.0;
  std::function<Stepsizes(std::int64_t)> custom_;
};

Stepsizes stepsizes_at(const StepsizeSchedule& schedule, std::int64_t t);

// Normalized tail weights alpha_t / sum(alpha) over the window k..n.
std::vector<double> tail_weights(std::span<const double> alphas);

// k = ceil(r n), the first index of the tail window.
std::int64_t tail_start(std::int64_t n, double r);

}  // namespace advest
