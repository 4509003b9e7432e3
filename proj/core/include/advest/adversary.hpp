#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advest/linalg.hpp"
#include "advest/problem.hpp"
#include "advest/random.hpp"

namespace advest {

enum class AttackKind {
  None,         // adversarial workers behave honestly
  Baruch,       // mean-plus-std collinear attack
  Constant,     // always report `value`
  SignFlip,     // report minus an honest-looking sample
  RandomLarge,  // scale * N(0, 1)
};

struct AttackSpec {
  AttackKind kind = AttackKind::None;
  double value = 0.0;  // Constant
  double scale = 1.0;  // RandomLarge
  // Workers that attack. Empty means every adversarial worker of the problem.
  std::vector<std::size_t> targets;

  static AttackSpec none() { return {}; }
  static AttackSpec baruch() { return {AttackKind::Baruch, 0.0, 1.0, {}}; }
  static AttackSpec constant(double v) { return {AttackKind::Constant, v, 1.0, {}}; }
  static AttackSpec sign_flip() { return {AttackKind::SignFlip, 0.0, 1.0, {}}; }
  static AttackSpec random_large(double s) { return {AttackKind::RandomLarge, 0.0, s, {}}; }

  // Checks targets against the problem's adversary set.
  void validate(const SensingProblem& problem) const;
  bool attacks(const SensingProblem& problem, std::size_t worker) const;

  // Short label for CSV columns: "none", "baruch-y", "baruch", "constant(3)", ...
  // `measurement_level` selects the estimator (Y-level) label for Baruch.
  std::string descriptor(bool measurement_level) const;
};

AttackKind parse_attack_kind(const std::string& text);

// c minimizing ||c a_w - (mu_hat + sigma_hat)||, with mu_hat the coordinate
// mean and sigma_hat the population standard deviation of `honest_momenta`.
double baruch_scale(const Vector& a_w, const std::vector<Vector>& honest_momenta);

// What the worker would have reported honestly: a_w^T (mu + sigma z), drawn
// from the worker's own stream. Used by SignFlip and by AttackKind::None.
double honest_style_sample(const SensingProblem& problem, std::size_t worker, RandomSource& rng);

// Y reported by attacking worker w to the two-timescale estimator. For Baruch
// the honest "momenta" are the l2 gradients a_j (a_j^T x - y(j)) at the
// current x, and Y = a_w^T x - c, so that a_w (a_w^T x - Y) = c a_w.
double attack_measurement(const AttackSpec& spec, const SensingProblem& problem, std::size_t worker,
                          const Vector& x, const Vector& y, RandomSource& rng);

// Inputs the baseline pipeline exposes to a momentum-level attacker.
struct MomentumContext {
  Vector x;
  double y_prev = 0.0;   // the worker's y before this report
  Vector m_prev;         // the worker's previous momentum
  double beta = 1.0;
  double gamma = 0.0;
  double y_gain = 1.0;   // 1 (sync) or N (async): y <- (1-beta) y + beta * gain * Y
  std::vector<Vector> honest_momenta;
};

struct MomentumAttack {
  double Y = 0.0;
  // Set when the pipeline must use this momentum verbatim (Baruch, gamma = 0).
  std::optional<Vector> momentum;
};

// Baseline attack. For Baruch picks the scalar Y whose induced momentum
// m = gamma m_prev + (1-gamma) a_w (a_w^T x - y_new(Y)) is closest to c a_w.
MomentumAttack attack_momentum(const AttackSpec& spec, const SensingProblem& problem,
                               std::size_t worker, const MomentumContext& context,
                               RandomSource& rng);

}  // namespace advest
