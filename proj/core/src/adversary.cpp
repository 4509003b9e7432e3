#include "advest/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace advest {

void AttackSpec::validate(const SensingProblem& problem) const {
  for (std::size_t w : targets) {
    if (!problem.is_adversarial(w)) {
      throw std::invalid_argument("attack target " + std::to_string(w + 1) +
                                  " is not in the adversary set");
    }
  }
  if (kind == AttackKind::RandomLarge && !(scale > 0.0 && std::isfinite(scale))) {
    throw std::invalid_argument("random_large attack needs a positive finite scale");
  }
  if (kind == AttackKind::Constant && !std::isfinite(value)) {
    throw std::invalid_argument("constant attack value must be finite");
  }
}

bool AttackSpec::attacks(const SensingProblem& problem, std::size_t worker) const {
  if (!problem.is_adversarial(worker)) return false;
  if (targets.empty()) return true;
  return std::find(targets.begin(), targets.end(), worker) != targets.end();
}

std::string AttackSpec::descriptor(bool measurement_level) const {
  std::ostringstream out;
  switch (kind) {
    case AttackKind::None: out << "none"; break;
    case AttackKind::Baruch: out << (measurement_level ? "baruch-y" : "baruch"); break;
    case AttackKind::Constant: out << "constant(" << value << ")"; break;
    case AttackKind::SignFlip: out << "sign_flip"; break;
    case AttackKind::RandomLarge: out << "random_large(" << scale << ")"; break;
  }
  return out.str();
}

AttackKind parse_attack_kind(const std::string& text) {
  if (text == "none") return AttackKind::None;
  if (text == "baruch") return AttackKind::Baruch;
  if (text == "constant") return AttackKind::Constant;
  if (text == "sign_flip") return AttackKind::SignFlip;
  if (text == "random_large") return AttackKind::RandomLarge;
  throw std::invalid_argument("unknown attack kind '" + text + "'");
}

double baruch_scale(const Vector& a_w, const std::vector<Vector>& honest_momenta) {
  const double nrm2 = a_w.squaredNorm();
  if (nrm2 == 0.0) throw std::invalid_argument("baruch_scale: target row is zero");
  if (honest_momenta.empty()) throw std::invalid_argument("baruch_scale: no honest momenta");
  const Index d = a_w.size();
  Vector mean = Vector::Zero(d);
  for (const Vector& v : honest_momenta) {
    require_size(v.size(), d, "baruch_scale momentum");
    mean += v;
  }
  const double count = static_cast<double>(honest_momenta.size());
  mean /= count;
  Vector var = Vector::Zero(d);
  for (const Vector& v : honest_momenta) var += (v - mean).cwiseAbs2();
  const Vector target = mean + (var / count).cwiseSqrt();
  return a_w.dot(target) / nrm2;
}

double honest_style_sample(const SensingProblem& problem, std::size_t worker, RandomSource& rng) {
  const auto a = problem.A.row(static_cast<Index>(worker));
  if (problem.sigma == 0.0) return a.dot(problem.mu_true);
  Vector z = problem.noise(rng, problem.dim());
  return a.dot(problem.mu_true + problem.sigma * z);
}

namespace {

double simple_attack(const AttackSpec& spec, const SensingProblem& problem, std::size_t worker,
                     RandomSource& rng) {
  switch (spec.kind) {
    case AttackKind::None: return honest_style_sample(problem, worker, rng);
    case AttackKind::Constant: return spec.value;
    case AttackKind::SignFlip: return -honest_style_sample(problem, worker, rng);
    case AttackKind::RandomLarge: return spec.scale * rng.normal();
    case AttackKind::Baruch: break;
  }
  throw std::logic_error("simple_attack: Baruch needs context");
}

}  // namespace

double attack_measurement(const AttackSpec& spec, const SensingProblem& problem, std::size_t worker,
                          const Vector& x, const Vector& y, RandomSource& rng) {
  if (spec.kind != AttackKind::Baruch) return simple_attack(spec, problem, worker, rng);
  std::vector<Vector> grads;
  for (std::size_t j : problem.honest_workers()) {
    const auto a = problem.A.row(static_cast<Index>(j)).transpose();
    grads.push_back(a * (a.dot(x) - y(static_cast<Index>(j))));
  }
  const Vector a_w = problem.A.row(static_cast<Index>(worker)).transpose();
  const double c = baruch_scale(a_w, grads);
  return a_w.dot(x) - c;
}

MomentumAttack attack_momentum(const AttackSpec& spec, const SensingProblem& problem,
                               std::size_t worker, const MomentumContext& ctx, RandomSource& rng) {
  if (spec.kind != AttackKind::Baruch) return {simple_attack(spec, problem, worker, rng), std::nullopt};

  const Vector a_w = problem.A.row(static_cast<Index>(worker)).transpose();
  const double c = baruch_scale(a_w, ctx.honest_momenta);
  const Vector goal = c * a_w;
  // m(Y) = p + Y q
  const Vector q = -(1.0 - ctx.gamma) * ctx.beta * ctx.y_gain * a_w;
  const Vector p = ctx.gamma * ctx.m_prev +
                   (1.0 - ctx.gamma) * a_w * (a_w.dot(ctx.x) - (1.0 - ctx.beta) * ctx.y_prev);
  MomentumAttack out;
  const double qq = q.squaredNorm();
  out.Y = qq > 0.0 ? q.dot(goal - p) / qq : a_w.dot(ctx.x) - c;
  if (ctx.gamma == 0.0) out.momentum = goal;
  return out;
}

}  // namespace advest
