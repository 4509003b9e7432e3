#include "advest/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace advest {

std::string to_string(Mode mode) { return mode == Mode::Sync ? "sync" : "async"; }

Mode parse_mode(const std::string& text) {
  if (text == "sync") return Mode::Sync;
  if (text == "async") return Mode::Async;
  throw std::invalid_argument("unknown mode '" + text + "' (expected sync or async)");
}

NoiseSampler gaussian_noise() {
  return [](RandomSource& rng, Index dim) {
    Vector z(dim);
    for (Index k = 0; k < dim; ++k) z(k) = rng.normal();
    return z;
  };
}

void SensingProblem::validate() const {
  if (A.rows() < 1 || A.cols() < 1) throw std::invalid_argument("A must be non-empty");
  require_size(mu_true.size(), A.cols(), "mu_true");
  if (!A.allFinite()) throw std::invalid_argument("A has non-finite entries");
  if (!mu_true.allFinite()) throw std::invalid_argument("mu_true has non-finite entries");
  if (A.rowwise().norm().maxCoeff() == 0.0) {
    throw std::invalid_argument("A has no nonzero row");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite and non-negative");
  }
  if (m > num_workers()) throw std::invalid_argument("adversary budget m exceeds N");
  if (adversaries.size() > m) {
    throw std::invalid_argument("adversary set larger than budget m");
  }
  std::vector<std::size_t> sorted = adversaries;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate adversary index");
  }
  for (std::size_t w : adversaries) {
    if (w >= num_workers()) {
      throw std::invalid_argument("adversary index " + std::to_string(w) +
                                  " out of range");
    }
  }
  if (!noise) throw std::invalid_argument("noise sampler is empty");
}

bool SensingProblem::is_adversarial(std::size_t worker) const {
  return std::find(adversaries.begin(), adversaries.end(), worker) != adversaries.end();
}

std::vector<std::size_t> SensingProblem::honest_workers() const {
  std::vector<std::size_t> honest;
  for (std::size_t j = 0; j < num_workers(); ++j) {
    if (!is_adversarial(j)) honest.push_back(j);
  }
  return honest;
}

Vector SensingProblem::mean_measurements() const { return A * mu_true; }

double SensingProblem::max_row_norm() const { return A.rowwise().norm().maxCoeff(); }

double SensingProblem::max_abs_mean() const { return mu_true.cwiseAbs().maxCoeff(); }

double sample_measurement(const SensingProblem& problem, std::size_t worker,
                          RandomSource& rng) {
  if (worker >= problem.num_workers()) {
    throw std::invalid_argument("sample_measurement: worker out of range");
  }
  if (problem.is_adversarial(worker)) {
    throw std::invalid_argument("sample_measurement: worker " + std::to_string(worker) +
                                " is adversarial");
  }
  const auto a = problem.A.row(static_cast<Index>(worker));
  if (problem.sigma == 0.0) return a.dot(problem.mu_true);
  Vector z = problem.noise(rng, problem.dim());
  return a.dot(problem.mu_true + problem.sigma * z);
}

BoxProjection BoxProjection::uniform(Index dim, double lo, double hi) {
  return {Vector::Constant(dim, lo), Vector::Constant(dim, hi)};
}

void BoxProjection::validate() const {
  require_size(hi.size(), lo.size(), "box bounds");
  if (lo.size() == 0) throw std::invalid_argument("box must be non-empty");
  for (Index k = 0; k < lo.size(); ++k) {
    if (!(lo(k) <= hi(k)) || !std::isfinite(lo(k)) || !std::isfinite(hi(k))) {
      throw std::invalid_argument("box: need finite lo <= hi in coordinate " +
                                  std::to_string(k));
    }
  }
}

bool BoxProjection::contains(const Vector& x) const {
  return x.size() == lo.size() && (x.array() >= lo.array()).all() &&
         (x.array() <= hi.array()).all();
}

Vector BoxProjection::center() const { return 0.5 * (lo + hi); }

double BoxProjection::max_distance_from(const Vector& x0) const {
  require_size(x0.size(), lo.size(), "box distance origin");
  return (x0 - lo).cwiseAbs().cwiseMax((hi - x0).cwiseAbs()).norm();
}

Vector project_box(const Vector& x, const BoxProjection& box) {
  require_size(x.size(), box.dim(), "project_box");
  return x.cwiseMax(box.lo).cwiseMin(box.hi);
}

}  // namespace advest
