#pragma once

#include <functional>
#include <string>
#include <vector>

#include "advest/linalg.hpp"
#include "advest/random.hpp"

namespace advest {

// Synchronous rounds (every worker reports) or asynchronous single-worker
// updates with the index drawn by the server.
enum class Mode { Sync, Async };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

// Draws the zero-mean, unit-scale noise vector z in X = mu + sigma * z.
using NoiseSampler = std::function<Vector(RandomSource&, Index dim)>;

// Isotropic standard Gaussian; the default noise model.
NoiseSampler gaussian_noise();

// The world being estimated: worker j observes samples of a_j^T X where a_j^T
// is the j-th row of A and E[X] = mu_true. Workers are 0-based.
struct SensingProblem {
  Matrix A;
  Vector mu_true;
  double sigma = 0.0;
  std::vector<std::size_t> adversaries;
  std::size_t m = 0;  // adversary budget, |adversaries| <= m
  NoiseSampler noise = gaussian_noise();

  std::size_t num_workers() const { return static_cast<std::size_t>(A.rows()); }
  Index dim() const { return A.cols(); }

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;

  bool is_adversarial(std::size_t worker) const;
  std::vector<std::size_t> honest_workers() const;

  // E[Y] = A * mu_true.
  Vector mean_measurements() const;
  // max_j ||a_j||
  double max_row_norm() const;
  // max_k |mu_true(k)|
  double max_abs_mean() const;
};

// One honest sample a_w^T (mu_true + sigma z), z drawn from `rng` (the
// worker's own stream). Rejects adversarial workers.
double sample_measurement(const SensingProblem& problem, std::size_t worker,
                          RandomSource& rng);

// Axis-aligned box [lo, hi]; the projection set.
struct BoxProjection {
  Vector lo;
  Vector hi;

  static BoxProjection uniform(Index dim, double lo, double hi);

  void validate() const;
  Index dim() const { return lo.size(); }
  bool contains(const Vector& x) const;
  Vector center() const;
  // D_X: max_{z in box} ||z - x0||, attained at a corner.
  double max_distance_from(const Vector& x0) const;
};

// Euclidean projection onto the box (coordinate-wise clamp).
Vector project_box(const Vector& x, const BoxProjection& box);

}  // namespace advest
