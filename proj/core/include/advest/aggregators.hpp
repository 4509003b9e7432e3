#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advest/linalg.hpp"
#include "advest/random.hpp"

namespace advest {

enum class Rule { Krum, Cm, Ctm, Rfa, RageApprox };
enum class Wrapper { None, Bucketing, Buffered };

std::string to_string(Rule rule);
std::string to_string(Wrapper wrapper);
Rule parse_rule(const std::string& text);
Wrapper parse_wrapper(const std::string& text);

// a_j (a_j^T x - y_j)
Vector l2_gradient(const Vector& a_j, const Vector& x, double y_j);

// (1 - gamma) grad + gamma m_prev, gamma in [0, 1].
Vector momentum_update(const Vector& m_prev, const Vector& grad, double gamma);

Vector krum(const std::vector<Vector>& vectors, std::size_t f);
Vector coordinate_median(const std::vector<Vector>& vectors);
Vector trimmed_mean(const std::vector<Vector>& vectors, std::size_t f);

struct WeiszfeldResult {
  Vector point;
  int iterations = 0;
  // Sum of distances at the initial point and after each iteration.
  std::vector<double> objective;
};
WeiszfeldResult geometric_median(const std::vector<Vector>& vectors, int max_iterations = 100,
                                 double tol = 1e-10, double guard = 1e-12);

// Drops the vector farthest from the running mean, f times, and averages the
// rest. A simple distance filter standing in for RAGE, not the original.
Vector rage_approx(const std::vector<Vector>& vectors, std::size_t f);

Vector aggregate(Rule rule, const std::vector<Vector>& vectors, std::size_t f);

// Shuffle with `rng`, split into contiguous buckets of size s, average each,
// aggregate the bucket means with the unchanged budget f. A single bucket
// returns its mean directly.
Vector bucketing_aggregate(Rule rule, const std::vector<Vector>& vectors, std::size_t s, std::size_t f,
                           RandomSource& rng);

// Fixed worker -> buffer partition (buffer = worker / s). Holds the latest
// report per worker and emits the aggregate of buffer means once every
// buffer has at least one report, then starts a fresh epoch.
class BufferedAggregator {
 public:
  BufferedAggregator(std::size_t num_workers, std::size_t s, Rule rule, std::size_t f);

  std::optional<Vector> report(std::size_t worker, const Vector& value);

  std::size_t num_buffers() const { return num_buffers_; }
  std::size_t buffer_of(std::size_t worker) const { return worker / s_; }

 private:
  std::size_t num_workers_;
  std::size_t s_;
  std::size_t num_buffers_;
  Rule rule_;
  std::size_t f_;
  std::vector<std::optional<Vector>> latest_;
};

}  // namespace advest
