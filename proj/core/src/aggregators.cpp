#include "advest/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advest {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::Krum: return "krum";
    case Rule::Cm: return "cm";
    case Rule::Ctm: return "ctm";
    case Rule::Rfa: return "rfa";
    case Rule::RageApprox: return "rage-approx";
  }
  return "?";
}

std::string to_string(Wrapper wrapper) {
  switch (wrapper) {
    case Wrapper::None: return "none";
    case Wrapper::Bucketing: return "bucketing";
    case Wrapper::Buffered: return "buffered";
  }
  return "?";
}

Rule parse_rule(const std::string& text) {
  if (text == "krum") return Rule::Krum;
  if (text == "cm") return Rule::Cm;
  if (text == "ctm") return Rule::Ctm;
  if (text == "rfa") return Rule::Rfa;
  if (text == "rage-approx" || text == "rage") return Rule::RageApprox;
  throw std::invalid_argument("unknown aggregation rule '" + text + "'");
}

Wrapper parse_wrapper(const std::string& text) {
  if (text == "none") return Wrapper::None;
  if (text == "bucketing") return Wrapper::Bucketing;
  if (text == "buffered") return Wrapper::Buffered;
  throw std::invalid_argument("unknown wrapper '" + text + "'");
}

Vector l2_gradient(const Vector& a_j, const Vector& x, double y_j) {
  require_size(x.size(), a_j.size(), "l2_gradient");
  return a_j * (a_j.dot(x) - y_j);
}

Vector momentum_update(const Vector& m_prev, const Vector& grad, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("momentum gamma outside [0, 1]");
  require_size(m_prev.size(), grad.size(), "momentum_update");
  return (1.0 - gamma) * grad + gamma * m_prev;
}

namespace {

Index check_vectors(const std::vector<Vector>& vectors, const char* who) {
  if (vectors.empty()) throw std::invalid_argument(std::string(who) + ": no input vectors");
  const Index d = vectors.front().size();
  for (const Vector& v : vectors) require_size(v.size(), d, who);
  return d;
}

Vector mean_of(const std::vector<Vector>& vectors) {
  Vector sum = Vector::Zero(vectors.front().size());
  for (const Vector& v : vectors) sum += v;
  return sum / static_cast<double>(vectors.size());
}

double geo_objective(const std::vector<Vector>& vectors, const Vector& z) {
  double total = 0.0;
  for (const Vector& v : vectors) total += (v - z).norm();
  return total;
}

}  // namespace

Vector krum(const std::vector<Vector>& vectors, std::size_t f) {
  check_vectors(vectors, "krum");
  const std::size_t n = vectors.size();
  if (n < 2 * f + 3) {
    throw std::invalid_argument("krum needs N >= 2f + 3 (N = " + std::to_string(n) +
                                ", f = " + std::to_string(f) + ")");
  }
  const std::size_t neighbors = n - f - 2;
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> dist;
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dist.push_back((vectors[i] - vectors[j]).squaredNorm());
    }
    std::sort(dist.begin(), dist.end());
    double score = 0.0;
    for (std::size_t k = 0; k < neighbors; ++k) score += dist[k];
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return vectors[best];
}

Vector coordinate_median(const std::vector<Vector>& vectors) {
  const Index d = check_vectors(vectors, "cm");
  const std::size_t n = vectors.size();
  Vector out(d);
  std::vector<double> col(n);
  for (Index k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = vectors[i](k);
    std::sort(col.begin(), col.end());
    out(k) = n % 2 == 1 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return out;
}

Vector trimmed_mean(const std::vector<Vector>& vectors, std::size_t f) {
  const Index d = check_vectors(vectors, "ctm");
  const std::size_t n = vectors.size();
  if (n <= 2 * f) {
    throw std::invalid_argument("ctm needs N > 2f (N = " + std::to_string(n) + ", f = " +
                                std::to_string(f) + ")");
  }
  Vector out(d);
  std::vector<double> col(n);
  for (Index k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = vectors[i](k);
    std::sort(col.begin(), col.end());
    double sum = 0.0;
    for (std::size_t i = f; i < n - f; ++i) sum += col[i];
    out(k) = sum / static_cast<double>(n - 2 * f);
  }
  return out;
}

WeiszfeldResult geometric_median(const std::vector<Vector>& input, int max_iterations, double tol,
                                 double guard) {
  check_vectors(input, "rfa");
  // Canonical order makes the result independent of input order, bit for bit.
  std::vector<Vector> vectors = input;
  std::sort(vectors.begin(), vectors.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  WeiszfeldResult res;
  res.point = mean_of(vectors);
  res.objective.push_back(geo_objective(vectors, res.point));
  for (int it = 0; it < max_iterations; ++it) {
    Vector num = Vector::Zero(res.point.size());
    double den = 0.0;
    for (const Vector& v : vectors) {
      const double w = 1.0 / std::max((v - res.point).norm(), guard);
      num += w * v;
      den += w;
    }
    Vector next = num / den;
    const double step = (next - res.point).norm();
    const double obj = geo_objective(vectors, next);
    // The guard can make a step near a data point slightly non-descending;
    // keep the better point in that case. Rounding-level wobble is not an
    // increase (otherwise translated inputs could stop at different steps).
    if (obj > res.objective.back() * (1.0 + 1e-13)) break;
    res.point = std::move(next);
    res.iterations = it + 1;
    res.objective.push_back(obj);
    if (step < tol) break;
  }
  return res;
}

Vector rage_approx(const std::vector<Vector>& vectors, std::size_t f) {
  check_vectors(vectors, "rage-approx");
  if (f >= vectors.size()) throw std::invalid_argument("rage-approx needs N > f");
  std::vector<Vector> kept = vectors;
  for (std::size_t round = 0; round < f; ++round) {
    const Vector mu = mean_of(kept);
    std::size_t worst = 0;
    double worst_d = -1.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const double dist = (kept[i] - mu).squaredNorm();
      if (dist > worst_d) {
        worst_d = dist;
        worst = i;
      }
    }
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  return mean_of(kept);
}

Vector aggregate(Rule rule, const std::vector<Vector>& vectors, std::size_t f) {
  switch (rule) {
    case Rule::Krum: return krum(vectors, f);
    case Rule::Cm: return coordinate_median(vectors);
    case Rule::Ctm: return trimmed_mean(vectors, f);
    case Rule::Rfa: return geometric_median(vectors).point;
    case Rule::RageApprox: return rage_approx(vectors, f);
  }
  throw std::logic_error("unknown rule");
}

Vector bucketing_aggregate(Rule rule, const std::vector<Vector>& vectors, std::size_t s, std::size_t f,
                           RandomSource& rng) {
  check_vectors(vectors, "bucketing");
  if (s < 1) throw std::invalid_argument("bucket size must be >= 1");
  std::vector<std::size_t> order(vectors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  std::vector<Vector> means;
  for (std::size_t start = 0; start < order.size(); start += s) {
    const std::size_t stop = std::min(order.size(), start + s);
    Vector sum = Vector::Zero(vectors.front().size());
    for (std::size_t k = start; k < stop; ++k) sum += vectors[order[k]];
    means.push_back(sum / static_cast<double>(stop - start));
  }
  if (means.size() == 1) return means.front();
  return aggregate(rule, means, f);
}

BufferedAggregator::BufferedAggregator(std::size_t num_workers, std::size_t s, Rule rule, std::size_t f)
    : num_workers_(num_workers), s_(s), rule_(rule), f_(f) {
  if (num_workers == 0) throw std::invalid_argument("buffered aggregation needs N >= 1");
  if (s < 1) throw std::invalid_argument("buffer size must be >= 1");
  num_buffers_ = (num_workers + s - 1) / s;
  latest_.resize(num_workers);
}

std::optional<Vector> BufferedAggregator::report(std::size_t worker, const Vector& value) {
  if (worker >= num_workers_) throw std::invalid_argument("buffered report: worker out of range");
  latest_[worker] = value;
  std::vector<Vector> means;
  for (std::size_t b = 0; b < num_buffers_; ++b) {
    const std::size_t lo = b * s_;
    const std::size_t hi = std::min(num_workers_, lo + s_);
    Vector sum;
    std::size_t count = 0;
    for (std::size_t w = lo; w < hi; ++w) {
      if (!latest_[w]) continue;
      sum = count == 0 ? *latest_[w] : Vector(sum + *latest_[w]);
      ++count;
    }
    if (count == 0) return std::nullopt;
    means.push_back(sum / static_cast<double>(count));
  }
  for (auto& slot : latest_) slot.reset();
  if (means.size() == 1) return means.front();
  return aggregate(rule_, means, f_);
}

}  // namespace advest
