#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "advest/linalg.hpp"

namespace advest {

enum class EtaMethod { Exact, Multistart, Auto };

std::string to_string(EtaMethod method);

// Exact enumeration is limited to desk-scale instances.
inline constexpr std::size_t kExactMaxRows = 12;
inline constexpr Index kExactMaxCols = 4;

struct EtaOptions {
  EtaMethod method = EtaMethod::Auto;
  int starts = 200;         // multistart only
  int iterations = 400;     // subgradient steps per start
  std::uint64_t seed = 1;
  double margin_tol = 1e-9; // eta must exceed this to certify the null-space condition
};

// A subset S (|S| = m) and a unit direction x attaining the reported margin.
struct NspWitness {
  std::vector<std::size_t> subset;
  Vector direction;
};

struct RecoverabilityReport {
  double eta = 0.0;
  // 2 m Abar / (N eta) + 1, or +infinity when eta <= margin tolerance.
  double K = 0.0;
  bool holds_nsp = false;
  // False for multistart, where eta is only an upper bound.
  bool certified = false;
  EtaMethod method = EtaMethod::Exact;
  double a_bar = 0.0;
  std::size_t m = 0;
  std::size_t N = 0;
  std::optional<NspWitness> witness;
};

// (1/N) [sum_{j not in S} |a_j^T x| - sum_{j in S} |a_j^T x|] / ||x||.
double nsp_margin(const Matrix& A, const std::vector<std::size_t>& subset, const Vector& x);

// min over |S| = m of nsp_margin(A, S, x): S holds the m largest |a_j^T x|.
double worst_subset_margin(const Matrix& A, std::size_t m, const Vector& x,
                           std::vector<std::size_t>* subset = nullptr);

// eta = min_{|S| = m} min_{x != 0} nsp_margin(A, S, x).
RecoverabilityReport compute_eta(const Matrix& A, std::size_t m, const EtaOptions& options = {});

// K = 2 m Abar / (N eta) + 1. Throws RecoverabilityError when eta <= 0.
double robustness_K(const RecoverabilityReport& report, const Matrix& A, std::size_t m);

// Partial recovery structure: R^d = span(U) (+) span(V), sparsity budget q.
struct PartialStructure {
  Matrix U;  // d x r
  Matrix V;  // d x s
  std::size_t q = 0;

  // Throws std::invalid_argument unless [U V] is square and invertible.
  void validate(Index dim) const;
};

struct PartialWitness {
  std::vector<std::size_t> subset;
  Vector alpha;
  Vector beta;  // minimizer of the inner problem (empty when unbounded)
};

struct PartialRecoveryVerdict {
  bool holds = false;
  // Exact for r = 1 (alpha = +-1 suffices by homogeneity); sampled otherwise.
  bool certified = false;
  // min over K, alpha of inf_beta (sum_{K^c} |g_i| - sum_K |g_i|); -inf when
  // some inner problem is unbounded below.
  double margin = 0.0;
  std::optional<PartialWitness> witness;
};

struct PartialCheckOptions {
  double margin_tol = 1e-9;
  int net_size = 256;  // random unit alphas when r >= 2
  std::uint64_t seed = 1;
};

PartialRecoveryVerdict check_partial_recovery(const Matrix& A, const PartialStructure& structure,
                                              const PartialCheckOptions& options = {});

struct L1Fit {
  Vector alpha;
  Vector beta;
  double residual = 0.0;             // ||A(U alpha + V beta) - y||_1
  double optimality_residual = 0.0;  // complementary slackness certificate
  bool certified = false;            // optimality_residual <= 1e-9
};

// argmin over (alpha, beta) of ||A(U alpha + V beta) - y||_1 via the LP
// min sum t  s.t.  -t <= A(U alpha + V beta) - y <= t.
L1Fit l1_fit(const Matrix& A, const Matrix& U, const Matrix& V, const Vector& y);

// A = P B for a 0/1 path-link matrix P and a structure matrix B.
Matrix compose_tomography(const Matrix& P, const Matrix& B);

// Calls fn(subset) for every k-subset of {0, ..., n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace advest
