#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "advest/linalg.hpp"
#include "advest/problem.hpp"
#include "advest/recoverability.hpp"

namespace advest {

struct TomographyOptions {
  std::filesystem::path P_file;
  std::filesystem::path B_file;
  std::filesystem::path reference_A_file;  // optional; compared entry-exactly
  std::filesystem::path theta_file;        // theta*, the per-group mean delays
  std::int64_t n = 10000;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  double sigma = 1.0;
  double box_hi = 30.0;
  std::size_t adversary = 6;  // 0-based; the seventh path
  // Synchronous by default: the asynchronous run under attack needs about
  // 1e5 steps before the error falls below 10% of its starting value.
  Mode mode = Mode::Sync;

  // Shipped file names under `dir`.
  static TomographyOptions from_data_dir(const std::filesystem::path& dir);
};

struct TomographyReport {
  Matrix P;
  Matrix B;
  Matrix A;
  bool matches_reference = false;
  bool has_reference = false;
  RecoverabilityReport nsp;
  Vector theta_star;
  Vector links_star;  // B theta*
  double initial_theta_err = 0.0;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> theta_err;  // mean ||x_tail - theta*|| over trials
  std::vector<double> link_err;   // mean ||B x_tail - B theta*||
  Vector theta_hat;               // trial-0 final tail average
  Vector links_hat;
  double slope = 0.0;             // log-log slope of theta_err
  bool decreasing_trend = false;  // slope < 0 and final < 10% of initial
};

TomographyReport tomography_demo(const TomographyOptions& options);

}  // namespace advest
