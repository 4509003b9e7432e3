#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "advest/harness/config.hpp"
#include "advest/harness/experiment.hpp"

namespace advest {

struct MethodResult {
  std::string label;
  double final_err_mean = 0.0;  // ||x_n - EX|| at the last checkpoint
  double final_err_se = 0.0;
  double final_f_mean = 0.0;
  double final_f_se = 0.0;
  std::size_t rank = 0;  // 1 = lowest final error
  RunReport report;
};

struct Comparison {
  std::vector<MethodResult> methods;  // ordered by rank
};

// Overrides that turn a base config into the named method: "estimator" or a
// rule name (krum, cm, ctm, rfa, rage-approx) using the base config's
// wrapper. KRUM needs 2f + 3 inputs, so under a wrapper with too few
// buffers it falls back to s = 1.
std::vector<std::string> method_overrides(const std::string& method, const ExperimentConfig& base);

// Runs every config and ranks by final mean error. The configs must share
// A, mu_true, sigma, mode, box and horizon.
Comparison compare_methods(const std::vector<ExperimentConfig>& configs);

// One two-column (t, mean error) file per method plus a gnuplot script
// `index.gp` that plots them all on log-log axes.
void write_plot_series(const Comparison& comparison, const std::filesystem::path& dir);

std::string format_comparison(const Comparison& comparison);

}  // namespace advest
