#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "advest/bounds.hpp"
#include "advest/estimator.hpp"
#include "advest/harness/config.hpp"
#include "advest/harness/rate_fit.hpp"
#include "advest/recoverability.hpp"

namespace advest {

inline constexpr const char* kCsvSchema = "# schema: advest-trajectory v1";

// Mean and standard error over trials at one checkpoint.
struct MetricSummary {
  std::int64_t t = 0;
  double f_x_mean = 0.0, f_x_se = 0.0;
  double f_xtail_mean = 0.0, f_xtail_se = 0.0;
  double err_mean = 0.0, err_se = 0.0;
  double y_err_mean = 0.0, y_err_se = 0.0;
  double bound = 0.0;  // NaN for baselines or when the null-space condition fails
};

struct RunReport {
  std::string method;
  std::string attack;
  Mode mode = Mode::Async;
  bool baseline = false;
  std::vector<std::int64_t> checkpoints;
  std::vector<std::vector<CheckpointRecord>> per_trial;  // [trial][checkpoint]
  std::vector<MetricSummary> summary;
  std::optional<RateFit> slope;  // of mean f(x_tail) against n
  std::optional<RecoverabilityReport> recoverability;
  std::optional<RateConstants> constants;
  std::vector<std::string> notes;
};

// Runs all trials (in parallel, see thread_count) and aggregates them in
// trial order. Writes the CSV when the config names one.
RunReport run_experiment(const ExperimentConfig& config);

// Per-trial rows followed by "mean" and "se" rows. Written to a temporary
// file and renamed, so a failed run leaves nothing behind.
void write_run_csv(const RunReport& report, const std::filesystem::path& path);

// Structured `key: value` text for terminals and logs.
std::string format_report(const RunReport& report);

// Sample mean and standard error (0 for a single value).
std::pair<double, double> mean_and_se(const std::vector<double>& values);

}  // namespace advest
