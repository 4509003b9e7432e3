#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "advest/adversary.hpp"
#include "advest/aggregators.hpp"
#include "advest/baseline.hpp"
#include "advest/problem.hpp"

namespace advest {

enum class MethodKind { Estimator, Baseline };

// Flat `section.key = value` experiment description. Matrices come from
// files named relative to the config file. Recognized keys:
//
//   problem.A, problem.P, problem.B, problem.mu_true   file paths
//   problem.sigma, problem.m, problem.scale
//   problem.adversaries                                 1-based worker list
//   attack.kind (none|baruch|constant|sign_flip|random_large)
//   attack.value, attack.scale, attack.targets
//   method.kind (estimator|baseline), method.rule, method.wrapper, method.s,
//   method.schedule_x (sqrt|pow09), method.label
//   run.mode (sync|async), run.schedule (s1|s2|s3), run.n, run.r,
//   run.trials, run.seed, run.checkpoints
//   box.lo, box.hi
//   output.csv
struct ExperimentConfig {
  std::filesystem::path source;
  std::map<std::string, std::string> entries;  // as read, after overrides

  SensingProblem problem;
  bool composed = false;  // A came from P and B
  Matrix P;
  Matrix B;
  double scale = 1.0;

  AttackSpec attack;

  MethodKind method = MethodKind::Estimator;
  AggregatorSpec aggregator;
  XSchedule schedule_x = XSchedule::Sqrt;
  std::string label;

  Mode mode = Mode::Async;
  int statement = 3;
  std::int64_t n = 10000;
  double r = 0.5;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> checkpoints;

  BoxProjection box;
  std::filesystem::path output_csv;

  // "estimator(s3)" or the aggregator label, unless method.label is set.
  std::string method_label() const;
};

// Parses and validates. Every problem found is reported in one ConfigError;
// syntax problems carry line numbers. `overrides` are `key=value` strings
// applied on top of the file (last one wins).
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& source_name,
                              const std::vector<std::string>& overrides = {});

// The geometric grid 10^2, 10^2.5, ..., capped at n, always ending in n.
std::vector<std::int64_t> default_checkpoints(std::int64_t n);

}  // namespace advest
