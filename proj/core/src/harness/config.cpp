#include "advest/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "advest/errors.hpp"
#include "advest/matrix_io.hpp"
#include "advest/recoverability.hpp"

namespace advest {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem.A",      "problem.P",         "problem.B",     "problem.mu_true",
      "problem.sigma",  "problem.m",         "problem.scale", "problem.adversaries",
      "attack.kind",    "attack.value",      "attack.scale",  "attack.targets",
      "method.kind",    "method.rule",       "method.wrapper", "method.s",
      "method.schedule_x", "method.label",
      "run.mode",       "run.schedule",      "run.n",         "run.r",
      "run.trials",     "run.seed",          "run.checkpoints",
      "box.lo",         "box.hi",            "output.csv",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Collects problems instead of throwing so all of them can be reported.
class Reader {
 public:
  Reader(const std::map<std::string, std::string>& entries, std::vector<std::string>& problems)
      : entries_(entries), problems_(problems) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
  }

  std::string required_text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      problems_.push_back("missing required key '" + key + "'");
      return "";
    }
    return it->second;
  }

  double real(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    double v = 0.0;
    if (!parse_double(entries_.at(key), v)) {
      problems_.push_back(key + ": not a number: '" + entries_.at(key) + "'");
      return fallback;
    }
    return v;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    std::int64_t v = 0;
    if (!parse_int(entries_.at(key), v)) {
      problems_.push_back(key + ": not an integer: '" + entries_.at(key) + "'");
      return fallback;
    }
    return v;
  }

  std::vector<std::int64_t> integer_list(const std::string& key) {
    std::vector<std::int64_t> out;
    if (!has(key)) return out;
    std::string s = entries_.at(key);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      std::int64_t v = 0;
      if (!parse_int(tok, v)) {
        problems_.push_back(key + ": not an integer: '" + tok + "'");
        continue;
      }
      out.push_back(v);
    }
    return out;
  }

  static bool parse_double(const std::string& s, double& v) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e && std::isfinite(v);
  }

  static bool parse_int(const std::string& s, std::int64_t& v) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e;
  }

 private:
  const std::map<std::string, std::string>& entries_;
  std::vector<std::string>& problems_;
};

template <typename Fn>
auto attempt(std::vector<std::string>& problems, const std::string& context, Fn&& fn)
    -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    problems.push_back(context + ": " + e.what());
    return decltype(fn()){};
  }
}

}  // namespace

std::string ExperimentConfig::method_label() const {
  if (!label.empty()) return label;
  if (method == MethodKind::Estimator) return "estimator(s" + std::to_string(statement) + ")";
  return aggregator.label();
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (double e = 2.0; e <= 4.0 + 1e-9; e += 0.5) {
    const auto c = static_cast<std::int64_t>(std::llround(std::pow(10.0, e)));
    if (c < n) out.push_back(c);
  }
  out.push_back(n);
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path.string() + "'"});
  ExperimentConfig cfg = parse_config(in, path.parent_path(), path.string(), overrides);
  cfg.source = path;
  return cfg;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& source_name, const std::vector<std::string>& overrides) {
  std::vector<std::string> problems;
  std::map<std::string, std::string> entries;

  auto add_entry = [&](const std::string& raw, const std::string& where) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + ": expected 'key = value'");
      return;
    }
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (!known_keys().count(key)) {
      problems.push_back(where + ": unknown key '" + key + "'");
      return;
    }
    if (value.empty()) {
      problems.push_back(where + ": empty value for '" + key + "'");
      return;
    }
    entries[key] = value;
  };

  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const std::string key = trim(line.substr(0, line.find('=')));
    if (seen.count(key)) {
      problems.push_back(where + ": duplicate key '" + key + "'");
      continue;
    }
    seen.insert(key);
    add_entry(line, where);
  }
  for (const auto& o : overrides) add_entry(o, "override '" + o + "'");

  ExperimentConfig cfg;
  cfg.entries = entries;
  Reader rd(entries, problems);
  auto path_of = [&](const std::string& key) { return base_dir / rd.text(key, ""); };

  // Problem.
  const bool has_pb = rd.has("problem.P") || rd.has("problem.B");
  if (has_pb && !(rd.has("problem.P") && rd.has("problem.B"))) {
    problems.push_back("problem.P and problem.B must be given together");
  }
  if (!rd.has("problem.A") && !has_pb) problems.push_back("missing required key 'problem.A' (or P and B)");
  Matrix A;
  if (rd.has("problem.P") && rd.has("problem.B")) {
    cfg.P = attempt(problems, "problem.P", [&] { return read_matrix(path_of("problem.P")); });
    cfg.B = attempt(problems, "problem.B", [&] { return read_matrix(path_of("problem.B")); });
    if (cfg.P.size() && cfg.B.size()) {
      A = attempt(problems, "composition", [&] { return compose_tomography(cfg.P, cfg.B); });
      cfg.composed = A.size() > 0;
    }
    if (rd.has("problem.A") && cfg.composed) {
      Matrix given = attempt(problems, "problem.A", [&] { return read_matrix(path_of("problem.A")); });
      if (given.size() && (given.rows() != A.rows() || given.cols() != A.cols() || given != A)) {
        problems.push_back("composition mismatch: P*B differs from the matrix in problem.A");
      }
    }
  } else if (rd.has("problem.A")) {
    A = attempt(problems, "problem.A", [&] { return read_matrix(path_of("problem.A")); });
  }
  cfg.scale = rd.real("problem.scale", 1.0);
  if (!(cfg.scale != 0.0)) problems.push_back("problem.scale must be nonzero");
  cfg.problem.A = A * cfg.scale;

  if (rd.required_text("problem.mu_true").size()) {
    cfg.problem.mu_true = attempt(problems, "problem.mu_true", [&] { return read_vector(path_of("problem.mu_true")); });
  }
  cfg.problem.sigma = rd.real("problem.sigma", 0.0);
  const std::int64_t m = rd.integer("problem.m", 0);
  if (m < 0) problems.push_back("problem.m must be >= 0");
  cfg.problem.m = static_cast<std::size_t>(std::max<std::int64_t>(m, 0));
  for (std::int64_t w : rd.integer_list("problem.adversaries")) {
    if (w < 1 || (A.rows() > 0 && w > A.rows())) {
      problems.push_back("problem.adversaries: worker " + std::to_string(w) + " out of range 1..N");
    } else {
      cfg.problem.adversaries.push_back(static_cast<std::size_t>(w - 1));
    }
  }
  if (A.size() && cfg.problem.mu_true.size()) {
    attempt(problems, "problem", [&] { cfg.problem.validate(); return 0; });
  }

  // Attack.
  attempt(problems, "attack.kind", [&] {
    cfg.attack.kind = parse_attack_kind(rd.text("attack.kind", "none"));
    return 0;
  });
  cfg.attack.value = rd.real("attack.value", 0.0);
  cfg.attack.scale = rd.real("attack.scale", 1.0);
  for (std::int64_t w : rd.integer_list("attack.targets")) {
    if (w < 1) {
      problems.push_back("attack.targets: worker indices are 1-based");
    } else {
      cfg.attack.targets.push_back(static_cast<std::size_t>(w - 1));
    }
  }
  if (cfg.attack.kind != AttackKind::None && cfg.problem.adversaries.empty()) {
    problems.push_back("attack.kind is set but problem.adversaries is empty");
  }
  if (A.size() && cfg.problem.mu_true.size()) {
    attempt(problems, "attack", [&] { cfg.attack.validate(cfg.problem); return 0; });
  }

  // Method.
  const std::string kind = rd.text("method.kind", "estimator");
  if (kind == "estimator") {
    cfg.method = MethodKind::Estimator;
  } else if (kind == "baseline") {
    cfg.method = MethodKind::Baseline;
  } else {
    problems.push_back("method.kind: expected estimator or baseline, got '" + kind + "'");
  }
  attempt(problems, "method.rule", [&] { cfg.aggregator.rule = parse_rule(rd.text("method.rule", "cm")); return 0; });
  attempt(problems, "method.wrapper", [&] {
    cfg.aggregator.wrapper = parse_wrapper(rd.text("method.wrapper", "none"));
    return 0;
  });
  attempt(problems, "method.schedule_x", [&] {
    cfg.schedule_x = parse_x_schedule(rd.text("method.schedule_x", "sqrt"));
    return 0;
  });
  const std::int64_t s = rd.integer("method.s", 1);
  if (s < 1) problems.push_back("method.s must be >= 1");
  cfg.aggregator.s = static_cast<std::size_t>(std::max<std::int64_t>(s, 1));
  cfg.aggregator.budget = cfg.problem.m;
  cfg.label = rd.text("method.label", "");
  if (cfg.method == MethodKind::Baseline && A.size()) {
    attempt(problems, "method", [&] { cfg.aggregator.validate(static_cast<std::size_t>(A.rows())); return 0; });
  }

  // Run.
  attempt(problems, "run.mode", [&] { cfg.mode = parse_mode(rd.text("run.mode", "async")); return 0; });
  const std::string sched = rd.text("run.schedule", "s3");
  if (sched == "s1" || sched == "s2" || sched == "s3") {
    cfg.statement = sched[1] - '0';
  } else {
    problems.push_back("run.schedule: expected s1, s2 or s3, got '" + sched + "'");
  }
  cfg.n = rd.integer("run.n", 10000);
  if (cfg.n < 1) problems.push_back("run.n must be >= 1");
  if (cfg.method == MethodKind::Estimator && cfg.statement == 1 && cfg.n < 3) {
    problems.push_back("run.n must be >= 3 for schedule s1");
  }
  cfg.r = rd.real("run.r", 0.5);
  if (!(cfg.r > 0.0 && cfg.r < 1.0)) problems.push_back("run.r must lie in (0, 1)");
  const std::int64_t trials = rd.integer("run.trials", 10);
  if (trials < 1) problems.push_back("run.trials must be >= 1");
  cfg.trials = static_cast<std::size_t>(std::max<std::int64_t>(trials, 1));
  const std::int64_t seed = rd.integer("run.seed", 1);
  if (seed < 0) problems.push_back("run.seed must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(std::max<std::int64_t>(seed, 0));
  cfg.checkpoints = rd.integer_list("run.checkpoints");
  if (cfg.checkpoints.empty()) {
    if (cfg.n >= 1) cfg.checkpoints = default_checkpoints(cfg.n);
  } else {
    std::sort(cfg.checkpoints.begin(), cfg.checkpoints.end());
    cfg.checkpoints.erase(std::unique(cfg.checkpoints.begin(), cfg.checkpoints.end()), cfg.checkpoints.end());
    if (cfg.checkpoints.front() < 1 || cfg.checkpoints.back() > cfg.n) {
      problems.push_back("run.checkpoints must lie in [1, run.n]");
    }
    if (cfg.method == MethodKind::Estimator && cfg.statement == 1 && cfg.checkpoints.front() < 3) {
      problems.push_back("run.checkpoints must be >= 3 for schedule s1");
    }
  }

  // Box.
  const bool has_box = rd.has("box.lo") && rd.has("box.hi");
  if (!has_box) problems.push_back("missing required keys 'box.lo' and 'box.hi'");
  const double lo = rd.real("box.lo", 0.0);
  const double hi = rd.real("box.hi", 0.0);
  if (has_box && A.size()) {
    cfg.box = BoxProjection::uniform(A.cols(), lo, hi);
    attempt(problems, "box", [&] { cfg.box.validate(); return 0; });
    if (cfg.problem.mu_true.size() == A.cols() && !cfg.box.contains(cfg.problem.mu_true)) {
      problems.push_back("box does not contain problem.mu_true");
    }
  }

  if (rd.has("output.csv")) cfg.output_csv = path_of("output.csv");

  if (!problems.empty()) throw ConfigError(problems);
  return cfg;
}

}  // namespace advest
