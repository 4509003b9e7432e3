#include "advest/harness/compare.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace advest {

namespace {

void check_consistent(const ExperimentConfig& a, const ExperimentConfig& b) {
  std::vector<std::string> diffs;
  if (a.problem.A.rows() != b.problem.A.rows() || a.problem.A.cols() != b.problem.A.cols() ||
      a.problem.A != b.problem.A) {
    diffs.push_back("A");
  }
  if (a.problem.mu_true.size() != b.problem.mu_true.size() || a.problem.mu_true != b.problem.mu_true) {
    diffs.push_back("mu_true");
  }
  if (a.problem.sigma != b.problem.sigma) diffs.push_back("sigma");
  if (a.problem.adversaries != b.problem.adversaries) diffs.push_back("adversaries");
  if (a.mode != b.mode) diffs.push_back("mode");
  if (a.n != b.n) diffs.push_back("n");
  if (a.box.lo != b.box.lo || a.box.hi != b.box.hi) diffs.push_back("box");
  if (!diffs.empty()) {
    std::string msg = "compare: configs disagree on";
    for (const auto& d : diffs) msg += " " + d;
    throw std::invalid_argument(msg);
  }
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (char c : label) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return out;
}

}  // namespace

std::vector<std::string> method_overrides(const std::string& method, const ExperimentConfig& base) {
  if (method == "estimator") return {"method.kind=estimator"};
  const Rule rule = parse_rule(method);
  std::vector<std::string> out = {"method.kind=baseline", "method.rule=" + to_string(rule)};
  AggregatorSpec probe = base.aggregator;
  probe.rule = rule;
  try {
    probe.validate(base.problem.num_workers());
  } catch (const std::invalid_argument&) {
    if (rule == Rule::Krum) out.push_back("method.s=1");
  }
  return out;
}

Comparison compare_methods(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw std::invalid_argument("compare: no configs");
  for (std::size_t i = 1; i < configs.size(); ++i) check_consistent(configs.front(), configs[i]);

  Comparison out;
  for (const auto& cfg : configs) {
    MethodResult res;
    res.report = run_experiment(cfg);
    res.label = res.report.method;
    const MetricSummary& last = res.report.summary.back();
    res.final_err_mean = last.err_mean;
    res.final_err_se = last.err_se;
    res.final_f_mean = last.f_x_mean;
    res.final_f_se = last.f_x_se;
    out.methods.push_back(std::move(res));
  }
  std::stable_sort(out.methods.begin(), out.methods.end(),
                   [](const MethodResult& a, const MethodResult& b) { return a.final_err_mean < b.final_err_mean; });
  for (std::size_t i = 0; i < out.methods.size(); ++i) out.methods[i].rank = i + 1;
  return out;
}

void write_plot_series(const Comparison& comparison, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.gp");
  index << "set logscale xy\nset xlabel 'n'\nset ylabel 'mean ||x_n - EX||'\nplot \\\n";
  for (std::size_t i = 0; i < comparison.methods.size(); ++i) {
    const auto& m = comparison.methods[i];
    const std::string name = file_stem(m.label) + ".dat";
    std::ofstream series(dir / name);
    series << "# " << m.label << "\n" << std::setprecision(17);
    for (const auto& s : m.report.summary) series << s.t << ' ' << s.err_mean << '\n';
    index << "  '" << name << "' using 1:2 with linespoints title '" << m.label << "'"
          << (i + 1 < comparison.methods.size() ? ", \\\n" : "\n");
  }
}

std::string format_comparison(const Comparison& comparison) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "rank,method,final_err_mean,final_err_se,final_f_mean,final_f_se\n";
  for (const auto& m : comparison.methods) {
    out << m.rank << ',' << m.label << ',' << m.final_err_mean << ',' << m.final_err_se << ','
        << m.final_f_mean << ',' << m.final_f_se << '\n';
  }
  return out.str();
}

}  // namespace advest
