// advest: command-line front end for the estimator, baselines and checks.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "advest/errors.hpp"
#include "advest/harness/compare.hpp"
#include "advest/harness/config.hpp"
#include "advest/harness/experiment.hpp"
#include "advest/harness/tomography.hpp"
#include "advest/matrix_io.hpp"
#include "advest/recoverability.hpp"

#ifndef ADVEST_DATA_DIR
#define ADVEST_DATA_DIR "data"
#endif

namespace {

enum Exit { kOk = 0, kUsage = 1, kConditionFailed = 2, kNotCertified = 3, kRuntime = 4 };

using namespace advest;

std::string vec_text(const Vector& v) {
  std::ostringstream out;
  out << std::setprecision(10);
  for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v(i);
  return out.str();
}

std::string subset_text(const std::vector<std::size_t>& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i] + 1;
  return out.str();
}

struct NspArgs {
  std::string matrix;
  std::size_t m = 0;
  bool exact = false;
  bool multistart = false;
  int starts = 200;
  std::uint64_t seed = 1;
};

int check_nsp(const NspArgs& a) {
  EtaOptions opt;
  opt.method = a.exact ? EtaMethod::Exact : a.multistart ? EtaMethod::Multistart : EtaMethod::Auto;
  opt.starts = a.starts;
  opt.seed = a.seed;
  const Matrix A = read_matrix(a.matrix);
  const RecoverabilityReport rep = compute_eta(A, a.m, opt);
  std::cout << std::setprecision(12);
  std::cout << "N: " << rep.N << "\nd: " << A.cols() << "\nm: " << rep.m << "\n";
  std::cout << "eta: " << rep.eta << "\n";
  std::cout << "K: " << rep.K << "\n";
  std::cout << "A_bar: " << rep.a_bar << "\n";
  std::cout << "holds_nsp: " << (rep.holds_nsp ? "true" : "false") << "\n";
  std::cout << "method: " << to_string(rep.method) << "\n";
  std::cout << "certified: " << (rep.certified ? "true" : "false") << "\n";
  if (rep.witness) {
    std::cout << "witness_subset: " << subset_text(rep.witness->subset) << "\n";
    std::cout << "witness_direction: " << vec_text(rep.witness->direction) << "\n";
  }
  // A multistart value is an upper bound, so a non-positive one is conclusive.
  if (!rep.holds_nsp) return kConditionFailed;
  return rep.certified ? kOk : kNotCertified;
}

struct RunArgs {
  std::string problem;
  std::vector<std::string> sets;
  std::optional<std::string> mode, schedule, rule, wrapper, schedule_x, out;
  std::optional<std::int64_t> n, seed, trials, s;
  std::optional<double> r;
};

ExperimentConfig load_with(const RunArgs& a, std::vector<std::string> overrides) {
  if (a.mode) overrides.push_back("run.mode=" + *a.mode);
  if (a.schedule) overrides.push_back("run.schedule=" + *a.schedule);
  if (a.n) {
    overrides.push_back("run.n=" + std::to_string(*a.n));
  }
  if (a.r) {
    std::ostringstream rs;
    rs << std::setprecision(17) << *a.r;
    overrides.push_back("run.r=" + rs.str());
  }
  if (a.seed) overrides.push_back("run.seed=" + std::to_string(*a.seed));
  if (a.trials) overrides.push_back("run.trials=" + std::to_string(*a.trials));
  if (a.rule) overrides.push_back("method.rule=" + *a.rule);
  if (a.wrapper) overrides.push_back("method.wrapper=" + *a.wrapper);
  if (a.s) overrides.push_back("method.s=" + std::to_string(*a.s));
  if (a.schedule_x) overrides.push_back("method.schedule_x=" + *a.schedule_x);
  for (const auto& s : a.sets) overrides.push_back(s);
  ExperimentConfig cfg = load_config(a.problem, overrides);
  // Checkpoints that no longer fit the horizon fall back to the default grid.
  if (a.n && cfg.entries.count("run.checkpoints") == 0) cfg.checkpoints = default_checkpoints(cfg.n);
  if (a.out) cfg.output_csv = *a.out;
  return cfg;
}

int run_estimator(const RunArgs& a) {
  const ExperimentConfig cfg = load_with(a, {"method.kind=estimator"});
  const RunReport rep = run_experiment(cfg);
  std::cout << format_report(rep);
  if (!cfg.output_csv.empty()) std::cout << "csv: " << cfg.output_csv.string() << "\n";
  return kOk;
}

int run_baselines(const RunArgs& a) {
  const ExperimentConfig cfg = load_with(a, {"method.kind=baseline"});
  const RunReport rep = run_experiment(cfg);
  std::cout << format_report(rep);
  if (!cfg.output_csv.empty()) std::cout << "csv: " << cfg.output_csv.string() << "\n";
  return kOk;
}

struct CompareArgs {
  std::vector<std::string> configs;
  std::string base;
  std::vector<std::string> methods;
  std::string plot_dir;
  std::optional<std::int64_t> n, trials, seed;
};

int compare(const CompareArgs& a) {
  std::vector<std::string> common;
  if (a.n) common.push_back("run.n=" + std::to_string(*a.n));
  if (a.trials) common.push_back("run.trials=" + std::to_string(*a.trials));
  if (a.seed) common.push_back("run.seed=" + std::to_string(*a.seed));
  std::vector<ExperimentConfig> cfgs;
  for (const auto& c : a.configs) cfgs.push_back(load_config(c, common));
  if (!a.methods.empty()) {
    if (a.base.empty()) throw CLI::ValidationError("--methods", "requires --base");
    const ExperimentConfig base = load_config(a.base, common);
    for (const auto& m : a.methods) {
      std::vector<std::string> ov = common;
      for (auto& o : method_overrides(m, base)) ov.push_back(o);
      cfgs.push_back(load_config(a.base, ov));
    }
  }
  if (cfgs.empty()) throw CLI::ValidationError("compare", "give --config or --base with --methods");
  for (auto& c : cfgs) {
    c.output_csv.clear();
    if (a.n && c.entries.count("run.checkpoints") == 0) c.checkpoints = default_checkpoints(c.n);
  }
  const Comparison cmp = compare_methods(cfgs);
  std::cout << format_comparison(cmp);
  if (!a.plot_dir.empty()) {
    write_plot_series(cmp, a.plot_dir);
    std::cout << "plots: " << a.plot_dir << "/index.gp\n";
  }
  return kOk;
}

struct PartialArgs {
  std::string matrix, U, V, y;
  std::size_t q = 1;
};

int recover_partial(const PartialArgs& a) {
  const Matrix A = read_matrix(a.matrix);
  PartialStructure st{read_matrix(a.U), read_matrix(a.V), a.q};
  const PartialRecoveryVerdict v = check_partial_recovery(A, st);
  std::cout << std::setprecision(12);
  std::cout << "q: " << a.q << "\nmargin: " << v.margin << "\n";
  std::cout << "holds_nsp_prime: " << (v.holds ? "true" : "false") << "\n";
  std::cout << "certified: " << (v.certified ? "true" : "false") << "\n";
  if (v.witness) {
    std::cout << "witness_subset: " << subset_text(v.witness->subset) << "\n";
    std::cout << "witness_alpha: " << vec_text(v.witness->alpha) << "\n";
  }
  if (!a.y.empty()) {
    const L1Fit fit = l1_fit(A, st.U, st.V, read_vector(a.y));
    std::cout << "alpha_hat: " << vec_text(fit.alpha) << "\n";
    std::cout << "beta_hat: " << vec_text(fit.beta) << "\n";
    std::cout << "residual_l1: " << fit.residual << "\n";
    std::cout << "fit_certified: " << (fit.certified ? "true" : "false") << "\n";
  }
  if (!v.holds) return kConditionFailed;
  return v.certified ? kOk : kNotCertified;
}

struct TomoArgs {
  std::string data_dir = ADVEST_DATA_DIR;
  std::int64_t n = 10000;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  double sigma = 1.0;
  std::string mode = "sync";
};

int tomography(const TomoArgs& a) {
  TomographyOptions opt = TomographyOptions::from_data_dir(a.data_dir);
  opt.n = a.n;
  opt.trials = a.trials;
  opt.seed = a.seed;
  opt.sigma = a.sigma;
  opt.mode = parse_mode(a.mode);
  const TomographyReport rep = tomography_demo(opt);
  std::cout << std::setprecision(8);
  std::cout << "composed_A_matches_reference: " << (rep.matches_reference ? "true" : "false") << "\n";
  std::cout << "eta: " << rep.nsp.eta << "\nholds_nsp: " << (rep.nsp.holds_nsp ? "true" : "false") << "\n";
  std::cout << "theta_star: " << vec_text(rep.theta_star) << "\n";
  std::cout << "theta_hat: " << vec_text(rep.theta_hat) << "\n";
  std::cout << "links_star: " << vec_text(rep.links_star) << "\n";
  std::cout << "links_hat: " << vec_text(rep.links_hat) << "\n";
  std::cout << "initial_theta_err: " << rep.initial_theta_err << "\n";
  for (std::size_t c = 0; c < rep.checkpoints.size(); ++c) {
    std::cout << "checkpoint: t=" << rep.checkpoints[c] << " theta_err=" << rep.theta_err[c]
              << " link_err=" << rep.link_err[c] << "\n";
  }
  std::cout << "slope: " << rep.slope << "\n";
  std::cout << "decreasing_trend: " << (rep.decreasing_trend ? "true" : "false") << "\n";
  const bool ok = (!rep.has_reference || rep.matches_reference) && rep.nsp.holds_nsp && rep.decreasing_trend;
  return ok ? kOk : kConditionFailed;
}

void add_run_flags(CLI::App* sub, RunArgs& a) {
  sub->add_option("--problem", a.problem, "experiment config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--mode", a.mode, "sync or async");
  sub->add_option("--n", a.n, "horizon");
  sub->add_option("--seed", a.seed, "base seed");
  sub->add_option("--trials", a.trials, "number of trials");
  sub->add_option("--out", a.out, "CSV output path");
  sub->add_option("--set", a.sets, "extra key=value config override")->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advest: robust distributed mean estimation lab"};
  app.require_subcommand(1);

  NspArgs nsp;
  auto* c_nsp = app.add_subcommand("check-nsp", "compute eta and check the null-space condition");
  c_nsp->add_option("matrix", nsp.matrix, "sensing matrix file")->required()->check(CLI::ExistingFile);
  c_nsp->add_option("--m", nsp.m, "adversary budget")->default_val(0);
  auto* ex = c_nsp->add_flag("--exact", nsp.exact, "exact enumeration (N <= 12, d <= 4)");
  c_nsp->add_flag("--multistart", nsp.multistart, "multistart upper bound")->excludes(ex);
  c_nsp->add_option("--starts", nsp.starts, "multistart starts")->default_val(200);
  c_nsp->add_option("--seed", nsp.seed, "multistart seed")->default_val(1);

  RunArgs est;
  auto* c_est = app.add_subcommand("run-estimator", "run the two-timescale estimator");
  add_run_flags(c_est, est);
  c_est->add_option("--schedule", est.schedule, "s1, s2 or s3");
  c_est->add_option("--r", est.r, "tail fraction");

  RunArgs base;
  auto* c_base = app.add_subcommand("run-baselines", "run a robust-aggregation baseline");
  add_run_flags(c_base, base);
  c_base->add_option("--rule", base.rule, "krum, cm, ctm, rfa or rage-approx");
  c_base->add_option("--wrapper", base.wrapper, "none, bucketing or buffered");
  c_base->add_option("--s", base.s, "bucket or buffer size");
  c_base->add_option("--schedule-x", base.schedule_x, "sqrt or pow09");

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "rank methods on a shared problem");
  c_cmp->add_option("--config", cmp.configs, "experiment config (repeatable)")->check(CLI::ExistingFile);
  c_cmp->add_option("--base", cmp.base, "base config for --methods")->check(CLI::ExistingFile);
  c_cmp->add_option("--methods", cmp.methods, "estimator and/or rule names")->delimiter(',');
  c_cmp->add_option("--plot-dir", cmp.plot_dir, "write per-method series here");
  c_cmp->add_option("--n", cmp.n, "override horizon");
  c_cmp->add_option("--trials", cmp.trials, "override trials");
  c_cmp->add_option("--seed", cmp.seed, "override seed");

  PartialArgs part;
  auto* c_part = app.add_subcommand("recover-partial", "check the partial recovery condition, optionally fit");
  c_part->add_option("--matrix", part.matrix)->required()->check(CLI::ExistingFile);
  c_part->add_option("--U", part.U)->required()->check(CLI::ExistingFile);
  c_part->add_option("--V", part.V)->required()->check(CLI::ExistingFile);
  c_part->add_option("--q", part.q, "corruption sparsity")->default_val(1);
  c_part->add_option("--y", part.y, "measurements to fit")->check(CLI::ExistingFile);

  TomoArgs tomo;
  auto* c_tomo = app.add_subcommand("tomography-demo", "compose A = PB and estimate link delays");
  c_tomo->add_option("--data-dir", tomo.data_dir, "directory with tomography/ files")->default_val(ADVEST_DATA_DIR);
  c_tomo->add_option("--n", tomo.n)->default_val(10000);
  c_tomo->add_option("--trials", tomo.trials)->default_val(10);
  c_tomo->add_option("--seed", tomo.seed)->default_val(1);
  c_tomo->add_option("--sigma", tomo.sigma)->default_val(1.0);
  c_tomo->add_option("--mode", tomo.mode, "sync or async")->default_val("sync")->check(CLI::IsMember({"sync", "async"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_nsp->parsed()) return check_nsp(nsp);
    if (c_est->parsed()) return run_estimator(est);
    if (c_base->parsed()) return run_baselines(base);
    if (c_cmp->parsed()) return compare(cmp);
    if (c_part->parsed()) return recover_partial(part);
    if (c_tomo->parsed()) return tomography(tomo);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
