#include "advest/harness/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "advest/baseline.hpp"
#include "advest/harness/parallel.hpp"
#include "advest/random.hpp"

namespace advest {

std::pair<double, double> mean_and_se(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_and_se: no values");
  const double k = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / k;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

namespace {

std::vector<CheckpointRecord> estimator_trial(const ExperimentConfig& cfg, std::size_t trial) {
  const std::size_t N = cfg.problem.num_workers();
  if (cfg.statement == 3) {
    TrialStreams streams = TrialStreams::make(cfg.seed, trial, N);
    RunSpec spec;
    spec.mode = cfg.mode;
    spec.n = cfg.n;
    spec.r = cfg.r;
    spec.checkpoints = cfg.checkpoints;
    return run(cfg.problem, StepsizeSchedule::decay_decay(), cfg.box, cfg.attack, spec, streams).checkpoints;
  }
  // Horizon-dependent stepsizes: one trajectory per checkpoint horizon.
  std::vector<CheckpointRecord> out;
  for (std::int64_t c : cfg.checkpoints) {
    TrialStreams streams = TrialStreams::make(cfg.seed, trial, N);
    RunSpec spec;
    spec.mode = cfg.mode;
    spec.n = c;
    spec.r = cfg.r;
    const auto sched = StepsizeSchedule::for_statement(cfg.statement, c, cfg.r);
    out.push_back(run(cfg.problem, sched, cfg.box, cfg.attack, spec, streams).checkpoints.back());
  }
  return out;
}

std::vector<CheckpointRecord> baseline_trial(const ExperimentConfig& cfg, std::size_t trial) {
  TrialStreams streams = TrialStreams::make(cfg.seed, trial, cfg.problem.num_workers());
  BaselineRunSpec spec;
  spec.mode = cfg.mode;
  spec.n = cfg.n;
  spec.r = cfg.r;
  spec.schedule_x = cfg.schedule_x;
  spec.checkpoints = cfg.checkpoints;
  return run_baseline(cfg.problem, cfg.aggregator, cfg.box, cfg.attack, spec, streams).checkpoints;
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  RunReport report;
  report.method = cfg.method_label();
  report.baseline = cfg.method == MethodKind::Baseline;
  report.mode = cfg.mode;
  report.attack = cfg.attack.descriptor(!report.baseline);
  report.checkpoints = cfg.checkpoints;

  report.per_trial.resize(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t trial) {
    report.per_trial[trial] = report.baseline ? baseline_trial(cfg, trial) : estimator_trial(cfg, trial);
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!report.baseline) {
    report.recoverability = compute_eta(cfg.problem.A, cfg.problem.m);
    if (report.recoverability->holds_nsp) {
      report.constants =
          RateConstants::compute(cfg.problem, cfg.box, cfg.box.center(), *report.recoverability, cfg.mode);
    } else {
      report.notes.push_back("eta <= 0: theorem bound unavailable");
    }
    if (!report.recoverability->certified) report.notes.push_back("eta from multistart (upper bound)");
    if (cfg.attack.kind == AttackKind::Baruch) {
      report.notes.push_back("baruch-y: Y = a_w^T x - c with c from honest l2 gradients");
    }
  } else {
    report.notes.push_back("baselines projected onto the box");
    if (cfg.aggregator.rule == Rule::Ctm) report.notes.push_back("ctm trims m from each end");
    if (cfg.aggregator.rule == Rule::RageApprox) report.notes.push_back("rage-approx: distance filter, approximate");
    if (cfg.aggregator.wrapper == Wrapper::Bucketing) report.notes.push_back("bucketing keeps budget m");
    if (cfg.attack.kind == AttackKind::Baruch) report.notes.push_back("sigma_hat: population std");
  }

  for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
    std::vector<double> fx, ft, err, ye;
    for (const auto& trial : report.per_trial) {
      fx.push_back(trial[c].f_x);
      ft.push_back(trial[c].f_xtail);
      err.push_back(trial[c].err_x_l2);
      ye.push_back(trial[c].max_honest_y_err);
    }
    MetricSummary s;
    s.t = cfg.checkpoints[c];
    std::tie(s.f_x_mean, s.f_x_se) = mean_and_se(fx);
    std::tie(s.f_xtail_mean, s.f_xtail_se) = mean_and_se(ft);
    std::tie(s.err_mean, s.err_se) = mean_and_se(err);
    std::tie(s.y_err_mean, s.y_err_se) = mean_and_se(ye);
    s.bound = report.constants && s.t >= min_horizon(cfg.statement)
                  ? theorem_bound(cfg.statement, *report.constants, s.t, cfg.r)
                  : nan;
    report.summary.push_back(s);
  }

  if (report.summary.size() >= 5) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : report.summary) pts.emplace_back(static_cast<double>(s.t), s.f_xtail_mean);
    try {
      report.slope = fit_rate(pts);
      if (!report.slope->excluded.empty()) report.notes.push_back("slope fit excluded nonpositive values");
    } catch (const std::invalid_argument& e) {
      report.notes.push_back(std::string("slope unavailable: ") + e.what());
    }
  }

  if (!cfg.output_csv.empty()) write_run_csv(report, cfg.output_csv);
  return report;
}

void write_run_csv(const RunReport& report, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".partial";
  try {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << kCsvSchema << "\n";
    out << "# method: " << report.method << "\n";
    out << "# mode: " << to_string(report.mode) << "\n";
    for (const auto& note : report.notes) out << "# note: " << note << "\n";
    out << "trial,t,f_x,f_xtail,err_x_l2,max_honest_y_err,bound_value,attack";
    if (report.baseline) out << ",rule";
    out << "\n";
    auto row = [&](const std::string& trial, std::int64_t t, double fx, double ft, double err, double ye,
                   double bound) {
      out << trial << ',' << t << ',' << fmt_double(fx) << ',' << fmt_double(ft) << ',' << fmt_double(err)
          << ',' << fmt_double(ye) << ',' << fmt_double(bound) << ',' << report.attack;
      if (report.baseline) out << ',' << report.method;
      out << "\n";
    };
    for (std::size_t trial = 0; trial < report.per_trial.size(); ++trial) {
      for (std::size_t c = 0; c < report.summary.size(); ++c) {
        const auto& r = report.per_trial[trial][c];
        row(std::to_string(trial), r.t, r.f_x, r.f_xtail, r.err_x_l2, r.max_honest_y_err, report.summary[c].bound);
      }
    }
    for (const auto& s : report.summary) {
      row("mean", s.t, s.f_x_mean, s.f_xtail_mean, s.err_mean, s.y_err_mean, s.bound);
    }
    for (const auto& s : report.summary) {
      row("se", s.t, s.f_x_se, s.f_xtail_se, s.err_se, s.y_err_se, s.bound);
    }
    out.close();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

std::string format_report(const RunReport& report) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "method: " << report.method << "\n";
  out << "mode: " << to_string(report.mode) << "\n";
  out << "attack: " << report.attack << "\n";
  out << "trials: " << report.per_trial.size() << "\n";
  if (report.recoverability) {
    out << "eta: " << report.recoverability->eta << "\n";
    out << "eta_method: " << to_string(report.recoverability->method) << "\n";
  }
  if (report.constants) {
    const auto& c = *report.constants;
    out << "K: " << c.K << "\nDelta: " << c.Delta << "\nC_N: " << c.C_N << "\nD_X: " << c.D_X
        << "\nE0_y: " << c.E0_y << "\nA_bar: " << c.A_bar << "\n";
  }
  for (const auto& s : report.summary) {
    out << "checkpoint: t=" << s.t << " f_xtail=" << s.f_xtail_mean << " (se " << s.f_xtail_se
        << ") err_x=" << s.err_mean << " (se " << s.err_se << ") bound=" << s.bound << "\n";
  }
  if (report.slope) out << "slope: " << report.slope->slope << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";
  return out.str();
}

}  // namespace advest
