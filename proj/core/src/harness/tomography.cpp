#include "advest/harness/tomography.hpp"

#include <cmath>
#include <stdexcept>

#include "advest/adversary.hpp"
#include "advest/estimator.hpp"
#include "advest/harness/config.hpp"
#include "advest/harness/parallel.hpp"
#include "advest/harness/rate_fit.hpp"
#include "advest/matrix_io.hpp"

namespace advest {

TomographyOptions TomographyOptions::from_data_dir(const std::filesystem::path& dir) {
  TomographyOptions o;
  o.P_file = dir / "tomography" / "P.txt";
  o.B_file = dir / "tomography" / "B.txt";
  o.reference_A_file = dir / "tomography" / "A_reference.txt";
  o.theta_file = dir / "tomography" / "theta_star.txt";
  return o;
}

TomographyReport tomography_demo(const TomographyOptions& opt) {
  TomographyReport rep;
  rep.P = read_matrix(opt.P_file);
  rep.B = read_matrix(opt.B_file);
  rep.A = compose_tomography(rep.P, rep.B);
  if (!opt.reference_A_file.empty() && std::filesystem::exists(opt.reference_A_file)) {
    const Matrix ref = read_matrix(opt.reference_A_file);
    rep.has_reference = true;
    rep.matches_reference = ref.rows() == rep.A.rows() && ref.cols() == rep.A.cols() && ref == rep.A;
  }
  rep.theta_star = read_vector(opt.theta_file);
  rep.links_star = rep.B * rep.theta_star;

  SensingProblem problem;
  problem.A = rep.A;
  problem.mu_true = rep.theta_star;
  problem.sigma = opt.sigma;
  problem.m = 1;
  problem.adversaries = {opt.adversary};
  problem.validate();
  rep.nsp = compute_eta(problem.A, problem.m);

  const BoxProjection box = BoxProjection::uniform(problem.dim(), 0.0, opt.box_hi);
  rep.initial_theta_err = (box.center() - rep.theta_star).norm();
  rep.checkpoints = default_checkpoints(opt.n);

  std::vector<Trajectory> runs(opt.trials);
  parallel_for(opt.trials, [&](std::size_t trial) {
    TrialStreams streams = TrialStreams::make(opt.seed, trial, problem.num_workers());
    RunSpec spec;
    spec.mode = opt.mode;
    spec.n = opt.n;
    spec.checkpoints = rep.checkpoints;
    runs[trial] = run(problem, StepsizeSchedule::decay_decay(), box, AttackSpec::baruch(), spec, streams);
  });

  std::vector<std::pair<double, double>> pts;
  for (std::size_t c = 0; c < rep.checkpoints.size(); ++c) {
    double te = 0.0;
    double le = 0.0;
    for (const auto& tr : runs) {
      const Vector& xt = tr.checkpoints[c].x_tail;
      te += (xt - rep.theta_star).norm();
      le += (rep.B * xt - rep.links_star).norm();
    }
    rep.theta_err.push_back(te / static_cast<double>(runs.size()));
    rep.link_err.push_back(le / static_cast<double>(runs.size()));
    pts.emplace_back(static_cast<double>(rep.checkpoints[c]), rep.theta_err.back());
  }
  rep.theta_hat = runs.front().checkpoints.back().x_tail;
  rep.links_hat = rep.B * rep.theta_hat;
  if (pts.size() >= 5) {
    rep.slope = fit_rate(pts).slope;
  } else if (pts.size() >= 2) {
    rep.slope = (std::log(pts.back().second) - std::log(pts.front().second)) /
                (std::log(pts.back().first) - std::log(pts.front().first));
  }
  rep.decreasing_trend = rep.slope < 0.0 && rep.theta_err.back() < 0.1 * rep.initial_theta_err;
  return rep;
}

}  // namespace advest
