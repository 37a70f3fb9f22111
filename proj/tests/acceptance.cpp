// Acceptance suite: runs every shipped criterion at its stated tolerance and
// prints one pass/fail line each. Exit code = number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "grhmc/adapt.hpp"
#include "grhmc/cli.hpp"
#include "grhmc/diagnostics.hpp"
#include "grhmc/math.hpp"
#include "grhmc/models/bnn.hpp"
#include "grhmc/models/circle.hpp"
#include "grhmc/models/max_model.hpp"
#include "grhmc/models/spike_slab.hpp"
#include "grhmc/models/volatility.hpp"
#include "grhmc/sampler.hpp"

using namespace grhmc;
namespace fs = std::filesystem;

namespace {

const Vec kStudyStart = (Vec(4) << -0.5, 1.0, 1.0, -0.25).finished();

std::vector<double> sorted_column(const Mat& draws, Index col) {
  std::vector<double> v(draws.rows());
  for (Index r = 0; r < draws.rows(); ++r) v[r] = draws(r, col);
  std::sort(v.begin(), v.end());
  return v;
}

bool criterion_convergence_order(std::ostream& os) {
  bool ok = true;
  const std::vector<double> h_grid = {0.2, 0.1, 0.05, 0.025, 0.0125};
  for (const double c : {0.1, 1.0, 10.0}) {
    const models::MaxModel model(c);
    const double T = c == 10.0 ? 0.75 : 1.0;
    const auto table = diag::convergence_study(
        model, kStudyStart, T, h_grid,
        {diag::Method::Leapfrog, diag::Method::NaiveRk, diag::Method::EventAware});
    const double slope_event = table.slope_of(diag::Method::EventAware).slope;
    const double slope_naive = table.slope_of(diag::Method::NaiveRk).slope;
    const bool band = slope_event >= 2.7 && slope_event <= 3.3;
    const bool order = slope_naive < slope_event;
    bool leap_dominates = true;
    for (const double h : h_grid)
      leap_dominates = leap_dominates && table.error_at(diag::Method::Leapfrog, h) >
                                             table.error_at(diag::Method::EventAware, h);
    os << "    c=" << c << ": event slope " << slope_event << (band ? "" : " [outside 2.7..3.3]")
       << ", naive slope " << slope_naive << (order ? "" : " [not smaller]")
       << ", leapfrog dominated at every h: " << (leap_dominates ? "yes" : "NO") << '\n';
    if (c == 10.0 && !band) {
      // diagnostic: the same 5-point grid two octaves down is asymptotic
      std::vector<double> lh, le;
      const Vec ref = diag::reference_solution(model, kStudyStart, T);
      for (const double h : {0.05, 0.025, 0.0125, 0.00625, 0.003125}) {
        const double err =
            (diag::event_aware_integrate(model, kStudyStart, T, h) - ref).norm();
        lh.push_back(std::log(h));
        le.push_back(std::log(err));
      }
      os << "    c=10 diagnostic: slope on {0.05..0.003125} = " << fit_slope(lh, le).slope
         << " (stiff post-crossing frequency ~10 makes h=0.2,0.1 pre-asymptotic)\n";
    }
    ok = ok && band && order && leap_dominates;
  }
  return ok;
}

bool criterion_error_ratio(std::ostream& os) {
  const models::MaxModel model(10.0);
  const Vec ref = diag::reference_solution(model, kStudyStart, 0.75);
  const Vec naive = diag::naive_rk_integrate(model, kStudyStart, 0.125, 6);
  const Vec event = diag::event_aware_integrate(model, kStudyStart, 0.75, 0.125);
  const double ratio = (naive - ref).norm() / (event - ref).norm();
  os << "    naive/event final-state error ratio at c=10, h=0.125: " << ratio << '\n';
  return ratio >= 3.0 && ratio <= 5.0;
}

bool criterion_max_marginal(std::ostream& os) {
  const models::MaxModel model(1.0);
  SamplerConfig cfg;
  cfg.t_burn = 2000.0;
  cfg.t_sample = 20000.0;
  cfg.n_samples = 20000;
  cfg.lambda_mode = LambdaMode::Adaptive;
  cfg.adapt_m_s = true;
  cfg.integrator.abs_tol = 1e-4;
  cfg.integrator.rel_tol = 1e-4;
  cfg.integrator.h_max = 0.5;
  cfg.seed = 20260809;
  const EnsembleResult result = run_ensemble(model, cfg, 3);
  if (result.any_failed) {
    os << "    trajectory failure\n";
    return false;
  }
  const TabulatedCdf cdf([](double x) { return models::max_model_marginal_pdf(x); },
                         -12.0, 12.0, 40000);
  const double ks = diag::ks_statistic(sorted_column(result.merged.draws, 1), cdf);
  os << "    merged " << result.merged.draws.rows() << " draws, KS(q2) = " << ks
     << " (< 0.015 required)\n";
  return ks < 0.015;
}

bool criterion_circle_both_kernels(std::ostream& os) {
  const models::CircleModel model;
  const TabulatedCdf cdf([](double x) { return models::circle_marginal_pdf(x); }, -16.0,
                         16.0, 40000);
  bool ok = true;
  for (const auto kernel : {KernelChoice::Deterministic, KernelChoice::Randomized}) {
    SamplerConfig cfg;
    cfg.t_sample = 5000.0;
    cfg.n_samples = 5000;
    cfg.lambda = 0.2;
    cfg.kernel = kernel;
    cfg.integrator.h_max = 0.5;
    cfg.seed = 31415;
    const EnsembleResult result = run_ensemble(model, cfg, 10);
    if (result.any_failed) {
      os << "    trajectory failure\n";
      return false;
    }
    const double ks = diag::ks_statistic(sorted_column(result.merged.draws, 0), cdf);
    os << "    " << (kernel == KernelChoice::Deterministic ? "deterministic" : "randomized")
       << " kernel: KS(q1) = " << ks << " (< 0.02 required)\n";
    ok = ok && ks < 0.02;
  }
  return ok;
}

bool criterion_reversibility_volume(std::ostream& os) {
  const models::MaxModel model(1.0);
  Rng rng(99);
  double worst = 0.0;
  int used = 0;
  for (int i = 0; i < 200 && used < 50; ++i) {
    Vec z0(4);
    z0 << -0.4 * rng.uniform() - 0.1, rng.normal(), 1.0 + rng.uniform(), rng.normal();
    const Vec z1 = diag::event_aware_integrate(model, z0, 1.0, 1e-3);
    if (model.classify(z1.head(2)) == model.classify(z0.head(2))) continue;
    ++used;
    Vec flip = z1;
    flip.tail(2) = -flip.tail(2);
    Vec back = diag::event_aware_integrate(model, flip, 1.0, 1e-3);
    back.tail(2) = -back.tail(2);
    worst = std::max(worst, (back - z0).norm());
  }
  Mat jac(4, 4);
  const double eps = 1e-5;
  for (Index j = 0; j < 4; ++j) {
    Vec zp = kStudyStart, zm = kStudyStart;
    zp[j] += eps;
    zm[j] -= eps;
    jac.col(j) = (diag::event_aware_integrate(model, zp, 1.0, 1e-3) -
                  diag::event_aware_integrate(model, zm, 1.0, 1e-3)) /
                 (2.0 * eps);
  }
  const double det = std::abs(jac.determinant());
  os << "    " << used << " boundary-crossing starts, worst round-trip error " << worst
     << " (< 1e-6); |det J| = " << det << " (1 +/- 1e-3)\n";
  return used == 50 && worst < 1e-6 && std::abs(det - 1.0) < 1e-3;
}

bool criterion_randomized_invariance(std::ostream& os) {
  Rng rng(123);
  const Index d = 5;
  Vec n = rng.normal_vec(d);
  BoundaryGeometry geom;
  geom.n_hat = n / n.norm();
  geom.delta_u = 50.0;
  const long n_draws = 100000;
  Mat second = Mat::Zero(d, d);
  double worst_flip = 0.0;
  long kept = 0;
  while (kept < n_draws) {
    const Vec p = rng.normal_vec(d);
    if (p.dot(geom.n_hat) >= 0.0) continue;
    const Vec out = randomized_reflection(p, geom, rng, false);
    worst_flip = std::max(worst_flip, std::abs(out.dot(geom.n_hat) + p.dot(geom.n_hat)));
    second += out * out.transpose();
    ++kept;
  }
  second /= static_cast<double>(n_draws);
  const double dev = (second - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  os << "    second-moment deviation " << dev << " (< 0.02); normal flip error "
     << worst_flip << " (< 1e-12)\n";
  return dev < 0.02 && worst_flip < 1e-12;
}

bool criterion_lambda_mle(std::ostream& os) {
  LambdaEstimator a(0.05);
  a.record_interval(2.0, true);
  a.record_interval(2.0, true);
  const bool ex1 = a.lambda() == 0.5;
  LambdaEstimator b(0.05);
  b.record_interval(1.0, true);
  b.record_interval(3.0, false);
  b.record_interval(1.0, true);
  const bool ex2 = b.lambda() == 0.4;
  LambdaEstimator c(0.05);
  for (int i = 0; i < 5; ++i) c.record_interval(2.0, false);
  const bool ex3 = c.lambda() == 0.05;
  os << "    closed form exact: " << (ex1 && ex2 ? "yes" : "NO")
     << "; all-censored fallback to lambda_min: " << (ex3 ? "yes" : "NO") << '\n';
  return ex1 && ex2 && ex3;
}

bool criterion_spike_slab(std::ostream& os) {
  const models::SpikeSlabStats s = models::spike_slab_stats(0.0, 1.0);
  const bool p_exact = s.p_zero == 0.25;

  Rng rng(7);
  const long n = 10000000;
  double sum = 0.0, sum2 = 0.0;
  long kept = 0;
  for (long i = 0; i < n; ++i) {
    const double beta = std::max(0.0, rng.normal()) - std::max(0.0, rng.normal());
    if (beta == 0.0) continue;
    sum += beta;
    sum2 += beta * beta;
    ++kept;
  }
  const double mean = sum / kept;
  const double var = sum2 / kept - mean * mean;
  const double se = var * std::sqrt(2.0 / kept);
  const bool mc_ok = std::abs(var - s.var_beta_nonzero) < 3.0 * se;
  os << "    p_zero(0,1) = " << s.p_zero << "; var_nonzero closed form "
     << s.var_beta_nonzero << " vs 1e7-draw oracle " << var << " (|diff| "
     << std::abs(var - s.var_beta_nonzero) << " < 3 SE = " << 3.0 * se << ")\n";

  double worst = 0.0;
  for (const double pz : {0.05, 0.275, 0.5, 0.725, 0.95})
    for (const double v : {0.25, 1.1875, 2.125, 3.0625, 4.0}) {
      const auto [mu, rho] = models::solve_spike_slab_hyperparams(pz, v);
      const auto out = models::spike_slab_stats(mu, rho);
      worst = std::max({worst, std::abs(out.p_zero - pz), std::abs(out.var_beta_nonzero - v)});
    }
  os << "    solver round-trip worst residual on the 5x5 grid: " << worst
     << " (< 1e-8)\n";
  return p_exact && mc_ok && worst < 1e-8;
}

bool criterion_regression_trend(std::ostream& os) {
  Rng data_rng(88);
  const Index n = 200, p = 8;
  Mat x(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) x(i, j) = data_rng.normal();
  Vec beta_true = Vec::Zero(p);
  beta_true[0] = 2.0;
  beta_true[1] = -1.5;
  beta_true[2] = 1.0;
  Vec y(n);
  for (Index i = 0; i < n; ++i) y[i] = x.row(i).dot(beta_true) + data_rng.normal();
  const auto data = models::RegressionData::from_raw(x, y);

  const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> avg_zero;
  Vec zero_at_half;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    const auto [mu, rho] = models::solve_spike_slab_hyperparams(grid[gi], 1.0);
    const models::RegressionModel model(data, mu, rho);
    SamplerConfig cfg;
    cfg.t_burn = 200.0;
    cfg.t_sample = 2000.0;
    cfg.n_samples = 2000;
    cfg.lambda = 0.2;
    cfg.integrator.h_max = 0.5;
    cfg.seed = 1000 + gi;
    const EnsembleResult result = run_ensemble(model, cfg, 2);
    if (result.any_failed) {
      os << "    trajectory failure at p_zero = " << grid[gi] << '\n';
      return false;
    }
    const Vec zf = models::posterior_zero_fraction(result.merged, data);
    avg_zero.push_back(zf.mean());
    if (grid[gi] == 0.5) zero_at_half = zf;
  }
  os << "    average posterior zero fraction over prior grid:";
  bool monotone = true;
  for (size_t i = 0; i < avg_zero.size(); ++i) {
    os << ' ' << avg_zero[i];
    if (i > 0) monotone = monotone && avg_zero[i] >= avg_zero[i - 1];
  }
  os << (monotone ? " (nondecreasing)" : " (NOT monotone)") << '\n';
  const double worst_signal =
      std::max({zero_at_half[0], zero_at_half[1], zero_at_half[2]});
  os << "    true-nonzero coefficients zero-fraction at prior 0.5: " << zero_at_half[0]
     << ' ' << zero_at_half[1] << ' ' << zero_at_half[2] << " (< 0.2 required)\n";
  return monotone && worst_signal < 0.2;
}

bool criterion_volatility_recovery(std::ostream& os) {
  models::VolatilityParams truth;
  truth.t_len = 200;
  truth.sigma_l = 0.5;
  truth.sigma_h = 1.5;
  truth.rho_corr = -0.3;
  Rng sim_rng(2);  // balanced dataset: 99/200 high-regime steps
  const auto sim = models::simulate_volatility(truth, sim_rng);
  // the literal exponential prior on gamma forces sigma >= 1 and can never
  // cover sigma_l = 0.5; the documented gaussian override is used here
  const models::VolatilityModel model(sim.y, models::GammaPrior::Gaussian);

  SamplerConfig cfg;
  cfg.t_burn = 500.0;
  cfg.t_sample = 3000.0;
  cfg.n_samples = 3000;
  // lambda = 0.4: frequent refreshes keep trajectories out of the rho* -> -inf
  // density ridge where step sizes collapse (see the funnel note in README)
  cfg.lambda = 0.4;
  cfg.kernel = KernelChoice::RandomizedSparse;
  cfg.integrator.h_max = 0.5;
  cfg.seed = 555;
  const EnsembleResult result = run_ensemble(model, cfg, 6);
  if (result.any_failed) {
    os << "    trajectory failure\n";
    return false;
  }
  const Mat& draws = result.merged.draws;
  const Index rows = draws.rows();
  auto interval = [&](std::function<double(Index)> f) {
    std::vector<double> v(rows);
    for (Index r = 0; r < rows; ++r) v[r] = f(r);
    std::sort(v.begin(), v.end());
    const auto q = [&](double a) {
      return v[static_cast<size_t>(a * (rows - 1))];
    };
    return std::pair<double, double>(q(0.025), q(0.975));
  };
  const auto si_l = interval(
      [&](Index r) { return std::exp(0.5 * draws(r, model.idx_gamma_l())); });
  const auto si_h = interval(
      [&](Index r) { return std::exp(0.5 * draws(r, model.idx_gamma_h())); });
  const auto si_rho =
      interval([&](Index r) { return std::tanh(draws(r, model.idx_rho_star())); });
  long wall_ok = 0;
  for (Index r = 0; r < rows; ++r)
    wall_ok += draws(r, model.idx_gamma_h()) > draws(r, model.idx_gamma_l());
  os << "    sigma_l in [" << si_l.first << ", " << si_l.second << "] (truth 0.5); "
     << "sigma_h in [" << si_h.first << ", " << si_h.second << "] (truth 1.5); "
     << "rho in [" << si_rho.first << ", " << si_rho.second << "] (truth -0.3)\n";
  os << "    gamma_H > gamma_L in " << wall_ok << "/" << rows << " draws\n";
  const bool covers = si_l.first <= 0.5 && 0.5 <= si_l.second && si_h.first <= 1.5 &&
                      1.5 <= si_h.second && si_rho.first <= -0.3 && -0.3 <= si_rho.second;
  return covers && wall_ok == rows;
}

bool criterion_bnn(std::ostream& os) {
  Rng sim_rng(17);
  Vec delta(2), w(2);
  delta << 0.5, -0.5;
  w << 1.0, 1.0;
  Mat beta(2, 2);
  beta << 1.0, 0.0, -0.1, 1.0;
  const auto sim = models::simulate_bnn_data(100, 2, 2, 0.0, delta, beta, w, 0.1, sim_rng);
  const models::BnnModel model(sim.x, sim.y, 2);

  // gradient finite-difference suite at interior points
  Rng rng(3);
  double worst_fd = 0.0;
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 100; ++i) {
    Vec q = 0.5 * rng.normal_vec(model.dim());
    bool interior = true;
    for (int k = 0; k < model.constraint_count() && interior; ++k)
      if (std::abs(model.constraint_value(q, k)) < 1e-4) interior = false;
    if (!interior) continue;
    ++checked;
    const RegionMask region = model.classify(q);
    const Vec g = model.gradient(q, region);
    for (Index j = 0; j < model.dim(); ++j) {
      const double step = 1e-6 * (1.0 + std::abs(q[j]));
      Vec qp = q, qm = q;
      qp[j] += step;
      qm[j] -= step;
      const double fd =
          (model.log_density(qp, region) - model.log_density(qm, region)) / (2.0 * step);
      worst_fd = std::max(worst_fd, std::abs(fd - g[j]) /
                                        std::max({1.0, std::abs(fd), std::abs(g[j])}));
    }
  }

  SamplerConfig cfg;
  cfg.t_burn = 2000.0;
  cfg.t_sample = 10000.0;
  cfg.n_samples = 10000;
  // the long adaptive burn-in matters: with a short fixed-rate run, single
  // trajectories can linger in the underfit one-neuron mode (sigma ~ 0.22)
  cfg.lambda_mode = LambdaMode::Adaptive;
  cfg.adapt_m_s = true;
  cfg.integrator.h_max = 0.5;
  cfg.seed = 2025;
  const EnsembleResult result = run_ensemble(model, cfg, 4);
  if (result.any_failed) {
    os << "    trajectory failure\n";
    return false;
  }
  double sigma_mean = 0.0;
  for (Index r = 0; r < result.merged.draws.rows(); ++r)
    sigma_mean += std::exp(0.5 * result.merged.draws(r, model.idx_gamma()));
  sigma_mean /= static_cast<double>(result.merged.draws.rows());
  os << "    posterior mean sigma = " << sigma_mean
     << " (required in [0.08, 0.13]); worst gradient FD error " << worst_fd
     << " over " << checked << " interior points\n";
  return sigma_mean >= 0.08 && sigma_mean <= 0.13 && worst_fd < 1e-5 && checked == 100;
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str() && !sa.str().empty();
}

bool criterion_determinism(std::ostream& os) {
  const fs::path base = fs::temp_directory_path() / "grhmc_acceptance_det";
  fs::remove_all(base);
  fs::create_directories(base);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(base / name);
    out << content;
    return (base / name).string();
  };
  const std::string run_cfg = write("run.ini",
                                    "[model]\nname = circle\n[sampler]\nt_sample = 100\n"
                                    "n_samples = 100\nn_trajectories = 2\nlambda = 0.2\n"
                                    "seed = 9\nkernel = randomized\n");
  const std::string conv_cfg = write("conv.ini",
                                     "[convergence]\nc_values = 1\nt_values = 1\n"
                                     "h_grid = 0.2,0.1,0.05\nq0 = -0.5,1.0\np0 = 1.0,-0.25\n");
  const std::string vol_cfg = write("vol.ini",
                                    "[volatility]\nt_len = 10\ngamma_prior = gaussian\n"
                                    "[sampler]\nt_sample = 30\nn_samples = 30\nlambda = 0.2\n"
                                    "kernel = randomized-sparse\nseed = 3\n");
  const std::string bnn_cfg = write("bnn.ini",
                                    "[bnn]\nn = 15\nsigma = 0.3\n[sampler]\nt_sample = 20\n"
                                    "n_samples = 20\nlambda = 0.5\nseed = 4\n");
  Rng rng(55);
  std::ostringstream reg_data;
  reg_data << "x1,x2,y\n";
  for (int i = 0; i < 20; ++i) {
    const double x1 = rng.normal(), x2 = rng.normal();
    reg_data << x1 << ',' << x2 << ',' << 1.5 * x1 + 0.5 * rng.normal() << '\n';
  }
  const std::string reg_path = write("reg.csv", reg_data.str());
  const std::string reg_cfg = write("reg.ini",
                                    "[regression]\nresponse = y\np_zero_grid = 0.5\n"
                                    "[sampler]\nt_sample = 30\nn_samples = 30\nlambda = 0.5\n"
                                    "seed = 6\n");

  struct Job {
    std::string name;
    std::vector<std::string> args;
  };
  const std::vector<Job> jobs = {
      {"run", {"run", "--config", run_cfg}},
      {"convergence", {"convergence", "--config", conv_cfg}},
      {"regression", {"regression", "--config", reg_cfg, "--data", reg_path}},
      {"volatility", {"volatility", "--config", vol_cfg}},
      {"bnn", {"bnn", "--config", bnn_cfg}},
  };
  bool all_ok = true;
  for (const auto& job : jobs) {
    const fs::path o1 = base / (job.name + "_1"), o2 = base / (job.name + "_2");
    auto args1 = job.args, args2 = job.args;
    args1.insert(args1.end(), {"--out", o1.string(), "--jobs", "2"});
    args2.insert(args2.end(), {"--out", o2.string(), "--jobs", "1"});
    const int rc1 = cli::dispatch(args1);
    const int rc2 = cli::dispatch(args2);
    bool identical = rc1 == 0 && rc2 == 0;
    int n_files = 0;
    if (identical)
      for (const auto& entry : fs::directory_iterator(o1)) {
        ++n_files;
        identical = identical && files_identical(entry.path(), o2 / entry.path().filename());
      }
    os << "    " << job.name << ": " << (identical ? "byte-identical" : "MISMATCH") << " ("
       << n_files << " artifacts)\n";
    all_ok = all_ok && identical && n_files > 0;
  }
  fs::remove_all(base);
  return all_ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::ostream&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "convergence order on the gradient-jump target", criterion_convergence_order},
      {2, "naive-vs-event error ratio at c=10, h=0.125", criterion_error_ratio},
      {3, "max-model marginal KS against the quadrature CDF", criterion_max_marginal},
      {4, "circle target KS for both reflection kernels", criterion_circle_both_kernels},
      {5, "time reversibility and volume preservation", criterion_reversibility_volume},
      {6, "randomized reflection kernel invariance", criterion_randomized_invariance},
      {7, "censored-exponential lambda MLE", criterion_lambda_mle},
      {8, "spike-and-slab prior calculus and solver", criterion_spike_slab},
      {9, "regression shrinkage trend", criterion_regression_trend},
      {10, "volatility parameter recovery and hard wall", criterion_volatility_recovery},
      {11, "Bayesian network sigma recovery and gradients", criterion_bnn},
      {12, "byte-level determinism of every subcommand", criterion_determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    std::ostringstream detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "    exception: " << e.what() << '\n';
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs);
    std::fputs(detail.str().c_str(), stdout);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed) std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failed;
}
