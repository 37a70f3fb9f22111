#include "grhmc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "grhmc/diagnostics.hpp"
#include "grhmc/io/config.hpp"
#include "grhmc/io/csv.hpp"
#include "grhmc/models/bnn.hpp"
#include "grhmc/models/circle.hpp"
#include "grhmc/models/gaussian.hpp"
#include "grhmc/models/max_model.hpp"
#include "grhmc/models/spike_slab.hpp"
#include "grhmc/models/volatility.hpp"
#include "grhmc/sampler.hpp"

namespace grhmc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using io::Config;
using io::ConfigError;

constexpr const char* kVersion = "1.0.0";

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::string data_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
};

const std::map<std::string, std::vector<std::string>> kSamplerKeys = {
    {"sampler",
     {"t_burn", "t_sample", "n_samples", "n_trajectories", "lambda", "lambda_init",
      "lambda_min", "kernel", "seed", "adapt_m_s", "s_floor", "adapt_spacing"}},
    {"integrator",
     {"abs_tol", "rel_tol", "h_init", "h_max", "h_min", "safety", "growth_cap",
      "shrink_cap"}},
    {"output", {"dir", "thin"}},
};

std::map<std::string, std::vector<std::string>> allowed_with(
    std::map<std::string, std::vector<std::string>> extra) {
  auto merged = kSamplerKeys;
  for (auto& [k, v] : extra) merged[k] = std::move(v);
  return merged;
}

KernelChoice parse_kernel(const std::string& name) {
  if (name == "deterministic") return KernelChoice::Deterministic;
  if (name == "randomized") return KernelChoice::Randomized;
  if (name == "randomized-sparse") return KernelChoice::RandomizedSparse;
  throw ConfigError("unknown kernel '" + name +
                        "' (expected deterministic | randomized | randomized-sparse)",
                    0);
}

SamplerConfig sampler_from_config(const Config& cfg, const CommonFlags& flags) {
  SamplerConfig sc;
  sc.t_burn = cfg.get_double_or("sampler", "t_burn", 0.0);
  sc.t_sample = cfg.get_double_or("sampler", "t_sample", 1000.0);
  sc.n_samples = cfg.get_long_or("sampler", "n_samples", 1000);
  const std::string lam = cfg.get_or("sampler", "lambda", "0.2");
  if (lam == "adaptive") {
    sc.lambda_mode = LambdaMode::Adaptive;
    sc.lambda = cfg.get_double_or("sampler", "lambda_init", 0.2);
  } else {
    sc.lambda_mode = LambdaMode::Fixed;
    sc.lambda = cfg.get_double("sampler", "lambda");
  }
  sc.lambda_min = cfg.get_double_or("sampler", "lambda_min", 0.05);
  sc.kernel = parse_kernel(cfg.get_or("sampler", "kernel", "randomized"));
  sc.seed = flags.seed ? *flags.seed
                       : static_cast<std::uint64_t>(cfg.get_long_or("sampler", "seed", 0));
  sc.adapt_m_s = cfg.get_bool_or("sampler", "adapt_m_s", false);
  sc.s_floor = cfg.get_double_or("sampler", "s_floor", 1e-3);
  sc.adapt_spacing = cfg.get_double_or("sampler", "adapt_spacing", 1.0);

  sc.integrator.abs_tol = cfg.get_double_or("integrator", "abs_tol", 1e-4);
  sc.integrator.rel_tol = cfg.get_double_or("integrator", "rel_tol", 1e-4);
  sc.integrator.h_init = cfg.get_double_or("integrator", "h_init", 1e-2);
  sc.integrator.h_max = cfg.get_double_or("integrator", "h_max", 0.5);
  sc.integrator.h_min = cfg.get_double_or("integrator", "h_min", 1e-10);
  sc.integrator.safety = cfg.get_double_or("integrator", "safety", 0.9);
  sc.integrator.growth_cap = cfg.get_double_or("integrator", "growth_cap", 5.0);
  sc.integrator.shrink_cap = cfg.get_double_or("integrator", "shrink_cap", 0.2);
  sc.validate();
  return sc;
}

int n_trajectories(const Config& cfg) {
  const long n = cfg.get_long_or("sampler", "n_trajectories", 1);
  if (n < 1) throw ConfigError("n_trajectories must be >= 1", 0);
  return static_cast<int>(n);
}

void ensure_writable(const std::string& dir) {
  fs::create_directories(dir);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream f(probe);
  if (!f) throw ContractError("output dir '" + dir + "' is not writable");
  f.close();
  fs::remove(probe);
}

void write_samples_csv(const std::string& path, const Mat& draws, long thin) {
  std::vector<std::string> header;
  for (Index c = 0; c < draws.cols(); ++c) header.push_back("q" + std::to_string(c + 1));
  if (thin <= 1) {
    io::write_csv(path, header, draws);
    return;
  }
  const Index rows = (draws.rows() + thin - 1) / thin;
  Mat thinned(rows, draws.cols());
  Index at = 0;
  for (Index r = 0; r < draws.rows(); r += thin) thinned.row(at++) = draws.row(r);
  io::write_csv(path, header, thinned);
}

json stats_to_json(const TrajectoryStats& st) {
  json j;
  j["refreshes"] = st.refreshes;
  j["uturn_events"] = st.uturn_events;
  j["gradient_switches"] = st.gradient_switches;
  j["reflections"] = st.reflections;
  j["refractions"] = st.refractions;
  j["wall_reflections"] = st.wall_reflections;
  j["accepted_steps"] = st.accepted_steps;
  j["rejected_steps"] = st.rejected_steps;
  j["emitted"] = st.emitted;
  j["adapted_lambda"] = st.adapted_lambda;
  j["adapted_m"] = std::vector<double>(st.adapted_m.begin(), st.adapted_m.end());
  j["adapted_s"] = std::vector<double>(st.adapted_s.begin(), st.adapted_s.end());
  j["failed"] = st.failed;
  if (st.failed) j["error"] = st.error;
  return j;
}

void write_meta(const std::string& path, const std::string& command,
                const std::string& model, const SamplerConfig* sc,
                const std::vector<TrajectoryStats>* stats, json extra = json::object()) {
  json j = std::move(extra);
  j["version"] = kVersion;
  j["command"] = command;
  j["model"] = model;
  if (sc) {
    j["seed"] = sc->seed;
    j["t_burn"] = sc->t_burn;
    j["t_sample"] = sc->t_sample;
    j["n_samples"] = sc->n_samples;
    j["abs_tol"] = sc->integrator.abs_tol;
    j["rel_tol"] = sc->integrator.rel_tol;
  }
  if (stats) {
    json arr = json::array();
    for (const auto& st : *stats) arr.push_back(stats_to_json(st));
    j["trajectories"] = arr;
  }
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

struct Summary {
  double mean = 0, median = 0, sd = 0, q025 = 0, q975 = 0;
};

Summary summarize(Vec column) {
  Summary s;
  const Index n = column.size();
  s.mean = column.mean();
  s.sd = std::sqrt((column.array() - s.mean).square().sum() /
                   static_cast<double>(n - 1));
  std::sort(column.begin(), column.end());
  auto quantile = [&](double p) {
    const double idx = p * static_cast<double>(n - 1);
    const Index lo = static_cast<Index>(idx);
    const Index hi = std::min(lo + 1, n - 1);
    const double w = idx - static_cast<double>(lo);
    return (1.0 - w) * column[lo] + w * column[hi];
  };
  s.median = quantile(0.5);
  s.q025 = quantile(0.025);
  s.q975 = quantile(0.975);
  return s;
}

int report_failures(const EnsembleResult& result) {
  for (size_t i = 0; i < result.chains.size(); ++i) {
    const auto& st = result.chains[i].stats;
    if (st.size() == 1 && st[0].failed)
      std::cerr << "trajectory " << i << " failed: " << st[0].error << '\n';
  }
  return result.any_failed ? 1 : 0;
}

// ---------------------------------------------------------------------------

int cmd_run(const CommonFlags& flags) {
  const Config cfg = Config::parse_file(flags.config_path);
  cfg.validate_keys(allowed_with({{"model", {"name", "c", "d"}}}));
  const std::string name = cfg.get("model", "name");
  ModelPtr model;
  if (name == "max")
    model = std::make_shared<models::MaxModel>(cfg.get_double_or("model", "c", 1.0));
  else if (name == "circle")
    model = std::make_shared<models::CircleModel>();
  else if (name == "gaussian")
    model =
        std::make_shared<models::GaussianModel>(cfg.get_long_or("model", "d", 2));
  else
    throw ConfigError("unknown model name '" + name + "'", 0);

  const SamplerConfig sc = sampler_from_config(cfg, flags);
  const std::string dir = flags.out_dir.empty() ? cfg.get_or("output", "dir", "out")
                                                : flags.out_dir;
  ensure_writable(dir);
  const long thin = cfg.get_long_or("output", "thin", 1);

  const EnsembleResult result = run_ensemble(*model, sc, n_trajectories(cfg), flags.jobs);
  write_samples_csv((fs::path(dir) / "samples.csv").string(), result.merged.draws, thin);
  write_meta((fs::path(dir) / "meta.json").string(), "run", name, &sc,
             &result.merged.stats);
  return report_failures(result);
}

int cmd_convergence(const CommonFlags& flags) {
  const Config cfg = Config::parse_file(flags.config_path);
  cfg.validate_keys(
      {{"convergence", {"c_values", "t_values", "h_grid", "q0", "p0", "methods"}},
       {"output", {"dir", "thin"}}});
  const auto c_values = cfg.get_double_list("convergence", "c_values");
  const auto t_values = cfg.get_double_list("convergence", "t_values");
  if (c_values.size() != t_values.size())
    throw ConfigError("c_values and t_values must have equal length", 0);
  const auto h_grid = cfg.get_double_list("convergence", "h_grid");
  const auto q0 = cfg.get_double_list("convergence", "q0");
  const auto p0 = cfg.get_double_list("convergence", "p0");
  if (q0.size() != 2 || p0.size() != 2)
    throw ConfigError("q0 and p0 must be 2-vectors", 0);
  Vec z0(4);
  z0 << q0[0], q0[1], p0[0], p0[1];

  const std::string dir = flags.out_dir.empty() ? cfg.get_or("output", "dir", "out")
                                                : flags.out_dir;
  ensure_writable(dir);

  const std::vector<diag::Method> methods = {diag::Method::Leapfrog, diag::Method::NaiveRk,
                                             diag::Method::EventAware};
  json slopes = json::array();
  std::ofstream combined(fs::path(dir) / "convergence.csv");
  combined << "c,method,h,l2_error\n";
  for (size_t i = 0; i < c_values.size(); ++i) {
    const models::MaxModel model(c_values[i]);
    const auto table = diag::convergence_study(model, z0, t_values[i], h_grid, methods);
    std::ostringstream name;
    name << "convergence_c" << c_values[i] << ".csv";
    std::ofstream out(fs::path(dir) / name.str());
    out << "method,h,l2_error\n";
    for (const auto& row : table.rows) {
      const std::string line = diag::method_name(row.method) + "," +
                               io::format_double(row.h) + "," +
                               io::format_double(row.diverged ? std::nan("") : row.l2_error);
      out << line << '\n';
      combined << io::format_double(c_values[i]) << ',' << line << '\n';
    }
    for (const auto& s : table.slopes) {
      json j;
      j["c"] = c_values[i];
      j["method"] = diag::method_name(s.method);
      j["slope"] = s.fit.slope;
      j["slope_stderr"] = s.fit.stderr;
      slopes.push_back(j);
    }
  }
  combined.close();
  json extra;
  extra["slopes"] = slopes;
  write_meta((fs::path(dir) / "meta.json").string(), "convergence", "max", nullptr, nullptr,
             extra);
  return 0;
}

int cmd_regression(const CommonFlags& flags) {
  const Config cfg = Config::parse_file(flags.config_path);
  cfg.validate_keys(
      allowed_with({{"regression", {"response", "p_zero_grid", "var_nonzero"}}}));
  if (flags.data_path.empty())
    throw ConfigError("regression requires --data pointing at a CSV file", 0);
  const io::CsvTable table = io::read_csv(flags.data_path);
  const std::string response = cfg.get("regression", "response");
  const Index yc = table.column(response);
  const Index p = table.values.cols() - 1;
  if (p < 1) throw ConfigError("regression data needs at least one covariate", 0);
  Vec y = table.values.col(yc);
  Mat x(table.values.rows(), p);
  Index at = 0;
  for (Index c = 0; c < table.values.cols(); ++c)
    if (c != yc) x.col(at++) = table.values.col(c);
  const models::RegressionData data = models::RegressionData::from_raw(x, y);

  const auto p_zero_grid = cfg.get_double_list("regression", "p_zero_grid");
  const double var_nonzero = cfg.get_double_or("regression", "var_nonzero", 1.0);
  const SamplerConfig sc = sampler_from_config(cfg, flags);
  const int n_traj = n_trajectories(cfg);
  const std::string dir = flags.out_dir.empty() ? cfg.get_or("output", "dir", "out")
                                                : flags.out_dir;
  ensure_writable(dir);
  const long thin = cfg.get_long_or("output", "thin", 1);

  Mat zero_frac(static_cast<Index>(p_zero_grid.size()), p + 1);
  std::ofstream summaries(fs::path(dir) / "summaries.csv");
  summaries << "p_zero_prior,coefficient,mean,median,sd,q025,q975\n";
  int exit_code = 0;
  std::vector<TrajectoryStats> all_stats;
  for (size_t gi = 0; gi < p_zero_grid.size(); ++gi) {
    const auto [mu, rho] = models::solve_spike_slab_hyperparams(p_zero_grid[gi], var_nonzero);
    const models::RegressionModel model(data, mu, rho);
    SamplerConfig run_cfg = sc;
    run_cfg.seed = sc.seed + gi;  // independent streams per grid point
    const EnsembleResult result = run_ensemble(model, run_cfg, n_traj, flags.jobs);
    exit_code = std::max(exit_code, report_failures(result));
    for (const auto& st : result.merged.stats) all_stats.push_back(st);

    zero_frac(gi, 0) = p_zero_grid[gi];
    const Vec zf = models::posterior_zero_fraction(result.merged, data);
    zero_frac.row(gi).tail(p) = zf.transpose();

    // rescaled-coefficient summaries
    const Index n = result.merged.draws.rows();
    Mat beta_raw(n, p);
    for (Index r = 0; r < n; ++r) {
      Vec beta_s(p);
      for (Index i = 0; i < p; ++i)
        beta_s[i] = std::max(0.0, result.merged.draws(r, i)) -
                    std::max(0.0, result.merged.draws(r, p + i));
      beta_raw.row(r) = models::rescale_coefficients(beta_s, data).second.transpose();
    }
    for (Index i = 0; i < p; ++i) {
      const Summary s = summarize(beta_raw.col(i));
      summaries << io::format_double(p_zero_grid[gi]) << ",beta" << (i + 1) << ','
                << io::format_double(s.mean) << ',' << io::format_double(s.median) << ','
                << io::format_double(s.sd) << ',' << io::format_double(s.q025) << ','
                << io::format_double(s.q975) << '\n';
    }
    write_samples_csv(
        (fs::path(dir) / ("samples_pz" + std::to_string(gi) + ".csv")).string(),
        result.merged.draws, thin);
  }
  summaries.close();
  std::vector<std::string> zf_header = {"p_zero_prior"};
  for (Index i = 0; i < p; ++i) zf_header.push_back("beta" + std::to_string(i + 1));
  io::write_csv((fs::path(dir) / "zero_fractions.csv").string(), zf_header, zero_frac);
  write_meta((fs::path(dir) / "meta.json").string(), "regression", "regression", &sc,
             &all_stats);
  return exit_code;
}

int cmd_volatility(const CommonFlags& flags) {
  const Config cfg = Config::parse_file(flags.config_path);
  cfg.validate_keys(allowed_with(
      {{"volatility",
        {"t_len", "sigma_l", "sigma_h", "rho", "gamma_prior", "sim_seed", "response"}}}));
  Vec y;
  if (!flags.data_path.empty()) {
    const io::CsvTable table = io::read_csv(flags.data_path);
    y = table.values.col(table.column(cfg.get_or("volatility", "response", "y")));
  } else {
    models::VolatilityParams params;
    params.t_len = cfg.get_long_or("volatility", "t_len", 200);
    params.sigma_l = cfg.get_double_or("volatility", "sigma_l", 0.5);
    params.sigma_h = cfg.get_double_or("volatility", "sigma_h", 1.5);
    params.rho_corr = cfg.get_double_or("volatility", "rho", -0.3);
    Rng sim_rng(static_cast<std::uint64_t>(cfg.get_long_or("volatility", "sim_seed", 1)));
    y = models::simulate_volatility(params, sim_rng).y;
  }
  const std::string prior_name = cfg.get_or("volatility", "gamma_prior", "exponential");
  models::GammaPrior prior;
  if (prior_name == "exponential")
    prior = models::GammaPrior::Exponential;
  else if (prior_name == "gaussian")
    prior = models::GammaPrior::Gaussian;
  else
    throw ConfigError("gamma_prior must be exponential | gaussian", 0);
  const models::VolatilityModel model(y, prior);

  const SamplerConfig sc = sampler_from_config(cfg, flags);
  const std::string dir = flags.out_dir.empty() ? cfg.get_or("output", "dir", "out")
                                                : flags.out_dir;
  ensure_writable(dir);
  const long thin = cfg.get_long_or("output", "thin", 1);
  const EnsembleResult result = run_ensemble(model, sc, n_trajectories(cfg), flags.jobs);
  const int exit_code = report_failures(result);

  write_samples_csv((fs::path(dir) / "samples.csv").string(), result.merged.draws, thin);

  const Index t_len = model.t_len();
  const Index n = result.merged.draws.rows();
  Vec sig_l(n), sig_h(n), rho(n);
  for (Index r = 0; r < n; ++r) {
    sig_l[r] = std::exp(0.5 * result.merged.draws(r, model.idx_gamma_l()));
    sig_h[r] = std::exp(0.5 * result.merged.draws(r, model.idx_gamma_h()));
    rho[r] = std::tanh(result.merged.draws(r, model.idx_rho_star()));
  }
  std::ofstream summaries(fs::path(dir) / "summaries.csv");
  summaries << "parameter,mean,median,sd,q025,q975\n";
  const auto emit = [&](const std::string& name, const Vec& col) {
    const Summary s = summarize(col);
    summaries << name << ',' << io::format_double(s.mean) << ','
              << io::format_double(s.median) << ',' << io::format_double(s.sd) << ','
              << io::format_double(s.q025) << ',' << io::format_double(s.q975) << '\n';
  };
  emit("sigma_l", sig_l);
  emit("sigma_h", sig_h);
  emit("rho", rho);
  summaries.close();

  Mat prob(t_len, 2);
  for (Index t = 0; t < t_len; ++t) {
    prob(t, 0) = static_cast<double>(t + 1);
    prob(t, 1) =
        (result.merged.draws.col(t).array() > 0.0).cast<double>().sum() /
        static_cast<double>(n);
  }
  io::write_csv((fs::path(dir) / "state_prob.csv").string(), {"t", "p_high"}, prob);
  write_meta((fs::path(dir) / "meta.json").string(), "volatility", "volatility", &sc,
             &result.merged.stats);
  return exit_code;
}

int cmd_bnn(const CommonFlags& flags) {
  const Config cfg = Config::parse_file(flags.config_path);
  cfg.validate_keys(allowed_with({{"bnn", {"n", "sigma", "sim_seed"}}}));
  // the two-neuron, two-covariate generating network
  const Index n = cfg.get_long_or("bnn", "n", 100);
  const double sigma = cfg.get_double_or("bnn", "sigma", 0.1);
  Rng sim_rng(static_cast<std::uint64_t>(cfg.get_long_or("bnn", "sim_seed", 1)));
  Vec delta(2), w(2);
  delta << 0.5, -0.5;
  w << 1.0, 1.0;
  Mat beta(2, 2);
  beta << 1.0, 0.0, -0.1, 1.0;
  const auto sim = models::simulate_bnn_data(n, 2, 2, 0.0, delta, beta, w, sigma, sim_rng);
  const models::BnnModel model(sim.x, sim.y, 2);

  const SamplerConfig sc = sampler_from_config(cfg, flags);
  const std::string dir = flags.out_dir.empty() ? cfg.get_or("output", "dir", "out")
                                                : flags.out_dir;
  ensure_writable(dir);
  const long thin = cfg.get_long_or("output", "thin", 1);
  const EnsembleResult result = run_ensemble(model, sc, n_trajectories(cfg), flags.jobs);
  const int exit_code = report_failures(result);

  write_samples_csv((fs::path(dir) / "samples.csv").string(), result.merged.draws, thin);
  Vec sig(result.merged.draws.rows());
  for (Index r = 0; r < sig.size(); ++r)
    sig[r] = std::exp(0.5 * result.merged.draws(r, model.idx_gamma()));
  const Summary s = summarize(sig);
  std::ofstream summaries(fs::path(dir) / "summaries.csv");
  summaries << "parameter,mean,sd,q025,q975\n";
  summaries << "sigma," << io::format_double(s.mean) << ',' << io::format_double(s.sd)
            << ',' << io::format_double(s.q025) << ',' << io::format_double(s.q975)
            << '\n';
  summaries.close();
  write_meta((fs::path(dir) / "meta.json").string(), "bnn", "bnn", &sc,
             &result.merged.stats);
  return exit_code;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"GRHMC sampler for piecewise smooth targets"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "config file")->required();
    sub->add_option("--seed", flags.seed, "override [sampler] seed");
    sub->add_option("--jobs", flags.jobs, "parallel trajectories (default: cores)");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--data", flags.data_path, "input CSV (regression/volatility)");
  };
  auto* run = app.add_subcommand("run", "sample a builtin target");
  auto* conv = app.add_subcommand("convergence", "integrator order study");
  auto* reg = app.add_subcommand("regression", "spike-and-slab regression");
  auto* vol = app.add_subcommand("volatility", "regime-switching volatility");
  auto* bnn = app.add_subcommand("bnn", "ReLU Bayesian network");
  for (auto* sub : {run, conv, reg, vol, bnn}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(flags);
    if (conv->parsed()) return cmd_convergence(flags);
    if (reg->parsed()) return cmd_regression(flags);
    if (vol->parsed()) return cmd_volatility(flags);
    if (bnn->parsed()) return cmd_bnn(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace grhmc::cli
