#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grhmc/diagnostics.hpp"
#include "grhmc/math.hpp"
#include "grhmc/models/circle.hpp"
#include "grhmc/models/gaussian.hpp"
#include "grhmc/models/max_model.hpp"
#include "grhmc/models/volatility.hpp"
#include "grhmc/sampler.hpp"
#include "test_helpers.hpp"

using namespace grhmc;

namespace {

SamplerConfig gaussian_config() {
  SamplerConfig cfg;
  cfg.t_sample = 10000.0;
  cfg.n_samples = 10000;
  cfg.lambda = 0.2;
  cfg.seed = 99;
  cfg.integrator.h_max = 0.5;
  return cfg;
}

/// Uniform density on the unit disc enforced by a hard wall; zero outside.
class DiscModel final : public TargetModel {
 public:
  Index dim() const override { return 2; }
  int constraint_count() const override { return 1; }
  BoundaryType boundary_type(int) const override { return BoundaryType::HardWall; }
  double constraint_value(const Vec& q, int) const override {
    return 1.0 - q.squaredNorm();
  }
  Vec constraint_gradient(const Vec& q, int) const override { return -2.0 * q; }
  double log_density(const Vec& q, const RegionMask& region) const override {
    if (!region.test(0) && q.squaredNorm() > 1.0)
      return -std::numeric_limits<double>::infinity();
    return 0.0;
  }
  Vec gradient(const Vec&, const RegionMask&) const override { return Vec::Zero(2); }
  std::string name() const override { return "disc"; }
};

}  // namespace

TEST_CASE("gaussian target: first and second moments recovered") {
  const models::GaussianModel model(2);
  SamplerConfig cfg = gaussian_config();
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  REQUIRE(chain.draws.rows() == cfg.n_samples);
  for (Index c = 0; c < 2; ++c) {
    const double mean = chain.draws.col(c).mean();
    const double var =
        (chain.draws.col(c).array() - mean).square().sum() / (cfg.n_samples - 1.0);
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.05);
  }
}

TEST_CASE("gaussian stationarity: per-coordinate KS on 1e4 thinned draws") {
  const models::GaussianModel model(2);
  SamplerConfig cfg = gaussian_config();
  cfg.t_sample = 100000.0;
  cfg.n_samples = 100000;
  cfg.seed = 17;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  for (Index c = 0; c < 2; ++c) {
    const auto sorted = testing::sorted_column(chain.draws, c, 10);
    REQUIRE(sorted.size() == 10000);
    const double ks = diag::ks_statistic(sorted, [](double x) { return normal_cdf(x); });
    CHECK(ks < 0.02);
  }
}

TEST_CASE("n_samples = 1 emits exactly once at t = spacing") {
  const models::GaussianModel model(1);
  SamplerConfig cfg;
  cfg.t_sample = 3.0;
  cfg.n_samples = 1;
  cfg.lambda = 0.2;
  cfg.seed = 5;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  CHECK(chain.draws.rows() == 1);
  CHECK(chain.stats[0].emitted == 1);
  CHECK(cfg.spacing() == 3.0);
}

TEST_CASE("identical seeds give bit-identical chains") {
  const models::CircleModel model;
  SamplerConfig cfg;
  cfg.t_sample = 500.0;
  cfg.n_samples = 500;
  cfg.lambda = 0.2;
  cfg.seed = 123;
  cfg.kernel = KernelChoice::Randomized;
  cfg.integrator.h_max = 0.5;
  Rng a(cfg.seed), b(cfg.seed);
  const SampleChain c1 = simulate_trajectory(model, cfg, a);
  const SampleChain c2 = simulate_trajectory(model, cfg, b);
  REQUIRE(c1.draws.rows() == c2.draws.rows());
  CHECK((c1.draws - c2.draws).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ensemble merge: order, shape, determinism") {
  const models::GaussianModel model(2);
  SamplerConfig cfg;
  cfg.t_sample = 100.0;
  cfg.n_samples = 100;
  cfg.lambda = 0.3;
  cfg.seed = 7;
  cfg.integrator.h_max = 0.5;

  const EnsembleResult single = run_ensemble(model, cfg, 1, 1);
  CHECK(single.merged.draws == single.chains[0].draws);

  const EnsembleResult multi = run_ensemble(model, cfg, 3, 3);
  CHECK(multi.merged.draws.rows() == 300);
  CHECK(multi.merged.draws.topRows(100) == multi.chains[0].draws);
  CHECK(multi.merged.draws.middleRows(100, 100) == multi.chains[1].draws);
  CHECK_FALSE(multi.chains[0].draws == multi.chains[1].draws);

  // job count must not change the merged output
  const EnsembleResult serial = run_ensemble(model, cfg, 3, 1);
  CHECK((serial.merged.draws - multi.merged.draws).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("circle event accounting: hits observed, kinds add up") {
  const models::CircleModel model;
  SamplerConfig cfg;
  cfg.t_sample = 10000.0;
  cfg.n_samples = 10000;
  cfg.lambda = 0.2;
  cfg.seed = 2;
  cfg.kernel = KernelChoice::Randomized;
  cfg.integrator.h_max = 0.5;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  const auto& st = chain.stats[0];
  CHECK(st.reflections + st.refractions > 0);
  CHECK(st.gradient_switches == 0);
  CHECK(st.wall_reflections == 0);
  CHECK(chain.draws.allFinite());
}

TEST_CASE("max-model desk-scale marginal sanity") {
  const models::MaxModel model(1.0);
  SamplerConfig cfg;
  cfg.t_burn = 500.0;
  cfg.t_sample = 5000.0;
  cfg.n_samples = 5000;
  cfg.lambda_mode = LambdaMode::Adaptive;
  cfg.adapt_m_s = true;
  cfg.seed = 31;
  cfg.integrator.h_max = 0.5;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  const TabulatedCdf cdf([](double x) { return models::max_model_marginal_pdf(x); },
                         -12.0, 12.0, 40000);
  const auto sorted = testing::sorted_column(chain.draws, 1);
  CHECK(diag::ks_statistic(sorted, cdf) < 0.04);
  CHECK(chain.stats[0].adapted_lambda >= cfg.lambda_min);
  CHECK(chain.stats[0].gradient_switches > 0);
}

TEST_CASE("adaptation freezes at the end of burn-in") {
  const models::MaxModel model(1.0);
  SamplerConfig cfg;
  cfg.t_burn = 200.0;
  cfg.t_sample = 200.0;
  cfg.n_samples = 200;
  cfg.lambda_mode = LambdaMode::Adaptive;
  cfg.adapt_m_s = true;
  cfg.seed = 4;
  cfg.integrator.h_max = 0.5;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  const auto& st = chain.stats[0];
  CHECK(st.adapted_lambda == st.lambda_at_end);
  CHECK(st.adapted_m == st.m_at_end);
  CHECK(st.adapted_s == st.s_at_end);
  CHECK((st.adapted_s.array() > 0.0).all());
}

TEST_CASE("hard wall keeps every draw inside the disc") {
  const DiscModel model;
  SamplerConfig cfg;
  cfg.t_sample = 2000.0;
  cfg.n_samples = 2000;
  cfg.lambda = 0.5;
  cfg.seed = 6;
  cfg.kernel = KernelChoice::Randomized;
  cfg.integrator.h_max = 0.25;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  CHECK(chain.stats[0].wall_reflections > 0);
  for (Index r = 0; r < chain.draws.rows(); ++r)
    CHECK(chain.draws.row(r).squaredNorm() <= 1.0 + 1e-9);
  // uniform on the disc: |q|^2 ~ U(0,1)
  std::vector<double> r2;
  for (Index r = 0; r < chain.draws.rows(); ++r)
    r2.push_back(chain.draws.row(r).squaredNorm());
  std::sort(r2.begin(), r2.end());
  CHECK(diag::ks_statistic(r2, [](double x) {
          return std::clamp(x, 0.0, 1.0);
        }) < 0.05);
}

TEST_CASE("volatility walls under the literal exponential priors") {
  Rng sim_rng(3);
  models::VolatilityParams params;
  params.t_len = 20;
  const auto sim = models::simulate_volatility(params, sim_rng);
  const models::VolatilityModel model(sim.y);  // exponential priors + gamma >= 0 walls
  SamplerConfig cfg;
  cfg.t_sample = 300.0;
  cfg.n_samples = 300;
  cfg.lambda = 0.4;
  cfg.kernel = KernelChoice::RandomizedSparse;
  cfg.integrator.h_max = 0.5;
  cfg.seed = 12;
  Rng rng(cfg.seed);
  const SampleChain chain = simulate_trajectory(model, cfg, rng);
  for (Index r = 0; r < chain.draws.rows(); ++r) {
    const double gl = chain.draws(r, model.idx_gamma_l());
    const double gh = chain.draws(r, model.idx_gamma_h());
    CHECK(gl >= -1e-9);
    CHECK(gh >= gl - 1e-9);
  }
  CHECK(chain.stats[0].wall_reflections > 0);
}

TEST_CASE("initial point in a zero-density region raises") {
  const DiscModel model;
  SamplerConfig cfg;
  cfg.t_sample = 10.0;
  cfg.n_samples = 10;
  cfg.lambda = 0.5;
  cfg.qbar0 = (Vec(2) << 5.0, 0.0).finished();  // outside the wall
  Rng rng(1);
  CHECK_THROWS_AS((void)simulate_trajectory(model, cfg, rng), ContractError);
}

TEST_CASE("failed trajectories are reported per trajectory and merge proceeds") {
  // lambda <= 0 trips the refresh scheduler inside every trajectory
  const models::GaussianModel model(1);
  SamplerConfig cfg;
  cfg.t_sample = 10.0;
  cfg.n_samples = 10;
  cfg.lambda = 0.2;
  cfg.seed = 3;
  cfg.qbar0 = (Vec(1) << std::nan("")).finished();
  const EnsembleResult result = run_ensemble(model, cfg, 2, 1);
  CHECK(result.any_failed);
  CHECK(result.merged.draws.rows() == 0);
  REQUIRE(result.chains.size() == 2);
  CHECK(result.chains[0].stats[0].failed);
  CHECK_FALSE(result.chains[0].stats[0].error.empty());
}
