#pragma once

#include "grhmc/sampler.hpp"
#include "grhmc/target_model.hpp"

namespace grhmc::models {

/// Prior moments of beta_i = max(0, beta+) - max(0, beta-) with independent
/// N(mu, rho^2) components.
struct SpikeSlabPrior {
  double mu = 0.0;
  double rho = 1.0;
  double mu1_star = 0.0;     // E max(0, beta+)
  double mu2_star = 0.0;     // E max(0, beta+)^2
  double rho_star_sq = 0.0;  // Var max(0, beta+)
  double c_incl = 0.0;       // P(beta != 0)
};

SpikeSlabPrior spike_slab_prior(double mu, double rho);

struct SpikeSlabStats {
  double p_zero = 0.0;
  double var_beta = 0.0;
  double var_beta_nonzero = 0.0;
};

SpikeSlabStats spike_slab_stats(double mu, double rho);

/// Invert (P(beta=0), Var(beta | beta != 0)) for (mu, rho): the zero
/// probability pins r = mu/rho through the normal quantile, then rho scales
/// out of the conditional variance quadratically.
std::pair<double, double> solve_spike_slab_hyperparams(double p_zero_target,
                                                       double var_nonzero_target);

/// Centered/scaled design with the statistics needed to map coefficients back
/// to the original scale.
struct RegressionData {
  Mat x;  // centered and scaled, n x p
  Vec y;  // centered and scaled, n
  Vec x_mean, x_sd;
  double y_mean = 0.0;
  double y_sd = 1.0;

  static RegressionData from_raw(const Mat& x_raw, const Vec& y_raw);
};

/// Posterior of (beta+, beta-, gamma) for Y ~ N(X beta, e^gamma I) with the
/// spike-and-slab prior; 2p coordinate gradient-jump boundaries.
/// use_likelihood = false drops the data terms (prior-only sanity runs).
class RegressionModel final : public TargetModel {
 public:
  RegressionModel(RegressionData data, double mu, double rho, bool use_likelihood = true);

  Index dim() const override { return 2 * p_ + 1; }
  int constraint_count() const override { return static_cast<int>(2 * p_); }
  BoundaryType boundary_type(int) const override { return BoundaryType::GradientJump; }
  double constraint_value(const Vec& q, int k) const override { return q[k]; }
  Vec constraint_gradient(const Vec& q, int k) const override;
  double log_density(const Vec& q, const RegionMask& region) const override;
  Vec gradient(const Vec& q, const RegionMask& region) const override;
  std::string name() const override { return "regression"; }

  const RegressionData& data() const { return data_; }
  Index n_covariates() const { return p_; }

  /// beta_i in the scaled model from a draw's sign pattern.
  Vec active_beta(const Vec& q) const;

 private:
  RegressionData data_;
  Index n_, p_;
  double mu_, rho_;
  bool use_likelihood_ = true;
};

/// Fraction of draws with beta_i exactly zero (beta+ <= 0 and beta- <= 0).
Vec posterior_zero_fraction(const SampleChain& chain, const RegressionData& data);

/// Scaled-model coefficients mapped to the original scale, with intercept.
std::pair<double, Vec> rescale_coefficients(const Vec& beta_scaled,
                                            const RegressionData& data);

}  // namespace grhmc::models
