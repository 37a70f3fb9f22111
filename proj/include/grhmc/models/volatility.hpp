#pragma once

#include "grhmc/target_model.hpp"

namespace grhmc::models {

enum class GammaPrior { Exponential, Gaussian };

struct VolatilityParams {
  double sigma_l = 0.5;
  double sigma_h = 1.5;
  double rho_corr = -0.3;
  Index t_len = 200;

  void validate() const {
    if (!(sigma_l > 0.0 && sigma_h > sigma_l))
      throw ContractError("VolatilityParams: need 0 < sigma_l < sigma_h");
    if (!(rho_corr > -1.0 && rho_corr < 1.0))
      throw ContractError("VolatilityParams: rho must be in (-1, 1)");
    if (t_len < 2) throw ContractError("VolatilityParams: t_len must be >= 2");
  }
};

struct VolatilitySimulation {
  Vec y;
  Vec z;
};

/// Forward-simulate the two-regime random walk volatility model.
VolatilitySimulation simulate_volatility(const VolatilityParams& params, Rng& rng);

/// Posterior of q = (Z_1..Z_T, rho*, gamma_L, gamma_H) given observations Y.
/// Each Z_t = 0 is a density-jump boundary (the observation variance switches);
/// gamma_H >= gamma_L is a hard wall, plus gamma >= 0 walls under the literal
/// exponential priors.
class VolatilityModel final : public TargetModel {
 public:
  VolatilityModel(Vec y, GammaPrior gamma_prior = GammaPrior::Exponential);

  Index dim() const override { return t_ + 3; }
  int constraint_count() const override;
  BoundaryType boundary_type(int k) const override;
  double constraint_value(const Vec& q, int k) const override;
  Vec constraint_gradient(const Vec& q, int k) const override;
  double log_density(const Vec& q, const RegionMask& region) const override;
  Vec gradient(const Vec& q, const RegionMask& region) const override;
  std::string name() const override { return "volatility"; }

  Index t_len() const { return t_; }
  Index idx_z(Index t) const { return t; }  // t in [0, T)
  Index idx_rho_star() const { return t_; }
  Index idx_gamma_l() const { return t_ + 1; }
  Index idx_gamma_h() const { return t_ + 2; }
  GammaPrior gamma_prior() const { return gamma_prior_; }

 private:
  Vec y_;
  Index t_;
  GammaPrior gamma_prior_;
};

}  // namespace grhmc::models
