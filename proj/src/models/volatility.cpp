#include "grhmc/models/volatility.hpp"

#include <cmath>

namespace grhmc::models {

VolatilitySimulation simulate_volatility(const VolatilityParams& params, Rng& rng) {
  params.validate();
  VolatilitySimulation sim;
  sim.y.resize(params.t_len);
  sim.z.resize(params.t_len);
  const double rho = params.rho_corr;
  const double tangent_sd = std::sqrt(1.0 - rho * rho);
  double z_prev = 0.0;  // Z_0 = 0 fixed
  for (Index t = 0; t < params.t_len; ++t) {
    const double eta = rng.normal();
    const double eps = rho * eta + tangent_sd * rng.normal();
    const double z = z_prev + eta;
    const double sigma = z > 0.0 ? params.sigma_h : params.sigma_l;
    sim.z[t] = z;
    sim.y[t] = sigma * eps;
    z_prev = z;
  }
  return sim;
}

VolatilityModel::VolatilityModel(Vec y, GammaPrior gamma_prior)
    : y_(std::move(y)), t_(y_.size()), gamma_prior_(gamma_prior) {
  if (t_ < 2) throw ContractError("VolatilityModel: need T >= 2");
  if (!y_.allFinite()) throw ContractError("VolatilityModel: non-finite observation");
}

int VolatilityModel::constraint_count() const {
  return static_cast<int>(t_) + (gamma_prior_ == GammaPrior::Exponential ? 3 : 1);
}

BoundaryType VolatilityModel::boundary_type(int k) const {
  return k < t_ ? BoundaryType::DensityJump : BoundaryType::HardWall;
}

double VolatilityModel::constraint_value(const Vec& q, int k) const {
  if (k < t_) return q[k];                                     // Z_t
  if (k == t_) return q[idx_gamma_h()] - q[idx_gamma_l()];     // gamma_H >= gamma_L
  if (k == t_ + 1) return q[idx_gamma_l()];                    // gamma_L >= 0
  return q[idx_gamma_h()];                                     // gamma_H >= 0
}

Vec VolatilityModel::constraint_gradient(const Vec& q, int k) const {
  Vec g = Vec::Zero(q.size());
  if (k < t_) {
    g[k] = 1.0;
  } else if (k == static_cast<int>(t_)) {
    g[idx_gamma_h()] = 1.0;
    g[idx_gamma_l()] = -1.0;
  } else if (k == static_cast<int>(t_) + 1) {
    g[idx_gamma_l()] = 1.0;
  } else {
    g[idx_gamma_h()] = 1.0;
  }
  return g;
}

double VolatilityModel::log_density(const Vec& q, const RegionMask& region) const {
  const double rho_star = q[idx_rho_star()];
  const double rho = std::tanh(rho_star);
  const double sech = 1.0 / std::cosh(rho_star);
  const double one_m_rho2 = sech * sech;  // 1 - tanh^2, cancellation-free
  const double gamma_l = q[idx_gamma_l()];
  const double gamma_h = q[idx_gamma_h()];

  double out = 0.0;
  double z_prev = 0.0;
  for (Index t = 0; t < t_; ++t) {
    const double e = q[t] - z_prev;
    const double gamma = region.test(static_cast<int>(t)) ? gamma_h : gamma_l;
    const double u = y_[t] * std::exp(-0.5 * gamma);
    const double v = u - rho * e;
    out += -std::log(2.0 * M_PI) - 0.5 * gamma - 0.5 * std::log(one_m_rho2) -
           0.5 * v * v / one_m_rho2 - 0.5 * e * e;
    z_prev = q[t];
  }
  // rho ~ scaled Beta(2,2) on (-1,1) through rho = tanh(rho*)
  out += std::log(0.75) + 2.0 * std::log(one_m_rho2);
  if (gamma_prior_ == GammaPrior::Exponential) {
    out += -gamma_l;                        // Exp(1), support via the wall
    out += std::log(0.5) - 0.5 * gamma_h;   // Exp(0.5)
  } else {
    out += -0.5 * gamma_l * gamma_l - 0.5 * gamma_h * gamma_h - std::log(2.0 * M_PI);
  }
  return out;
}

Vec VolatilityModel::gradient(const Vec& q, const RegionMask& region) const {
  const double rho_star = q[idx_rho_star()];
  const double rho = std::tanh(rho_star);
  const double sech = 1.0 / std::cosh(rho_star);
  const double one_m_rho2 = sech * sech;
  const double gamma_l = q[idx_gamma_l()];
  const double gamma_h = q[idx_gamma_h()];

  Vec g = Vec::Zero(dim());
  double z_prev = 0.0;
  double d_rho = 0.0;  // d log-lik / d rho
  for (Index t = 0; t < t_; ++t) {
    const double e = q[t] - z_prev;
    const bool high = region.test(static_cast<int>(t));
    const double gamma = high ? gamma_h : gamma_l;
    const double u = y_[t] * std::exp(-0.5 * gamma);
    const double v = u - rho * e;
    // observation + random-walk terms through e = Z_t - Z_{t-1}
    const double de = rho * v / one_m_rho2 - e;
    g[t] += de;
    if (t > 0) g[t - 1] -= de;
    d_rho += e * v / one_m_rho2 - rho * v * v / (one_m_rho2 * one_m_rho2) +
             rho / one_m_rho2;
    const double dgamma = -0.5 + 0.5 * u * v / one_m_rho2;
    g[high ? idx_gamma_h() : idx_gamma_l()] += dgamma;
    z_prev = q[t];
  }
  // chain rule to rho*, plus the transformed Beta(2,2) prior
  g[idx_rho_star()] = d_rho * one_m_rho2 - 4.0 * rho;
  if (gamma_prior_ == GammaPrior::Exponential) {
    g[idx_gamma_l()] += -1.0;
    g[idx_gamma_h()] += -0.5;
  } else {
    g[idx_gamma_l()] += -gamma_l;
    g[idx_gamma_h()] += -gamma_h;
  }
  return g;
}

}  // namespace grhmc::models
