#include "grhmc/models/bnn.hpp"

#include <cmath>

namespace grhmc::models {

BnnModel::BnnModel(Mat x, Vec y, int n_neurons)
    : x_(std::move(x)), y_(std::move(y)), n_(x_.rows()), p_(x_.cols()), k_(n_neurons) {
  if (n_ < 1 || p_ < 1 || k_ < 1) throw ContractError("BnnModel: need n, p, K >= 1");
  if (y_.size() != n_) throw ContractError("BnnModel: X rows and y length disagree");
}

double BnnModel::eta(const Vec& q, Index k, Index j) const {
  double v = q[idx_delta(k)];
  for (Index l = 0; l < p_; ++l) v += x_(j, l) * q[idx_beta(k, l)];
  return v;
}

double BnnModel::constraint_value(const Vec& q, int c) const {
  const Index k = c / n_, j = c % n_;
  return eta(q, k, j);
}

Vec BnnModel::constraint_gradient(const Vec& q, int c) const {
  const Index k = c / n_, j = c % n_;
  Vec g = Vec::Zero(q.size());
  g[idx_delta(k)] = 1.0;
  for (Index l = 0; l < p_; ++l) g[idx_beta(k, l)] = x_(j, l);
  return g;
}

double BnnModel::mean_at(const Vec& q, const RegionMask& region, Index j) const {
  double m = q[idx_alpha()];
  for (Index k = 0; k < k_; ++k)
    if (region.test(static_cast<int>(k * n_ + j)))
      m += std::exp(q[idx_wstar(k)]) * eta(q, k, j);
  return m;
}

double BnnModel::log_density(const Vec& q, const RegionMask& region) const {
  const double gamma = q[idx_gamma()];
  const double inv_var = std::exp(-gamma);
  double out = 0.0;
  for (Index j = 0; j < n_; ++j) {
    const double r = y_[j] - mean_at(q, region, j);
    out += -0.5 * (std::log(2.0 * M_PI) + gamma) - 0.5 * inv_var * r * r;
  }
  // sigma ~ Exp(1) expressed in gamma = log sigma^2
  out += 0.5 * gamma - std::exp(0.5 * gamma) - std::log(2.0);
  // remaining parameters: standard normal priors
  for (Index i = 1; i < dim(); ++i) out += -0.5 * q[i] * q[i] - 0.5 * std::log(2.0 * M_PI);
  return out;
}

Vec BnnModel::gradient(const Vec& q, const RegionMask& region) const {
  const double gamma = q[idx_gamma()];
  const double inv_var = std::exp(-gamma);
  Vec g = Vec::Zero(dim());
  double sum_r2 = 0.0;
  for (Index j = 0; j < n_; ++j) {
    const double r = y_[j] - mean_at(q, region, j);
    sum_r2 += r * r;
    const double score = inv_var * r;
    g[idx_alpha()] += score;
    for (Index k = 0; k < k_; ++k) {
      if (!region.test(static_cast<int>(k * n_ + j))) continue;
      const double w = std::exp(q[idx_wstar(k)]);
      const double e = eta(q, k, j);
      g[idx_wstar(k)] += score * w * e;
      g[idx_delta(k)] += score * w;
      for (Index l = 0; l < p_; ++l) g[idx_beta(k, l)] += score * w * x_(j, l);
    }
  }
  g[idx_gamma()] = -0.5 * static_cast<double>(n_) + 0.5 * inv_var * sum_r2 + 0.5 -
                   0.5 * std::exp(0.5 * gamma);
  for (Index i = 1; i < dim(); ++i) g[i] -= q[i];
  return g;
}

BnnSimulation simulate_bnn_data(Index n, Index p, int n_neurons, double alpha,
                                const Vec& delta, const Mat& beta, const Vec& w,
                                double sigma, Rng& rng) {
  if (delta.size() != n_neurons || w.size() != n_neurons || beta.rows() != n_neurons ||
      beta.cols() != p)
    throw ContractError("simulate_bnn_data: parameter shapes disagree");
  BnnSimulation sim;
  sim.x.resize(n, p);
  sim.y.resize(n);
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < p; ++l) sim.x(j, l) = rng.normal();
    double m = alpha;
    for (int k = 0; k < n_neurons; ++k) {
      const double e = delta[k] + sim.x.row(j).dot(beta.row(k));
      m += w[k] * std::max(0.0, e);
    }
    sim.y[j] = m + sigma * rng.normal();
  }
  return sim;
}

}  // namespace grhmc::models
