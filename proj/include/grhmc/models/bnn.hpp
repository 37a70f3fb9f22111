#pragma once

#include "grhmc/target_model.hpp"

namespace grhmc::models {

/// One-hidden-layer ReLU network posterior. Parameter layout
/// q = (gamma, alpha, w*_1..w*_K, delta_1..delta_K, beta_1 (p), ..., beta_K (p)),
/// w_k = exp(w*_k) > 0, sigma^2 = e^gamma. Each (neuron k, observation j) pair
/// contributes a gradient-jump boundary eta_kj = delta_k + X_j' beta_k = 0.
class BnnModel final : public TargetModel {
 public:
  BnnModel(Mat x, Vec y, int n_neurons);

  Index dim() const override { return 2 + 2 * k_ + k_ * p_; }
  int constraint_count() const override { return static_cast<int>(k_ * n_); }
  BoundaryType boundary_type(int) const override { return BoundaryType::GradientJump; }
  double constraint_value(const Vec& q, int c) const override;
  Vec constraint_gradient(const Vec& q, int c) const override;
  double log_density(const Vec& q, const RegionMask& region) const override;
  Vec gradient(const Vec& q, const RegionMask& region) const override;
  std::string name() const override { return "bnn"; }

  int neurons() const { return static_cast<int>(k_); }
  Index idx_gamma() const { return 0; }
  Index idx_alpha() const { return 1; }
  Index idx_wstar(Index k) const { return 2 + k; }
  Index idx_delta(Index k) const { return 2 + k_ + k; }
  Index idx_beta(Index k, Index j) const { return 2 + 2 * k_ + k * p_ + j; }

  /// Network mean for observation j, ReLU activations gated by the region.
  double mean_at(const Vec& q, const RegionMask& region, Index j) const;

 private:
  double eta(const Vec& q, Index k, Index j) const;
  Mat x_;
  Vec y_;
  Index n_, p_, k_;
};

/// Simulated dataset drawn from the network with the given parameters.
struct BnnSimulation {
  Mat x;
  Vec y;
};
BnnSimulation simulate_bnn_data(Index n, Index p, int n_neurons, double alpha,
                                const Vec& delta, const Mat& beta, const Vec& w,
                                double sigma, Rng& rng);

}  // namespace grhmc::models
