#pragma once

#include "grhmc/target_model.hpp"

namespace grhmc::models {

/// Standard normal target in d dimensions; single region, no constraints.
class GaussianModel final : public TargetModel {
 public:
  explicit GaussianModel(Index d) : d_(d) {
    if (d < 1) throw ContractError("GaussianModel: d must be >= 1");
  }

  Index dim() const override { return d_; }
  int constraint_count() const override { return 0; }
  BoundaryType boundary_type(int) const override {
    throw ContractError("GaussianModel has no constraints");
  }
  double constraint_value(const Vec&, int) const override {
    throw ContractError("GaussianModel has no constraints");
  }
  Vec constraint_gradient(const Vec&, int) const override {
    throw ContractError("GaussianModel has no constraints");
  }
  double log_density(const Vec& q, const RegionMask&) const override {
    return -0.5 * q.squaredNorm() - 0.5 * d_ * std::log(2.0 * M_PI);
  }
  Vec gradient(const Vec& q, const RegionMask&) const override { return -q; }
  std::string name() const override { return "gaussian"; }
  double region_count() const override { return 1.0; }

 private:
  Index d_;
};

}  // namespace grhmc::models
