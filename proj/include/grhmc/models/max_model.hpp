#pragma once

#include "grhmc/math.hpp"
#include "grhmc/target_model.hpp"

namespace grhmc::models {

/// Motivating 2-d target: q1 ~ N(0,1), q2 | q1 ~ N(max(0, c*q1), 1). The mean
/// kink makes the log-density gradient jump across q1 = 0; c sets the jump
/// size. Region bit 0 is the q1 >= 0 side.
class MaxModel final : public TargetModel {
 public:
  explicit MaxModel(double c) : c_(c) {
    if (!(c > 0.0)) throw ContractError("MaxModel: c must be > 0");
  }

  double c() const { return c_; }
  Index dim() const override { return 2; }
  int constraint_count() const override { return 1; }
  BoundaryType boundary_type(int) const override { return BoundaryType::GradientJump; }
  double constraint_value(const Vec& q, int) const override { return q[0]; }
  Vec constraint_gradient(const Vec&, int) const override {
    return (Vec(2) << 1.0, 0.0).finished();
  }

  double log_density(const Vec& q, const RegionMask& region) const override {
    const double mean = region.test(0) ? c_ * q[0] : 0.0;
    const double r = q[1] - mean;
    return -0.5 * q[0] * q[0] - 0.5 * r * r - std::log(2.0 * M_PI);
  }

  Vec gradient(const Vec& q, const RegionMask& region) const override {
    Vec g(2);
    if (region.test(0)) {
      const double r = q[1] - c_ * q[0];
      g[0] = -q[0] + c_ * r;
      g[1] = -r;
    } else {
      g[0] = -q[0];
      g[1] = -q[1];
    }
    return g;
  }

  std::string name() const override { return "max"; }

 private:
  double c_;
};

/// Closed-form marginal PDF of q2 for c = 1.
inline double max_model_marginal_pdf(double q2) {
  return 0.5 * (normal_pdf(q2) +
                M_SQRT2 * normal_cdf(q2 * M_SQRT1_2) * normal_pdf(q2 * M_SQRT1_2));
}

}  // namespace grhmc::models
