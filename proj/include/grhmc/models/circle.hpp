#pragma once

#include "grhmc/math.hpp"
#include "grhmc/target_model.hpp"

namespace grhmc::models {

/// Piecewise smooth 2-d target: N(0, I) inside the unit circle, the tail-mass
/// matched wide Gaussian (c1/c2) N(0, 4I) outside. The density jumps by a
/// factor of 4 on the circle. Region bit 0 is the outside (|q|^2 - 1 >= 0).
class CircleModel final : public TargetModel {
 public:
  Index dim() const override { return 2; }
  int constraint_count() const override { return 1; }
  BoundaryType boundary_type(int) const override { return BoundaryType::DensityJump; }
  double constraint_value(const Vec& q, int) const override { return q.squaredNorm() - 1.0; }
  Vec constraint_gradient(const Vec& q, int) const override { return 2.0 * q; }

  double log_density(const Vec& q, const RegionMask& region) const override {
    const double r2 = q.squaredNorm();
    if (region.test(0))  // outside: (c1/c2) N(q | 0, 4 I2)
      return kLogRatio - std::log(8.0 * M_PI) - r2 / 8.0;
    return -std::log(2.0 * M_PI) - 0.5 * r2;
  }

  Vec gradient(const Vec& q, const RegionMask& region) const override {
    return region.test(0) ? Vec(-0.25 * q) : Vec(-q);
  }

  std::string name() const override { return "circle"; }

  // c1 = exp(-1/2), c2 = exp(-1/8): Gaussian mass outside the unit circle
  static constexpr double kLogRatio = -0.5 + 0.125;

 private:
};

/// Closed-form marginal density of q1 (and of q2, by symmetry).
inline double circle_marginal_pdf(double q1) {
  const double ratio = std::exp(CircleModel::kLogRatio);
  const double wide = normal_pdf(q1 / 2.0) / 2.0;  // N(q1 | 0, 4)
  if (std::abs(q1) >= 1.0) return ratio * wide;
  const double w = std::sqrt(1.0 - q1 * q1);
  return 2.0 * ratio * (1.0 - normal_cdf(w / 2.0)) * wide +
         normal_pdf(q1) * (2.0 * normal_cdf(w) - 1.0);
}

}  // namespace grhmc::models
