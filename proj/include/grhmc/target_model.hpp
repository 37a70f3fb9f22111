#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "grhmc/common.hpp"

namespace grhmc {

enum class BoundaryType { GradientJump, DensityJump, HardWall };

/// Contract for a piecewise target. Regions are addressed by the sign pattern
/// of the constraints c_k(q) >= 0 (RegionMask). log_density and gradient must
/// evaluate the stated region's smooth extension anywhere close to it, since
/// an integration step freezes the region while its stages may poke across a
/// boundary. Immutable after construction; concurrent reads are safe.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual Index dim() const = 0;
  virtual int constraint_count() const = 0;
  virtual BoundaryType boundary_type(int k) const = 0;
  virtual double constraint_value(const Vec& q, int k) const = 0;
  virtual Vec constraint_gradient(const Vec& q, int k) const = 0;

  /// Log density kernel of the region's branch, with region-consistent
  /// additive constants (density-jump models report the true Delta U).
  virtual double log_density(const Vec& q, const RegionMask& region) const = 0;
  virtual Vec gradient(const Vec& q, const RegionMask& region) const = 0;

  virtual std::string name() const = 0;

  /// Nominal number of sign regions; informational only.
  virtual double region_count() const {
    return std::exp2(static_cast<double>(constraint_count()));
  }

  RegionMask classify(const Vec& q) const {
    RegionMask mask(constraint_count());
    for (int k = 0; k < constraint_count(); ++k)
      mask.set(k, constraint_value(q, k) >= 0.0);
    return mask;
  }
};

using ModelPtr = std::shared_ptr<const TargetModel>;

}  // namespace grhmc
