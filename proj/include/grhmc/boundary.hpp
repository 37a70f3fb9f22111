#pragma once

#include "grhmc/phase.hpp"

namespace grhmc {

/// Local geometry of a boundary point: unit normal in standardized coordinates
/// oriented toward the higher-density side, and the log-density gap
/// delta_u = log pi_hi - log pi_lo >= 0.
struct BoundaryGeometry {
  Vec n_hat;
  double delta_u = 0.0;
  RegionMask region_lo, region_hi;
  bool positive_side_is_hi = true;  // does n_hat point toward c_k >= 0?
};

BoundaryGeometry boundary_geometry(const PhasePoint& state, int k, const TargetModel& model,
                                   const Standardizer& std_map);

/// Gradient switch at a gradient-jump boundary: position and momentum are kept,
/// only the region flips to the side the trajectory is entering.
PhasePoint gradient_switch(const PhasePoint& state, int k, const TargetModel& model,
                           const Standardizer& std_map);

struct MomentumTransition {
  Vec pbar;
  bool crossed = false;  // refraction (region changes) vs reflection
};

/// Deterministic reflection/refraction across a potential jump delta_u.
MomentumTransition deterministic_transition(const Vec& pbar, const BoundaryGeometry& geom);

/// Randomized reflection with explicit noise vector (pure, for testing).
Vec randomized_reflection_with_noise(const Vec& pbar, const BoundaryGeometry& geom,
                                     const Vec& noise, bool sparse);

/// Randomized reflection: normal component flipped exactly, components
/// orthogonal to the normal refreshed with standard Gaussians. sparse: only
/// coordinates with a non-zero normal component receive fresh noise.
Vec randomized_reflection(const Vec& pbar, const BoundaryGeometry& geom, Rng& rng,
                          bool sparse);

enum class KernelChoice { Deterministic, Randomized, RandomizedSparse };

/// Dispatch on the boundary type of constraint k; returns the post-event state
/// (region updated iff the trajectory crossed). `reflected` reports whether a
/// momentum reversal happened (drives the U-turn censoring reset).
PhasePoint apply_boundary(const PhasePoint& state, int k, const TargetModel& model,
                          const Standardizer& std_map, KernelChoice kernel, Rng& rng,
                          bool* reflected = nullptr);

}  // namespace grhmc
