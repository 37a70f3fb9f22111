#include "grhmc/boundary.hpp"

#include <cmath>

namespace grhmc {

BoundaryGeometry boundary_geometry(const PhasePoint& state, int k, const TargetModel& model,
                                   const Standardizer& std_map) {
  const Vec q = unstandardize(state.qbar, std_map);
  // gradient of the standardized constraint: d/dqbar c_k(m + S qbar) = S grad c_k
  Vec n = std_map.scale().cwiseProduct(model.constraint_gradient(q, k));
  const double norm = n.norm();
  if (norm < 1e-14)
    throw IntegrationError("boundary_geometry: degenerate boundary (zero normal)");
  n /= norm;

  RegionMask pos = state.region, neg = state.region;
  pos.set(k, true);
  neg.set(k, false);
  const double log_pos = model.log_density(q, pos);
  const double log_neg = model.log_density(q, neg);

  BoundaryGeometry geom;
  geom.positive_side_is_hi = log_pos >= log_neg;
  if (geom.positive_side_is_hi) {
    geom.n_hat = n;  // toward c_k >= 0
    geom.region_hi = pos;
    geom.region_lo = neg;
  } else {
    geom.n_hat = -n;
    geom.region_hi = neg;
    geom.region_lo = pos;
  }
  geom.delta_u = std::abs(log_pos - log_neg);
  return geom;
}

PhasePoint gradient_switch(const PhasePoint& state, int k, const TargetModel& model,
                           const Standardizer& std_map) {
  if (model.boundary_type(k) != BoundaryType::GradientJump)
    throw ContractError("gradient_switch: constraint is not a gradient-jump boundary");
  const Vec q = unstandardize(state.qbar, std_map);
  const Vec grad_c = std_map.scale().cwiseProduct(model.constraint_gradient(q, k));
  PhasePoint next = state;
  // entering the side the velocity points into
  next.region.set(k, state.pbar.dot(grad_c) > 0.0);
  return next;
}

MomentumTransition deterministic_transition(const Vec& pbar, const BoundaryGeometry& geom) {
  const double a = pbar.dot(geom.n_hat);
  MomentumTransition out;
  if (a > 0.0) {
    // entering the higher-density region: gain normal momentum
    out.pbar = pbar + (std::sqrt(a * a + 2.0 * geom.delta_u) - a) * geom.n_hat;
    out.crossed = true;
  } else if (a * a > 2.0 * geom.delta_u) {
    // enough normal energy to climb into the lower-density region
    out.pbar = pbar + (-std::sqrt(a * a - 2.0 * geom.delta_u) - a) * geom.n_hat;
    out.crossed = true;
  } else {
    // reflection (the exact tie a^2 == 2 delta_u lands here)
    out.pbar = pbar - 2.0 * a * geom.n_hat;
    out.crossed = false;
  }
  return out;
}

Vec randomized_reflection_with_noise(const Vec& pbar, const BoundaryGeometry& geom,
                                     const Vec& noise, bool sparse) {
  Vec x = noise;
  if (sparse)
    for (Index i = 0; i < x.size(); ++i)
      if (geom.n_hat[i] == 0.0) x[i] = pbar[i];
  return x - ((pbar + x).dot(geom.n_hat)) * geom.n_hat;
}

Vec randomized_reflection(const Vec& pbar, const BoundaryGeometry& geom, Rng& rng,
                          bool sparse) {
  return randomized_reflection_with_noise(pbar, geom, rng.normal_vec(pbar.size()), sparse);
}

PhasePoint apply_boundary(const PhasePoint& state, int k, const TargetModel& model,
                          const Standardizer& std_map, KernelChoice kernel, Rng& rng,
                          bool* reflected) {
  if (reflected) *reflected = false;
  const BoundaryType type = model.boundary_type(k);
  if (type == BoundaryType::GradientJump) return gradient_switch(state, k, model, std_map);

  const BoundaryGeometry geom = boundary_geometry(state, k, model, std_map);
  PhasePoint next = state;
  const double a = state.pbar.dot(geom.n_hat);

  const bool wall = type == BoundaryType::HardWall;
  const bool reflect = wall || !(a > 0.0 || a * a > 2.0 * geom.delta_u);
  if (reflect) {
    if (kernel == KernelChoice::Deterministic)
      next.pbar = state.pbar - 2.0 * a * geom.n_hat;
    else
      next.pbar = randomized_reflection(state.pbar, geom, rng,
                                        kernel == KernelChoice::RandomizedSparse);
    if (reflected) *reflected = true;
    return next;  // region unchanged
  }

  const MomentumTransition tr = deterministic_transition(state.pbar, geom);
  next.pbar = tr.pbar;
  // crossing: the new side is the one the pre-event velocity points into
  const bool entering_positive = geom.positive_side_is_hi ? (a > 0.0) : (a < 0.0);
  next.region.set(k, entering_positive);
  return next;
}

}  // namespace grhmc
