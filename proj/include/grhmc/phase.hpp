#pragma once

#include "grhmc/standardizer.hpp"
#include "grhmc/target_model.hpp"

namespace grhmc {

/// State of the process: standardized position/momentum plus the region the
/// trajectory is currently flowing in (on a boundary: the side being entered).
struct PhasePoint {
  double t = 0.0;
  Vec qbar;
  Vec pbar;
  RegionMask region;
};

struct HamiltonianValue {
  double potential = 0.0;
  double kinetic = 0.0;
  double total = 0.0;
};

inline HamiltonianValue hamiltonian(const PhasePoint& state, const TargetModel& model,
                                    const Standardizer& std_map) {
  const Vec q = unstandardize(state.qbar, std_map);
  const double logd = model.log_density(q, state.region);
  if (!std::isfinite(logd))
    throw NonFiniteError("hamiltonian: non-finite log density", q);
  HamiltonianValue h;
  h.potential = -logd;
  h.kinetic = 0.5 * state.pbar.squaredNorm();
  h.total = h.potential + h.kinetic;
  return h;
}

/// Time derivative of (qbar, pbar): (pbar, S * grad_q log pi) in the frozen region.
inline Vec phase_rhs(const Vec& qbar, const Vec& pbar, const RegionMask& region,
                     const TargetModel& model, const Standardizer& std_map) {
  const Index d = qbar.size();
  const Vec q = unstandardize(qbar, std_map);
  const Vec g = model.gradient(q, region);
  if (!g.allFinite()) throw NonFiniteError("phase_rhs: non-finite gradient", q);
  Vec out(2 * d);
  out.head(d) = pbar;
  out.tail(d) = std_map.scale().cwiseProduct(g);
  return out;
}

inline Vec phase_rhs(const PhasePoint& state, const TargetModel& model,
                     const Standardizer& std_map) {
  return phase_rhs(state.qbar, state.pbar, state.region, model, std_map);
}

}  // namespace grhmc
