#pragma once

#include <optional>
#include <vector>

#include "grhmc/phase.hpp"
#include "grhmc/rk32.hpp"

namespace grhmc {

enum class EventType { Refresh, Boundary, UTurn, SampleEmit };

struct EventKind {
  EventType type;
  int constraint = -1;       // Boundary
  long sample_index = -1;    // SampleEmit
};

struct Event {
  double t = 0.0;
  EventKind kind{EventType::Refresh};
  PhasePoint state;  // interpolated at t, region = the step's frozen region
};

/// Watches (qbar - q_ref)^T pbar for its first down-crossing strictly after
/// the last reset. Reset on every momentum refresh and every reflection.
struct UTurnTracker {
  Vec q_ref;
  bool active = false;

  void reset(const Vec& qbar) {
    q_ref = qbar;
    active = true;
  }
  double value(const Vec& qbar, const Vec& pbar) const {
    return (qbar - q_ref).dot(pbar);
  }
};

/// Exponential inter-event time from a unit uniform (inverse CDF).
inline double exponential_from_uniform(double u, double lambda) {
  if (!(lambda > 0.0)) throw ContractError("refresh rate lambda must be > 0");
  return -std::log(u) / lambda;
}

inline double next_refresh_time(double lambda, Rng& rng) {
  return exponential_from_uniform(rng.uniform(), lambda);
}

/// Constraint temporarily hidden from crossing detection right after its own
/// boundary event; lifts once |c| > lift_value or the clock passes t_lift.
struct MaskedConstraint {
  int k = -1;
  double lift_value = 0.0;
  double t_lift = 0.0;
};

struct EventScan {
  const TargetModel* model = nullptr;
  const Standardizer* std_map = nullptr;
  const UTurnTracker* uturn = nullptr;                  // nullptr or inactive: skip
  double refresh_t = std::numeric_limits<double>::infinity();
  double sample_t = std::numeric_limits<double>::infinity();
  long sample_index = -1;
  const std::vector<MaskedConstraint>* masked = nullptr;
  double root_tol_base = 1e-10;
};

/// Earliest event inside an accepted step, if any. Constraints and the U-turn
/// value are scanned at 5 dense-output checkpoints; sign changes are refined
/// by safeguarded bisection on the interpolant. Ties at equal times resolve
/// Boundary > Refresh > UTurn > SampleEmit.
std::optional<Event> locate_first_event(const StepRecord& step, const RegionMask& region,
                                        const EventScan& scan);

}  // namespace grhmc
