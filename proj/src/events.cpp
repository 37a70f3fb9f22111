#include "grhmc/events.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace grhmc {

namespace {

constexpr std::array<double, 5> kCheckpoints = {0.0, 0.25, 0.5, 0.75, 1.0};

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

int priority(EventType t) {
  switch (t) {
    case EventType::Boundary: return 0;
    case EventType::Refresh: return 1;
    case EventType::UTurn: return 2;
    case EventType::SampleEmit: return 3;
  }
  return 4;
}

struct Candidate {
  double sigma = std::numeric_limits<double>::infinity();
  EventKind kind{EventType::Refresh};
  bool valid = false;
};

bool is_masked(const EventScan& scan, int k) {
  if (!scan.masked) return false;
  for (const auto& m : *scan.masked)
    if (m.k == k) return true;
  return false;
}

template <typename F>
double bisect(const F& f, double a, double fa, double b, double fb, double tol_f,
              const StepRecord& step) {
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (std::abs(fm) <= tol_f || (b - a) <= 1e-12) return m;
    if (sgn(fm) == sgn(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  std::ostringstream os;
  os << "locate_first_event: root finder failed to converge in 200 iterations"
     << " (t0=" << step.t0 << ", h=" << step.h << ", bracket=[" << a << "," << b
     << "], f=[" << fa << "," << fb << "])";
  throw IntegrationError(os.str());
}

}  // namespace

std::optional<Event> locate_first_event(const StepRecord& step, const RegionMask& region,
                                        const EventScan& scan) {
  const Index d = step.y0.size() / 2;
  const double t_end = step.t0 + step.h;

  auto qbar_at = [&](double sigma) -> Vec { return dense_eval(step, sigma).head(d); };

  Candidate best;
  auto offer = [&](double sigma, EventKind kind) {
    if (!best.valid || sigma < best.sigma ||
        (sigma == best.sigma && priority(kind.type) < priority(best.kind.type))) {
      best.sigma = sigma;
      best.kind = kind;
      best.valid = true;
    }
  };

  // Scheduled times falling inside (t0, t0+h].
  if (scan.refresh_t > step.t0 && scan.refresh_t <= t_end)
    offer((scan.refresh_t - step.t0) / step.h, EventKind{EventType::Refresh});
  if (scan.sample_t > step.t0 && scan.sample_t <= t_end)
    offer((scan.sample_t - step.t0) / step.h,
          EventKind{EventType::SampleEmit, -1, scan.sample_index});

  // Constraint crossings on the dense output.
  const int m = scan.model ? scan.model->constraint_count() : 0;
  if (m > 0) {
    std::array<Vec, kCheckpoints.size()> q_cp;
    for (size_t i = 0; i < kCheckpoints.size(); ++i)
      q_cp[i] = unstandardize(qbar_at(kCheckpoints[i]), *scan.std_map);

    for (int k = 0; k < m; ++k) {
      if (is_masked(scan, k)) continue;
      std::array<double, kCheckpoints.size()> vals;
      for (size_t i = 0; i < kCheckpoints.size(); ++i)
        vals[i] = scan.model->constraint_value(q_cp[i], k);
      const double tol_f = scan.root_tol_base * (1.0 + std::abs(vals[0]));
      auto f = [&](double sigma) {
        return scan.model->constraint_value(
            unstandardize(qbar_at(sigma), *scan.std_map), k);
      };
      for (size_t i = 0; i + 1 < kCheckpoints.size(); ++i) {
        if (vals[i + 1] == 0.0) {
          offer(kCheckpoints[i + 1], EventKind{EventType::Boundary, k});
          break;
        }
        if (sgn(vals[i]) * sgn(vals[i + 1]) == -1) {
          const double s = bisect(f, kCheckpoints[i], vals[i], kCheckpoints[i + 1],
                                  vals[i + 1], tol_f, step);
          offer(s, EventKind{EventType::Boundary, k});
          break;  // only the first crossing of this constraint matters
        }
      }
    }
  }

  // First U-turn down-crossing strictly after the reset.
  if (scan.uturn && scan.uturn->active) {
    auto u = [&](double sigma) {
      const Vec y = dense_eval(step, sigma);
      return scan.uturn->value(y.head(d), y.tail(d));
    };
    std::array<double, kCheckpoints.size()> vals;
    for (size_t i = 0; i < kCheckpoints.size(); ++i) vals[i] = u(kCheckpoints[i]);
    const double tol_f = scan.root_tol_base * (1.0 + std::abs(vals[0]));
    for (size_t i = 0; i + 1 < kCheckpoints.size(); ++i) {
      if (vals[i] > 0.0 && vals[i + 1] < 0.0) {
        const double s = bisect(u, kCheckpoints[i], vals[i], kCheckpoints[i + 1],
                                vals[i + 1], tol_f, step);
        offer(s, EventKind{EventType::UTurn});
        break;
      }
      if (vals[i] > 0.0 && vals[i + 1] == 0.0 && kCheckpoints[i + 1] > 0.0) {
        offer(kCheckpoints[i + 1], EventKind{EventType::UTurn});
        break;
      }
    }
  }

  if (!best.valid) return std::nullopt;

  Event ev;
  ev.kind = best.kind;
  // Scheduled events carry their exact clock time; located roots use t0 + sigma*h.
  if (best.kind.type == EventType::Refresh)
    ev.t = scan.refresh_t;
  else if (best.kind.type == EventType::SampleEmit)
    ev.t = scan.sample_t;
  else
    ev.t = step.t0 + best.sigma * step.h;
  const Vec y = dense_eval(step, best.sigma);
  ev.state.t = ev.t;
  ev.state.qbar = y.head(d);
  ev.state.pbar = y.tail(d);
  ev.state.region = region;
  return ev;
}

}  // namespace grhmc
