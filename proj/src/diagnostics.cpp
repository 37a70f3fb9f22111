#include "grhmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "grhmc/events.hpp"

namespace grhmc::diag {

double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf) {
  if (sorted_samples.empty()) throw ContractError("ks_statistic: empty sample");
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = cdf(sorted_samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

Vec leapfrog_integrate(const TargetModel& model, const Vec& z0, double h, long n_steps) {
  const Index d = z0.size() / 2;
  Vec q = z0.head(d), p = z0.tail(d);
  auto grad = [&](const Vec& pos) { return model.gradient(pos, model.classify(pos)); };
  p += 0.5 * h * grad(q);
  for (long i = 0; i + 1 < n_steps; ++i) {
    q += h * p;
    p += h * grad(q);
  }
  q += h * p;
  p += 0.5 * h * grad(q);
  if (!q.allFinite() || !p.allFinite())
    throw NonFiniteError("leapfrog_integrate: state diverged", q);
  Vec z(2 * d);
  z << q, p;
  return z;
}

Vec naive_rk_integrate(const TargetModel& model, const Vec& z0, double h, long n_steps) {
  const Index d = z0.size() / 2;
  const Standardizer id = Standardizer::identity(d);
  DerivativeField f = [&](double, const Vec& y) {
    const Vec q = y.head(d);
    return phase_rhs(q, y.tail(d), model.classify(q), model, id);
  };
  Vec y = z0;
  for (long i = 0; i < n_steps; ++i) {
    const StepRecord step = rk_step(y, i * h, h, f);
    if (!step.finite()) throw NonFiniteError("naive_rk_integrate: state diverged", y);
    y = step.y1;
  }
  return y;
}

namespace {

struct Compensated {
  Vec y;
  Vec carry;
  explicit Compensated(const Vec& y0) : y(y0), carry(Vec::Zero(y0.size())) {}
  void add(const Vec& incr) {
    for (Index i = 0; i < y.size(); ++i) {
      const double a = incr[i] - carry[i];
      const double s = y[i] + a;
      carry[i] = (s - y[i]) - a;
      y[i] = s;
    }
  }
  void set(const Vec& value) {
    add(value - y);
  }
  void overwrite_tail(const Vec& value) {
    const Index d = value.size();
    y.tail(d) = value;
    carry.tail(d).setZero();
  }
};

}  // namespace

Vec event_aware_integrate(const TargetModel& model, const Vec& z0, double T, double h,
                          double root_tol) {
  if (!(h > 0.0) || T < 0.0) throw ContractError("event_aware_integrate: bad T or h");
  const Index d = z0.size() / 2;
  const Standardizer id = Standardizer::identity(d);
  Rng dummy(0);  // deterministic kernels only; never draws

  Compensated state(z0);
  RegionMask region = model.classify(z0.head(d));
  std::vector<MaskedConstraint> masked;
  double t = 0.0;

  auto make_field = [&](RegionMask reg) -> DerivativeField {
    return [&, reg](double, const Vec& y) {
      return phase_rhs(y.head(d), y.tail(d), reg, model, id);
    };
  };
  DerivativeField field = make_field(region);

  const long n_full = static_cast<long>(std::floor(T / h + 1e-9));
  for (long i = 0; i <= n_full; ++i) {
    const double t_target = std::min(T, (i + 1) * static_cast<double>(h));
    if (t_target <= t + 1e-15 * std::max(1.0, T)) continue;
    // sub-steps inside one grid cell: full cell, then event remainders
    int guard = 0;
    while (t < t_target - 1e-15 * std::max(1.0, T)) {
      if (++guard > 10000)
        throw IntegrationError("event_aware_integrate: event cascade did not terminate");
      const double hh = t_target - t;
      const StepRecord step = rk_step(state.y, t, hh, field);
      if (!step.finite())
        throw NonFiniteError("event_aware_integrate: state diverged", state.y);

      if (!masked.empty()) {
        const Vec q_now = state.y.head(d);
        std::erase_if(masked, [&](const MaskedConstraint& mc) {
          return t >= mc.t_lift ||
                 std::abs(model.constraint_value(q_now, mc.k)) > mc.lift_value;
        });
      }
      EventScan scan;
      scan.model = &model;
      scan.std_map = &id;
      scan.masked = &masked;
      scan.root_tol_base = root_tol;
      const auto ev = locate_first_event(step, region, scan);
      if (!ev) {
        state.add(step.y1 - step.y0);
        t = t_target;
        break;
      }
      Vec y_event(2 * d);
      y_event << ev->state.qbar, ev->state.pbar;
      state.set(y_event);
      t = ev->t;
      const int k = ev->kind.constraint;
      PhasePoint at{t, state.y.head(d), state.y.tail(d), region};
      const PhasePoint post =
          apply_boundary(at, k, model, id, KernelChoice::Deterministic, dummy);
      region = post.region;
      state.overwrite_tail(post.pbar);
      const double c_start = model.constraint_value(step.y0.head(d), k);
      masked.push_back({k, 10.0 * root_tol * (1.0 + std::abs(c_start)), t + 1e-8});
      field = make_field(region);
    }
  }
  return state.y;
}

Vec reference_solution(const TargetModel& model, const Vec& z0, double T) {
  return event_aware_integrate(model, z0, T, 1e-6, 1e-13);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Leapfrog: return "leapfrog";
    case Method::NaiveRk: return "naive-rk";
    case Method::EventAware: return "event-aware";
  }
  return "?";
}

double ConvergenceTable::error_at(Method m, double h) const {
  for (const auto& row : rows)
    if (row.method == m && row.h == h) return row.l2_error;
  throw ContractError("ConvergenceTable: no row for that method and h");
}

SlopeFit ConvergenceTable::slope_of(Method m) const {
  for (const auto& s : slopes)
    if (s.method == m) return s.fit;
  throw ContractError("ConvergenceTable: no slope for that method");
}

namespace {

Vec run_method(const TargetModel& model, const Vec& z0, double T, double h, Method m) {
  const long n_full = static_cast<long>(std::floor(T / h + 1e-9));
  const double rem = T - n_full * h;
  switch (m) {
    case Method::Leapfrog: {
      Vec z = n_full > 0 ? leapfrog_integrate(model, z0, h, n_full) : z0;
      if (rem > 1e-12) z = leapfrog_integrate(model, z, rem, 1);
      return z;
    }
    case Method::NaiveRk: {
      Vec z = n_full > 0 ? naive_rk_integrate(model, z0, h, n_full) : z0;
      if (rem > 1e-12) z = naive_rk_integrate(model, z, rem, 1);
      return z;
    }
    case Method::EventAware: return event_aware_integrate(model, z0, T, h);
  }
  throw ContractError("run_method: unknown method");
}

}  // namespace

ConvergenceTable convergence_study(const TargetModel& model, const Vec& z0, double T,
                                   const std::vector<double>& h_grid,
                                   const std::vector<Method>& methods) {
  for (double h : h_grid)
    if (!(h > 0.0 && h <= T)) throw ContractError("convergence_study: h outside (0, T]");
  const Vec ref = reference_solution(model, z0, T);
  ConvergenceTable table;
  for (Method m : methods) {
    std::vector<double> log_h, log_err;
    for (double h : h_grid) {
      ConvergenceRow row;
      row.method = m;
      row.h = h;
      try {
        const Vec z = run_method(model, z0, T, h, m);
        row.l2_error = (z - ref).norm();
        if (!std::isfinite(row.l2_error)) row.diverged = true;
      } catch (const std::exception&) {
        row.diverged = true;
      }
      if (!row.diverged && row.l2_error > 0.0) {
        log_h.push_back(std::log(h));
        log_err.push_back(std::log(row.l2_error));
      }
      table.rows.push_back(row);
    }
    if (log_h.size() >= 2)
      table.slopes.push_back({m, fit_slope(log_h, log_err)});
  }
  return table;
}

}  // namespace grhmc::diag
