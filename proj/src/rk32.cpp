#include "grhmc/rk32.hpp"

#include <algorithm>
#include <cmath>

namespace grhmc {

StepRecord rk_step(const Vec& y0, double t0, double h, const DerivativeField& f,
                   const Vec* f0_fsal) {
  if (!(h > 0.0)) throw ContractError("rk_step: h must be > 0");
  StepRecord step;
  step.t0 = t0;
  step.h = h;
  step.y0 = y0;
  const Vec k1 = f0_fsal ? *f0_fsal : f(t0, y0);
  step.f0 = k1;
  const Vec k2 = f(t0 + 0.5 * h, y0 + (0.5 * h) * k1);
  const Vec k3 = f(t0 + 0.75 * h, y0 + (0.75 * h) * k2);
  step.y1 = y0 + h * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3);
  const Vec k4 = f(t0 + h, step.y1);
  step.f1 = k4;
  // third-order result minus the embedded second-order result
  step.err_estimate =
      h * ((-5.0 / 72.0) * k1 + (1.0 / 12.0) * k2 + (1.0 / 9.0) * k3 - (1.0 / 8.0) * k4);
  return step;
}

double error_norm(const StepRecord& step, const IntegratorConfig& cfg) {
  const Index n = step.err_estimate.size();
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double scale =
        cfg.abs_tol + cfg.rel_tol * std::max(std::abs(step.y0[i]), std::abs(step.y1[i]));
    const double e = step.err_estimate[i] / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

std::pair<bool, double> step_controller(double err_norm, double h,
                                        const IntegratorConfig& cfg) {
  if (!(err_norm >= 0.0)) throw ContractError("step_controller: err_norm must be >= 0");
  const bool accept = err_norm <= 1.0;
  double factor;
  if (err_norm == 0.0) {
    factor = cfg.growth_cap;
  } else {
    factor = cfg.safety * std::pow(err_norm, -1.0 / 3.0);
    factor = std::clamp(factor, cfg.shrink_cap, cfg.growth_cap);
  }
  double h_next = std::clamp(factor * h, cfg.h_min, cfg.h_max);
  if (!accept && h_next < cfg.h_min * (1.0 + 1e-12))
    throw IntegrationError("step_controller: step size underflow below h_min");
  return {accept, h_next};
}

Vec dense_eval(const StepRecord& step, double sigma) {
  if (sigma < 0.0 || sigma > 1.0) throw ContractError("dense_eval: sigma outside [0,1]");
  const double t2 = sigma * sigma, t3 = t2 * sigma;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + sigma;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * step.y0 + (h10 * step.h) * step.f0 + h01 * step.y1 +
         (h11 * step.h) * step.f1;
}

}  // namespace grhmc
