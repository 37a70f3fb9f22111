#pragma once

#include <functional>
#include <utility>

#include "grhmc/common.hpp"

namespace grhmc {

struct IntegratorConfig {
  double abs_tol = 1e-4;
  double rel_tol = 1e-4;
  double h_init = 1e-2;
  double h_max = 1.0;
  double h_min = 1e-10;
  double safety = 0.9;
  double growth_cap = 5.0;
  double shrink_cap = 0.2;

  void validate() const {
    if (!(h_min > 0.0 && h_min <= h_init && h_init <= h_max))
      throw ContractError("IntegratorConfig: need 0 < h_min <= h_init <= h_max");
    if (!(abs_tol > 0.0 && rel_tol > 0.0))
      throw ContractError("IntegratorConfig: tolerances must be > 0");
    if (!(shrink_cap > 0.0 && shrink_cap < 1.0 && growth_cap > 1.0))
      throw ContractError("IntegratorConfig: need 0 < shrink_cap < 1 < growth_cap");
  }
};

/// One Bogacki-Shampine 3(2) step. f1 is the FSAL derivative at y1.
struct StepRecord {
  double t0 = 0.0;
  double h = 0.0;
  Vec y0, y1;
  Vec f0, f1;
  Vec err_estimate;
  bool accepted = false;

  bool finite() const { return y1.allFinite() && f1.allFinite() && err_estimate.allFinite(); }
};

using DerivativeField = std::function<Vec(double, const Vec&)>;

/// BS23 step from y0; pass f0_fsal to reuse the previous step's last stage.
StepRecord rk_step(const Vec& y0, double t0, double h, const DerivativeField& f,
                   const Vec* f0_fsal = nullptr);

/// RMS of err / (abs_tol + rel_tol * max(|y0|, |y1|)); accept iff <= 1.
double error_norm(const StepRecord& step, const IntegratorConfig& cfg);

/// (accept, next h). Standard P-controller for a 3rd-order pair.
std::pair<bool, double> step_controller(double err_norm, double h,
                                        const IntegratorConfig& cfg);

/// Cubic Hermite interpolant through (y0, f0) and (y1, f1); sigma in [0, 1].
Vec dense_eval(const StepRecord& step, double sigma);

}  // namespace grhmc
