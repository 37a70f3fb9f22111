#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grhmc/boundary.hpp"
#include "grhmc/math.hpp"
#include "grhmc/rk32.hpp"

namespace grhmc::diag {

/// Sup distance between the empirical CDF of sorted samples and cdf.
double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf);

/// Kick-drift-kick leapfrog with the gradient taken wherever the position
/// lies; no boundary handling (the discrete-time HMC baseline).
Vec leapfrog_integrate(const TargetModel& model, const Vec& z0, double h, long n_steps);

/// Fixed-step BS23 where the region is re-classified at every stage, so
/// gradients from both sides of a boundary mix inside a step (the
/// no-truncation baseline).
Vec naive_rk_integrate(const TargetModel& model, const Vec& z0, double h, long n_steps);

/// Fixed-step BS23 with frozen-region steps, boundary events located on the
/// dense output and handled by the deterministic kernels; after a truncation
/// the remainder of the original step is integrated so the t = i*h grid is
/// kept. State accumulation is compensated.
Vec event_aware_integrate(const TargetModel& model, const Vec& z0, double T, double h,
                          double root_tol = 1e-12);

/// High-accuracy oracle all L2 comparisons are defined against.
Vec reference_solution(const TargetModel& model, const Vec& z0, double T);

enum class Method { Leapfrog, NaiveRk, EventAware };
std::string method_name(Method m);

struct ConvergenceRow {
  Method method;
  double h = 0.0;
  double l2_error = 0.0;
  bool diverged = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  struct MethodFit {
    Method method;
    SlopeFit fit;
  };
  std::vector<MethodFit> slopes;

  double error_at(Method m, double h) const;
  SlopeFit slope_of(Method m) const;
};

/// L2 error of the final state against the reference for each method and h,
/// with log-log slope fits (diverged runs are excluded from the fit).
ConvergenceTable convergence_study(const TargetModel& model, const Vec& z0, double T,
                                   const std::vector<double>& h_grid,
                                   const std::vector<Method>& methods);

}  // namespace grhmc::diag
