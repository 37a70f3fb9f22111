#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "grhmc/common.hpp"

namespace grhmc {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Phi(x) via erfc, accurate in both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

/// Inverse standard normal CDF (Acklam's rational approximation refined with
/// one Halley step; ~1e-15 over (0,1)).
double normal_quantile(double u);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

/// CDF tabulated from a PDF by composite Simpson on a uniform grid; evaluation
/// uses cubic Hermite interpolation with the PDF as the exact slope.
class TabulatedCdf {
 public:
  TabulatedCdf(std::function<double(double)> pdf, double lo, double hi, int n_cells = 20000);

  double operator()(double x) const;
  double total_mass() const { return cdf_.back(); }

 private:
  double lo_, hi_, h_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
};

/// Least-squares slope of y against x with its standard error.
struct SlopeFit {
  double slope = 0.0;
  double stderr = 0.0;
  double intercept = 0.0;
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace grhmc
