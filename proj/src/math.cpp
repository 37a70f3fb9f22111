#include "grhmc/math.hpp"

#include <algorithm>

namespace grhmc {

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ContractError("normal_quantile: u must be in (0,1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement against the erfc-based CDF.
  const double e = normal_cdf(x) - u;
  const double p = normal_pdf(x);
  if (p > 0.0) {
    const double w = e / p;
    x -= w / (1.0 + 0.5 * x * w);
  }
  return x;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

TabulatedCdf::TabulatedCdf(std::function<double(double)> pdf, double lo, double hi,
                           int n_cells)
    : lo_(lo), hi_(hi) {
  if (!(hi > lo) || n_cells < 2) throw ContractError("TabulatedCdf: bad grid");
  const int n = n_cells + (n_cells % 2);  // even cell count for Simpson pairs
  h_ = (hi - lo) / n;
  pdf_.resize(n + 1);
  for (int i = 0; i <= n; ++i) pdf_[i] = pdf(lo + i * h_);
  cdf_.assign(n + 1, 0.0);
  for (int i = 0; i + 2 <= n; i += 2) {
    const double inc = h_ / 3.0 * (pdf_[i] + 4.0 * pdf_[i + 1] + pdf_[i + 2]);
    // midpoint value by half-interval Simpson, keeps the table monotone-smooth
    const double mid = h_ / 6.0 * (pdf_[i] + 4.0 * pdf(lo + (i + 0.5) * h_) + pdf_[i + 1]);
    cdf_[i + 1] = cdf_[i] + mid;
    cdf_[i + 2] = cdf_[i] + inc;
  }
}

double TabulatedCdf::operator()(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return cdf_.back();
  const double s = (x - lo_) / h_;
  const int i = std::min(static_cast<int>(s), static_cast<int>(cdf_.size()) - 2);
  const double t = s - i;
  const double y0 = cdf_[i], y1 = cdf_[i + 1];
  const double m0 = pdf_[i] * h_, m1 = pdf_[i + 1] * h_;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.stderr = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

}  // namespace grhmc
