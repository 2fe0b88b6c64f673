#pragma once

// Bivariate OLS with the usual statistic set, plus residual diagnostics:
// Durbin-Watson, Ramsey RESET and Shapiro-Wilk.

#include <nowcast/detail/io.hpp>
#include <nowcast/detail/least_squares.hpp>
#include <nowcast/distributions.hpp>
#include <nowcast/error.hpp>
#include <nowcast/shapiro_wilk.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nowcast {

struct OlsFit {
  double intercept = 0;
  double slope = 0;
  double se_intercept = 0;
  double se_slope = 0;
  double resid_se = 0;
  double r2 = 0;
  double adj_r2 = 0;
  double f_stat = 0;
  double f_p = 0;
  double rss = 0;
  int n = 0;
  std::vector<double> residuals;
  std::vector<double> fitted;

  int dof() const { return n - 2; }
};

// y = intercept + slope * x by least squares. Requires n >= 3 and
// non-constant x.
inline OlsFit fit_ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DataError("fit_ols: x has " + std::to_string(x.size()) + " values, y has " + std::to_string(y.size()));
  const std::size_t n = x.size();
  if (n < 3) throw DataError("fit_ols: need at least 3 observations, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("fit_ols: non-finite observation");

  const double dn = static_cast<double>(n);
  detail::KahanSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double xbar = sx.value() / dn, ybar = sy.value() / dn;
  detail::KahanSum sxx, sxy, syy, sx2;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xbar, dy = y[i] - ybar;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
    sx2.add(x[i] * x[i]);
  }
  const double Sxx = sxx.value();
  if (!(Sxx > 1e-24 * sx2.value())) throw DataError("fit_ols: x is constant");

  OlsFit f;
  f.n = static_cast<int>(n);
  f.slope = sxy.value() / Sxx;
  f.intercept = ybar - f.slope * xbar;
  f.fitted.resize(n);
  f.residuals.resize(n);
  detail::KahanSum rss;
  for (std::size_t i = 0; i < n; ++i) {
    f.fitted[i] = f.intercept + f.slope * x[i];
    f.residuals[i] = y[i] - f.fitted[i];
    rss.add(f.residuals[i] * f.residuals[i]);
  }
  f.rss = rss.value();
  const double dof = dn - 2;
  const double sigma2 = f.rss / dof;
  f.resid_se = std::sqrt(sigma2);
  f.se_slope = std::sqrt(sigma2 / Sxx);
  f.se_intercept = std::sqrt(sigma2 * (1 / dn + xbar * xbar / Sxx));
  const double tss = syy.value();
  if (tss > 0) {
    f.r2 = 1 - f.rss / tss;
    f.adj_r2 = 1 - (1 - f.r2) * (dn - 1) / dof;
  } else {
    f.r2 = f.adj_r2 = std::numeric_limits<double>::quiet_NaN();
  }
  const double t = f.slope / f.se_slope;
  f.f_stat = t * t;
  f.f_p = dist::f_upper_p(f.f_stat, 1, dof);
  return f;
}

inline double predict(const OlsFit& fit, double x) { return fit.intercept + fit.slope * x; }

// Σ(e_t − e_{t−1})² / Σ e_t²
inline double durbin_watson(std::span<const double> e) {
  if (e.size() < 2) throw DataError("durbin_watson: need at least 2 residuals");
  detail::KahanSum num, den;
  for (std::size_t i = 0; i < e.size(); ++i) {
    den.add(e[i] * e[i]);
    if (i > 0) num.add((e[i] - e[i - 1]) * (e[i] - e[i - 1]));
  }
  if (!(den.value() > 0)) throw DataError("durbin_watson: residuals are all zero");
  return num.value() / den.value();
}

struct ResetResult {
  double f = 0;
  int dof1 = 3;
  int dof2 = 0;
  double p = 0;
};

// Ramsey RESET: augments the fit with the 2nd, 3rd and 4th powers of the
// fitted values and F-tests them jointly, F(3, n − 5).
inline ResetResult reset_test(const OlsFit& fit, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n || fit.fitted.size() != n) throw DataError("reset_test: length mismatch");
  if (n < 8) throw DataError("reset_test: need at least 8 observations, got " + std::to_string(n));

  // Powers of an affine rescaling of the fitted values span the same space as
  // powers of the fitted values once the constant and x are included.
  double lo = fit.fitted[0], hi = fit.fitted[0];
  for (double v : fit.fitted) lo = std::min(lo, v), hi = std::max(hi, v);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  if (!(half > 0)) throw NumericError("reset_test: fitted values are constant, augmentation is collinear");

  std::vector<std::vector<double>> cols(5, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (fit.fitted[i] - mid) / half;
    cols[0][i] = 1;
    cols[1][i] = u;
    cols[2][i] = u * u;
    cols[3][i] = u * u * u;
    cols[4][i] = u * u * u * u;
  }
  detail::LeastSquaresSolution aug;
  try {
    aug = detail::householder_least_squares(std::move(cols), std::vector<double>(y.begin(), y.end()));
  } catch (const NumericError&) {
    throw NumericError("reset_test: augmented regressors are collinear");
  }
  ResetResult r;
  r.dof2 = static_cast<int>(n) - 5;
  const double gain = std::max(0.0, fit.rss - aug.rss);
  if (!(aug.rss > 0)) {
    if (gain > 0) {
      r.f = std::numeric_limits<double>::infinity();
      r.p = 0;
      return r;
    }
    throw NumericError("reset_test: both models fit exactly, F is undefined");
  }
  r.f = (gain / 3) / (aug.rss / r.dof2);
  r.p = dist::f_upper_p(r.f, 3, r.dof2);
  return r;
}

enum class Coefficient { intercept, slope };

struct TTest {
  double t = 0;
  double p = 0;
};

// Two-sided t test of H0: coefficient == null_value, n − 2 dof.
inline TTest coeff_t_test(const OlsFit& fit, Coefficient which, double null_value) {
  const double est = which == Coefficient::intercept ? fit.intercept : fit.slope;
  const double se = which == Coefficient::intercept ? fit.se_intercept : fit.se_slope;
  const double diff = est - null_value;
  TTest r;
  r.t = diff == 0 ? 0.0 : diff / se;
  r.p = dist::student_t_two_sided_p(r.t, fit.n - 2);
  return r;
}

struct DiagnosticsReport {
  double dw = 0;
  std::optional<ResetResult> reset;
  std::string reset_error;
  std::optional<ShapiroWilkResult> sw;
  std::string sw_error;
};

// DW, RESET and Shapiro-Wilk on the residuals. RESET and W failures are
// recorded rather than thrown so a report can still be produced.
inline DiagnosticsReport diagnose(const OlsFit& fit, std::span<const double> x, std::span<const double> y) {
  DiagnosticsReport d;
  d.dw = durbin_watson(fit.residuals);
  try {
    d.reset = reset_test(fit, x, y);
  } catch (const Error& e) {
    d.reset_error = e.what();
  }
  try {
    d.sw = shapiro_wilk(fit.residuals);
  } catch (const Error& e) {
    d.sw_error = e.what();
  }
  return d;
}

struct ReportLabels {
  std::string lhs = "DIFFPRELIM";
  std::string rhs = "DIFFBROKER";
};

// Human-readable block laid out like a printed regression: equation line,
// standard errors in brackets underneath, then residual SE, adjusted R², F and
// the diagnostics line.
inline std::string format_fit_report(const OlsFit& fit, const DiagnosticsReport* diag, const ReportLabels& labels) {
  using detail::format_fixed;
  const std::string a = format_fixed(fit.intercept, 3);
  const std::string b = format_fixed(std::abs(fit.slope), 3);
  std::string eq = labels.lhs + " = " + a + (fit.slope < 0 ? " - " : " + ") + b + " * " + labels.rhs;
  const std::string se_a = "(" + format_fixed(fit.se_intercept, 3) + ")";
  const std::string se_b = "(" + format_fixed(fit.se_slope, 3) + ")";
  std::string pad(labels.lhs.size() + 3, ' ');
  std::string se_line = pad + se_a;
  const std::size_t slope_col = labels.lhs.size() + 3 + a.size() + 3;
  if (se_line.size() + 1 < slope_col) se_line += std::string(slope_col - se_line.size(), ' ');
  else se_line += ' ';
  se_line += se_b;

  std::string out = eq + "\n" + se_line + "\n";
  out += "Residual standard error: " + format_fixed(fit.resid_se, 3) +
         " Adjusted R-squared " + format_fixed(fit.adj_r2, 3) + "\n";
  out += "F-statistic: " + detail::format_g(fit.f_stat, 4) + " on 1 and " + std::to_string(fit.dof()) +
         " degrees of freedom, p-value: " + detail::format_g(fit.f_p, 3) + "\n";
  if (diag) {
    out += "DW = " + format_fixed(diag->dw, 2) + "; ";
    if (diag->reset)
      out += "Ramsey F (" + std::to_string(diag->reset->dof1) + "," + std::to_string(diag->reset->dof2) +
             ") = " + format_fixed(diag->reset->f, 2) + " [p = " + format_fixed(diag->reset->p, 3) + "]; ";
    else
      out += "Ramsey F unavailable; ";
    if (diag->sw)
      out += "W = " + format_fixed(diag->sw->w, 2) + " [p = " + format_fixed(diag->sw->p, 3) + "]";
    else
      out += "W unavailable";
    out += "\n";
  }
  return out;
}

// Flat `key = value` serialization at full precision, in the same order as
// the printed report. Parsing it back yields the exact doubles.
inline std::string fit_key_values(const OlsFit& fit, const DiagnosticsReport* diag, const std::string& prefix = "") {
  auto g = [](double v) { return detail::format_g(v, 17); };
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += prefix + k + " = " + v + "\n"; };
  kv("n", std::to_string(fit.n));
  kv("intercept", g(fit.intercept));
  kv("se_intercept", g(fit.se_intercept));
  kv("slope", g(fit.slope));
  kv("se_slope", g(fit.se_slope));
  kv("resid_se", g(fit.resid_se));
  kv("adj_r2", g(fit.adj_r2));
  kv("f_stat", g(fit.f_stat));
  kv("f_dof", "1," + std::to_string(fit.dof()));
  kv("f_p", g(fit.f_p));
  if (diag) {
    kv("dw", g(diag->dw));
    if (diag->reset) {
      kv("reset_f", g(diag->reset->f));
      kv("reset_dof", std::to_string(diag->reset->dof1) + "," + std::to_string(diag->reset->dof2));
      kv("reset_p", g(diag->reset->p));
    }
    if (diag->sw) {
      kv("sw_w", g(diag->sw->w));
      kv("sw_p", g(diag->sw->p));
    }
  }
  return out;
}

} // namespace nowcast
