#pragma once

#include <nowcast/error.hpp>

#include <cmath>
#include <vector>

namespace nowcast::detail {

// Compensated (Neumaier) summation.
class KahanSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0;
  double comp_ = 0;
};

struct LeastSquaresSolution {
  std::vector<double> coef;
  std::vector<double> residuals;
  double rss = 0;
};

// Minimises ||y − X b|| by Householder QR. `columns` holds X column-major,
// each column of length y.size(). Throws NumericError when a column is
// (numerically) in the span of the previous ones.
inline LeastSquaresSolution householder_least_squares(std::vector<std::vector<double>> columns,
                                                      std::vector<double> y, double rank_tol = 1e-10) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size();
  if (p == 0 || n < p) throw NumericError("least squares: need at least as many rows as columns");
  std::vector<double> col_norm(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0;
    for (double v : columns[j]) s += v * v;
    col_norm[j] = std::sqrt(s);
  }
  std::vector<double> diag(p);
  for (std::size_t k = 0; k < p; ++k) {
    auto& a = columns[k];
    double norm = 0;
    for (std::size_t i = k; i < n; ++i) norm += a[i] * a[i];
    norm = std::sqrt(norm);
    if (!(norm > rank_tol * col_norm[k])) throw NumericError("least squares: design matrix is rank deficient");
    const double alpha = a[k] > 0 ? -norm : norm;
    // v = a[k..] − alpha e_k, stored in place
    a[k] -= alpha;
    double vnorm2 = 0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += a[i] * a[i];
    auto reflect = [&](std::vector<double>& target) {
      double dot = 0;
      for (std::size_t i = k; i < n; ++i) dot += a[i] * target[i];
      const double f = 2 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) target[i] -= f * a[i];
    };
    for (std::size_t j = k + 1; j < p; ++j) reflect(columns[j]);
    reflect(y);
    diag[k] = alpha;
  }
  LeastSquaresSolution sol;
  sol.coef.assign(p, 0);
  for (std::size_t k = p; k-- > 0;) {
    double s = y[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= columns[j][k] * sol.coef[j];
    sol.coef[k] = s / diag[k];
  }
  KahanSum rss;
  for (std::size_t i = p; i < n; ++i) rss.add(y[i] * y[i]);
  sol.rss = rss.value();
  // Residuals are Q [0; tail of Q'y], applying the stored reflectors in reverse.
  std::vector<double> r(n, 0);
  for (std::size_t i = p; i < n; ++i) r[i] = y[i];
  for (std::size_t k = p; k-- > 0;) {
    const auto& a = columns[k];
    double vnorm2 = 0, dot = 0;
    for (std::size_t i = k; i < n; ++i) {
      vnorm2 += a[i] * a[i];
      dot += a[i] * r[i];
    }
    const double f = 2 * dot / vnorm2;
    for (std::size_t i = k; i < n; ++i) r[i] -= f * a[i];
  }
  sol.residuals = std::move(r);
  return sol;
}

} // namespace nowcast::detail
