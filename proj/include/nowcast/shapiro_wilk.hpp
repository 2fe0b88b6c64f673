#pragma once

// Shapiro-Wilk W test for normality, Royston's AS R94 approximation
// (complete samples, 3 <= n <= 5000).

#include <nowcast/distributions.hpp>
#include <nowcast/error.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace nowcast {

struct ShapiroWilkResult {
  double w = 0;
  double p = 0;
};

namespace detail {

template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double r = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) r = r * x + c[i];
  return r;
}

// Coefficients a_1..a_{n/2} for the upper half of the order statistics.
inline std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1 / std::sqrt(an);
  const double a1 = poly(c1, rsn) - m[0] / ssumm2;
  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
    fac = std::sqrt((summ2 - 2 * m[0] * m[0] - 2 * m[1] * m[1]) / (1 - 2 * a1 * a1 - 2 * a2 * a2));
    a[0] = a1;
    a[1] = a2;
    first_scaled = 2;
  } else {
    fac = std::sqrt((summ2 - 2 * m[0] * m[0]) / (1 - 2 * a1 * a1));
    a[0] = a1;
    first_scaled = 1;
  }
  for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

} // namespace detail

inline ShapiroWilkResult shapiro_wilk(std::vector<double> x) {
  const std::size_t n = x.size();
  if (n < 3 || n > 5000) throw DataError("shapiro-wilk: sample size " + std::to_string(n) + " outside [3, 5000]");
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0)) throw DataError("shapiro-wilk: sample has zero variance");

  const auto a = detail::shapiro_wilk_coefficients(n);
  double mean = 0;
  for (double v : x) mean += v / range;
  mean /= static_cast<double>(n);
  double ss = 0;
  for (double v : x) ss += (v / range - mean) * (v / range - mean);
  double num = 0;
  for (std::size_t i = 0; i < a.size(); ++i) num += a[i] * (x[n - 1 - i] - x[i]) / range;
  ShapiroWilkResult res;
  res.w = std::min(1.0, num * num / ss);

  if (n == 3) {
    constexpr double pi6 = 6 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3;
    res.p = std::max(0.0, pi6 * (std::asin(std::sqrt(res.w)) - stqr));
    return res;
  }

  static constexpr double c3[] = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const double an = static_cast<double>(n);
  double y = std::log1p(-res.w);
  if (res.w >= 1) {
    res.p = 1;
    return res;
  }
  double m, s;
  if (n <= 11) {
    const double gamma = detail::poly(g, an);
    if (y >= gamma) {
      res.p = 1e-99;
      return res;
    }
    y = -std::log(gamma - y);
    m = detail::poly(c3, an);
    s = std::exp(detail::poly(c4, an));
  } else {
    const double xx = std::log(an);
    m = detail::poly(c5, xx);
    s = std::exp(detail::poly(c6, xx));
  }
  res.p = dist::normal_upper((y - m) / s);
  return res;
}

} // namespace nowcast
