#pragma once

// Independent brute-force statistics oracle. Deliberately written against
// plain std::vector with naive loops and kept free of any drivol headers so
// it cannot share a code path with the library it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  return s / static_cast<double>(x.size());
}

inline double pop_std(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) {
    s += (v - m) * (v - m);
  }
  return std::sqrt(s / static_cast<double>(x.size()));
}

inline double sample_std(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) {
    s += (v - m) * (v - m);
  }
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline double mean_abs_dev(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) {
    s += std::fabs(v - m);
  }
  return s / static_cast<double>(x.size());
}

// Linear interpolation between closest order statistics.
inline double quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double h = p * static_cast<double>(x.size() - 1);
  const auto j = static_cast<std::size_t>(h);
  const double g = h - static_cast<double>(j);
  if (j + 1 >= x.size()) {
    return x.back();
  }
  return (1.0 - g) * x[j] + g * x[j + 1];
}

inline double coeff_var(const std::vector<double>& x) {
  return 100.0 * pop_std(x) / mean(x);
}

inline double quantile_coeff_var(const std::vector<double>& x) {
  const double q1 = quantile(x, 0.25);
  const double q3 = quantile(x, 0.75);
  return 100.0 * (q3 - q1) / (q3 + q1);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace oracle
