#include "drivol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drivol/errors.hpp"

namespace drivol::stats {

double mean(std::span<const double> x) {
  if (x.empty()) {
    throw EmptySeriesError();
  }
  double sum = 0.0;
  for (double v : x) {
    sum += v;
  }
  return sum / static_cast<double>(x.size());
}

double pop_std(std::span<const double> x) {
  const double m = mean(x);
  double sq = 0.0;
  for (double v : x) {
    const double d = v - m;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(x.size()));
}

double sample_std(std::span<const double> x) {
  if (x.size() < 2) {
    throw EmptySeriesError();
  }
  const double m = mean(x);
  double sq = 0.0;
  for (double v : x) {
    const double d = v - m;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(x.size() - 1));
}

double mean_abs_dev(std::span<const double> x) {
  const double m = mean(x);
  double sum = 0.0;
  for (double v : x) {
    sum += std::fabs(v - m);
  }
  return sum / static_cast<double>(x.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw EmptySeriesError();
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidFractionError(p);
  }
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size() || frac == 0.0) {
    return sorted[lo];
  }
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> x, double p) {
  if (x.empty()) {
    throw EmptySeriesError();
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidFractionError(p);
  }
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

double coeff_var(std::span<const double> x) {
  const double m = mean(x);
  if (m == 0.0) {
    throw ZeroMeanError();
  }
  return 100.0 * pop_std(x) / m;
}

double quantile_coeff_var(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  if (sorted.empty()) {
    throw EmptySeriesError();
  }
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);
  const double q3 = quantile_sorted(sorted, 0.75);
  const double denom = q3 + q1;
  if (denom == 0.0) {
    throw ZeroQuartileSumError();
  }
  return 100.0 * (q3 - q1) / denom;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    return std::nullopt;
  }
  const double ma = mean(a);
  const double mb = mean(b);
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) {
    return std::nullopt;
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace drivol::stats
