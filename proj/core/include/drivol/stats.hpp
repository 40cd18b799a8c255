#pragma once

// Statistical primitives used by the volatility measures and the report
// tables. Two deliberate conventions coexist: pop_std divides by N (the
// convention of the volatility formulas) while sample_std divides by N-1
// (the convention of descriptive summary tables).

#include <optional>
#include <span>

namespace drivol::stats {

// Throws EmptySeriesError on empty input.
double mean(std::span<const double> x);

// Population standard deviation, divisor N.
double pop_std(std::span<const double> x);

// Sample standard deviation, divisor N-1. Throws EmptySeriesError when
// |x| < 2.
double sample_std(std::span<const double> x);

// Mean absolute deviation about the mean.
double mean_abs_dev(std::span<const double> x);

// Quantile by linear interpolation between closest order statistics:
// h = (N-1)*p, result = x_(floor(h)) + frac(h) * (x_(floor(h)+1) - x_(floor(h))).
// Throws EmptySeriesError / InvalidFractionError.
double quantile(std::span<const double> x, double p);

// Same, but `sorted` must already be ascending (not checked).
double quantile_sorted(std::span<const double> sorted, double p);

// 100 * pop_std / mean. Throws ZeroMeanError when mean(x) == 0.
double coeff_var(std::span<const double> x);

// 100 * (Q3 - Q1) / (Q3 + Q1). Throws ZeroQuartileSumError when Q3 + Q1 == 0.
double quantile_coeff_var(std::span<const double> x);

// Pearson correlation; nullopt when |a| < 2 or either side has zero variance.
// Requires |a| == |b|.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

}  // namespace drivol::stats
