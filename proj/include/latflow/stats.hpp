#pragma once

#include <span>

namespace latflow::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sd(std::span<const double> x);
/// Linear-interpolation quantile of unsorted data, q in [0,1].
double quantile(std::span<const double> x, double q);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double v) const { return low <= v && v <= high; }
};

/// mean +- z * sd / sqrt(n).
Interval normal_ci(std::span<const double> x, double z = 1.959963984540054);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares; slope NaN with fewer than 2 distinct x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace latflow::stats
