#pragma once

#include <span>

namespace convdist {

/// Product-moment correlation (two-pass, centred). Throws std::invalid_argument
/// on length mismatch or fewer than 2 points, UndefinedStatistic on constant input.
double pearson(std::span<const double> x, std::span<const double> y);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

/// Unequal-variance two-sample t-test. Two zero-variance samples with equal
/// means give p = 1; with different means the statistic is undefined.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> x);

}  // namespace convdist
