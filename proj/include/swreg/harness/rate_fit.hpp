#pragma once

#include <span>
#include <utility>
#include <vector>

namespace swreg {

/// Least-squares line through (log2 x, log2 y).
struct RateFit {
  std::vector<std::pair<double, double>> points;
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared log2 residuals
};

/// Needs >= 4 points with x > 0 (InvalidInput otherwise); any y <= 0 or
/// non-finite y raises FitInvalid.
RateFit fit_exponent(std::span<const std::pair<double, double>> points);

}  // namespace swreg
