#include "swreg/harness/rate_fit.hpp"

#include <cmath>
#include <string>

#include "swreg/errors.hpp"
#include "swreg/text.hpp"

namespace swreg {

RateFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw InvalidInput("fit_exponent: need at least 4 points, got " + std::to_string(points.size()));
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("fit_exponent: x must be positive, got " + format_double(x));
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw FitInvalid("fit_exponent: y must be positive, got " + format_double(y) + " at x = " + format_double(x));
    }
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log2(x);
    my += std::log2(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log2(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log2(y) - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit_exponent: all x values coincide");

  RateFit fit;
  fit.points.assign(points.begin(), points.end());
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  for (const auto& [x, y] : points) {
    const double e = std::log2(y) - (fit.intercept + fit.exponent * std::log2(x));
    fit.residual += e * e;
  }
  return fit;
}

}  // namespace swreg
