#include "swreg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swreg/errors.hpp"

namespace swreg {

void ProblemConstants::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(mu)) throw InvalidInput("constants: mu must be positive");
  if (!(std::isfinite(L) && L >= 0.0)) throw InvalidInput("constants: L must be nonnegative");
  if (!positive(G)) throw InvalidInput("constants: G must be positive");
  if (!positive(R)) throw InvalidInput("constants: R must be positive");
  if (!(sigma >= 1.0 && sigma <= 2.0)) throw InvalidInput("constants: sigma must lie in [1, 2]");
  if (!(std::isfinite(budget_D) && budget_D >= 0.0)) throw InvalidInput("constants: D must be nonnegative");
  if (horizon_T < 1) throw InvalidInput("constants: T must be >= 1");
}

std::string ProblemConstants::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "mu=" << mu << " L=" << L << " G=" << G << " R=" << R << " sigma=" << sigma << " D=" << budget_D
     << " T=" << horizon_T;
  return os.str();
}

ProblemConstants estimate_constants(std::span<const RoundLoss> sample, const Domain& domain, const MirrorMap& map) {
  if (sample.empty()) throw InvalidInput("estimate_constants: empty sample");
  map.check_compatible(domain);

  ProblemConstants c;
  c.mu = map.strong_convexity();
  double loss_g = 0.0;
  for (const RoundLoss& loss : sample) {
    c.L = std::max(c.L, loss.lipschitz_gradient());
    loss_g = std::max(loss_g, loss.gradient_bound(domain));
  }
  c.G = std::max(loss_g, map.gradient_bound(domain));
  const double diam = domain.diameter();
  c.R = std::sqrt(std::max(diam * diam, map.bregman_diameter(domain)));
  c.horizon_T = static_cast<long>(sample.size());
  return c;
}

}  // namespace swreg
