#include "swreg/mirror_step.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "swreg/errors.hpp"

namespace swreg {

namespace {

void check_step_inputs(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                       const Domain& domain) {
  map.check_compatible(domain);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("mirror step: lambda must be positive");
  if (g.size() != domain.dimension() || !g.allFinite()) throw InvalidInput("mirror step: bad gradient");
  domain.require_member(x_ref, "mirror step x_ref");
}

Vector entropy_step(const Vector& g, const Vector& x_ref, double lambda, double floor) {
  const Eigen::Index d = g.size();
  Vector log_w = x_ref.array().log().matrix() - lambda * g;
  Vector w = (log_w.array() - log_w.maxCoeff()).exp().matrix();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return w[a] > w[b]; });

  // The k largest weights are free, the rest sit on the floor.
  double free_mass = 0.0;
  double scale = 0.0;
  for (Eigen::Index k = 1; k <= d; ++k) {
    free_mass += w[order[static_cast<std::size_t>(k - 1)]];
    const double c = (1.0 - static_cast<double>(d - k) * floor) / free_mass;
    const bool smallest_free_ok = c * w[order[static_cast<std::size_t>(k - 1)]] >= floor;
    const bool next_clamped = k == d || c * w[order[static_cast<std::size_t>(k)]] < floor;
    if (smallest_free_ok && next_clamped) {
      scale = c;
      break;
    }
  }
  if (!(scale > 0.0)) throw NumericalError("entropy step: no feasible normalization", 0.0);
  return (scale * w).cwiseMax(floor);
}

}  // namespace

double mirror_objective(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                        const Vector& x) {
  return g.dot(x - x_ref) + bregman_divergence(map, x, x_ref) / lambda;
}

Vector mirror_argmin(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                     const Domain& domain) {
  check_step_inputs(g, x_ref, lambda, map, domain);
  if ((g.array() == 0.0).all()) return x_ref;
  if (map.kind() == MirrorMap::Kind::kSquaredEuclidean) return domain.project(x_ref - lambda * g);
  return entropy_step(g, x_ref, lambda, domain.simplex_floor());
}

Vector mirror_argmin_projected_gradient(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                                        const Domain& domain, const InnerSolverOptions& options) {
  check_step_inputs(g, x_ref, lambda, map, domain);
  if (!(options.step_scale > 0.0)) throw InvalidInput("inner solver: step_scale must be positive");

  const Vector ref_grad = map.gradient(x_ref);
  auto objective = [&](const Vector& x) { return mirror_objective(g, x_ref, lambda, map, x); };
  auto gradient = [&](const Vector& x) -> Vector { return g + (map.gradient(x) - ref_grad) / lambda; };

  Vector x = x_ref;
  double residual = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Vector grad = gradient(x);
    const double fx = objective(x);
    double step = options.step_scale * lambda / map.local_smoothness(x);
    Vector next;
    for (int halvings = 0;; ++halvings) {
      next = domain.project(x - step * grad);
      const Vector delta = next - x;
      const double model = fx + grad.dot(delta) + delta.squaredNorm() / (2.0 * step);
      if (objective(next) <= model + 1e-15 * (1.0 + std::abs(fx)) || halvings >= 60) break;
      step *= 0.5;
    }
    residual = (next - x).norm();
    x = std::move(next);
    if (residual < options.tolerance) return x;
  }
  throw NumericalError("inner solver did not converge after " + std::to_string(options.max_iterations) +
                           " iterations (residual " + std::to_string(residual) + ")",
                       residual);
}

}  // namespace swreg
