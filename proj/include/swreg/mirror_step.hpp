#pragma once

#include "swreg/mirror_map.hpp"

namespace swreg {

struct InnerSolverOptions {
  // step = step_scale / L_obj, L_obj = smoothness(Phi) / lambda
  double step_scale = 1.0;
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Objective of the mirror step: <g, x - x_ref> + (1/lambda) B_Phi(x, x_ref).
double mirror_objective(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                        const Vector& x);

/// argmin over the domain of the mirror step objective.
///
/// Squared-Euclidean map: Proj(x_ref - lambda g). Negative entropy on the
/// floored simplex: the KKT solution x_i = max(floor, c * x_ref_i e^{-lambda g_i})
/// with c set so that the coordinates sum to one.
Vector mirror_argmin(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                     const Domain& domain);

/// Generic route for any map: projected gradient with backtracking on the
/// strongly convex objective, stopping once successive iterates are within
/// options.tolerance. Throws NumericalError after max_iterations.
Vector mirror_argmin_projected_gradient(const Vector& g, const Vector& x_ref, double lambda, const MirrorMap& map,
                                        const Domain& domain, const InnerSolverOptions& options = {});

}  // namespace swreg
