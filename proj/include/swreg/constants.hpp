#pragma once

#include <span>
#include <string>

#include "swreg/loss.hpp"
#include "swreg/mirror_map.hpp"

namespace swreg {

/// Problem constants: mu (strong convexity of Phi), L (gradient Lipschitz
/// constant of the losses), G (bound on both ||grad f|| and ||grad Phi||),
/// R (with max{B_Phi, ||x-y||^2} <= R^2), switching exponent sigma, path
/// budget D and horizon T.
///
/// L may be zero (linear losses); the step-size rules read mu/L as +inf then.
struct ProblemConstants {
  double mu = 1.0;
  double L = 0.0;
  double G = 1.0;
  double R = 1.0;
  double sigma = 1.0;
  double budget_D = 0.0;
  long horizon_T = 1;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
  std::string describe() const;
};

/// Reads mu from the map, L and the loss part of G from the sample, the map
/// part of G and R from the domain. sigma, D and T are left at their defaults
/// for the caller to fill in.
ProblemConstants estimate_constants(std::span<const RoundLoss> sample, const Domain& domain, const MirrorMap& map);

}  // namespace swreg
