#pragma once

#include "swreg/domain.hpp"

namespace swreg {

/// Distance-generating function Phi. Two maps are supported:
///   squared-euclidean  Phi(x) = 1/2 ||x||^2           (mu = 1, any domain)
///   negative-entropy   Phi(x) = sum_i x_i ln x_i      (mu = 1, simplex only)
class MirrorMap {
 public:
  enum class Kind { kSquaredEuclidean, kNegativeEntropy };

  static MirrorMap squared_euclidean();
  static MirrorMap negative_entropy();

  Kind kind() const noexcept { return kind_; }
  double strong_convexity() const noexcept { return 1.0; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// Smoothness of Phi near x (largest Hessian eigenvalue). Global for the
  /// Euclidean map, 1 / min_i x_i for entropy.
  double local_smoothness(const Vector& x) const;

  /// Bound on ||grad Phi|| over the domain.
  double gradient_bound(const Domain& domain) const;

  /// Bound on B_Phi(x, y) over the domain.
  double bregman_diameter(const Domain& domain) const;

  /// Throws InvalidInput when this map cannot be used with the domain.
  void check_compatible(const Domain& domain) const;

  const char* name() const noexcept;

 private:
  explicit MirrorMap(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// B_Phi(x, y) = Phi(x) - Phi(y) - <grad Phi(y), x - y>, evaluated from that
/// three-term definition. Entropy inputs with a non-positive coordinate raise
/// SingularityError.
double bregman_divergence(const MirrorMap& map, const Vector& x, const Vector& y);

/// Same as above, but validates membership of x and y in the domain first.
double bregman_divergence(const MirrorMap& map, const Domain& domain, const Vector& x, const Vector& y);

}  // namespace swreg
