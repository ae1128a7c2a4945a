#pragma once

#include <Eigen/Core>

#include <string>

namespace swreg {

using Vector = Eigen::VectorXd;

/// A per-round decision x_t. Kept as a plain Eigen vector; membership and
/// finiteness are checked against the Domain that produced it.
using DecisionPoint = Vector;

bool all_finite(const Vector& v);

/// Closed convex feasible set. Ball and box domains contain the origin; the
/// simplex domain carries an interior floor so that the entropy mirror map
/// keeps a bounded gradient.
class Domain {
 public:
  enum class Kind { kBall, kBox, kSimplex };

  static constexpr double kDefaultSimplexFloor = 1e-6;

  static Domain ball(int dimension, double radius);
  static Domain box(Vector lower, Vector upper);
  static Domain simplex(int dimension, double floor = kDefaultSimplexFloor);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  double radius() const noexcept { return radius_; }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  double simplex_floor() const noexcept { return floor_; }

  bool contains(const Vector& x, double tol = 1e-12) const;

  /// Euclidean projection. Points already inside (including the tie
  /// ||x|| == radius on a ball) are returned unchanged.
  Vector project(const Vector& x) const;

  /// Upper bound on ||x - y|| for x, y in the domain.
  double diameter() const;

  /// Largest ||x|| over the domain.
  double max_norm() const;

  /// Starting decision x_0: the origin, or the barycenter for the simplex.
  Vector initial_point() const;

  /// Throws InvalidInput unless x has the right size, is finite and lies in
  /// the domain (within tol).
  void require_member(const Vector& x, const char* what, double tol = 1e-9) const;

  std::string describe() const;

 private:
  Domain() = default;

  Kind kind_ = Kind::kBall;
  int dimension_ = 0;
  double radius_ = 0.0;
  double floor_ = 0.0;
  Vector lower_;
  Vector upper_;
};

}  // namespace swreg
