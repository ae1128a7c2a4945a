#include "swreg/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "swreg/errors.hpp"

namespace swreg {

bool all_finite(const Vector& v) { return v.allFinite(); }

Domain Domain::ball(int dimension, double radius) {
  if (dimension < 1) throw InvalidInput("ball domain needs dimension >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be positive");
  Domain d;
  d.kind_ = Kind::kBall;
  d.dimension_ = dimension;
  d.radius_ = radius;
  return d;
}

Domain Domain::box(Vector lower, Vector upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw InvalidInput("box bounds must be nonempty and of equal length");
  }
  if (!lower.allFinite() || !upper.allFinite()) throw InvalidInput("box bounds must be finite");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= 0.0 && 0.0 <= upper[i] && lower[i] < upper[i])) {
      throw InvalidInput("box must satisfy lower < upper and contain the origin");
    }
  }
  Domain d;
  d.kind_ = Kind::kBox;
  d.dimension_ = static_cast<int>(lower.size());
  d.lower_ = std::move(lower);
  d.upper_ = std::move(upper);
  return d;
}

Domain Domain::simplex(int dimension, double floor) {
  if (dimension < 2) throw InvalidInput("simplex domain needs dimension >= 2");
  if (!(floor > 0.0) || floor * dimension >= 1.0) {
    throw InvalidInput("simplex floor must be positive and below 1/d");
  }
  Domain d;
  d.kind_ = Kind::kSimplex;
  d.dimension_ = dimension;
  d.floor_ = floor;
  return d;
}

bool Domain::contains(const Vector& x, double tol) const {
  if (x.size() != dimension_ || !x.allFinite()) return false;
  switch (kind_) {
    case Kind::kBall:
      return x.norm() <= radius_ + tol;
    case Kind::kBox:
      return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
    case Kind::kSimplex:
      return (x.array() >= floor_ - tol).all() && std::abs(x.sum() - 1.0) <= tol * dimension_;
  }
  return false;
}

namespace {

// Projection onto {z >= 0, sum z = mass} by the sort-and-threshold rule.
Vector project_to_scaled_simplex(const Vector& v, double mass) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - mass) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace

Vector Domain::project(const Vector& x) const {
  if (x.size() != dimension_) throw InvalidInput("projection: dimension mismatch");
  switch (kind_) {
    case Kind::kBall: {
      const double n = x.norm();
      if (n <= radius_) return x;
      return x * (radius_ / n);
    }
    case Kind::kBox:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case Kind::kSimplex: {
      if (contains(x, 0.0)) return x;
      const double mass = 1.0 - floor_ * dimension_;
      Vector shifted = x.array() - floor_;
      return (project_to_scaled_simplex(shifted, mass).array() + floor_).matrix();
    }
  }
  return x;
}

double Domain::diameter() const {
  switch (kind_) {
    case Kind::kBall:
      return 2.0 * radius_;
    case Kind::kBox:
      return (upper_ - lower_).norm();
    case Kind::kSimplex:
      return std::sqrt(2.0);
  }
  return 0.0;
}

double Domain::max_norm() const {
  switch (kind_) {
    case Kind::kBall:
      return radius_;
    case Kind::kBox:
      return lower_.cwiseAbs().cwiseMax(upper_.cwiseAbs()).norm();
    case Kind::kSimplex:
      // attained at a vertex of the floored simplex
      return std::sqrt(std::pow(1.0 - floor_ * (dimension_ - 1), 2) + (dimension_ - 1) * floor_ * floor_);
  }
  return 0.0;
}

Vector Domain::initial_point() const {
  if (kind_ == Kind::kSimplex) return Vector::Constant(dimension_, 1.0 / dimension_);
  return Vector::Zero(dimension_);
}

void Domain::require_member(const Vector& x, const char* what, double tol) const {
  if (x.size() != dimension_) {
    throw InvalidInput(std::string(what) + ": expected dimension " + std::to_string(dimension_) + ", got " +
                       std::to_string(x.size()));
  }
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite coordinate");
  if (!contains(x, tol)) throw InvalidInput(std::string(what) + ": point outside " + describe());
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kBall:
      os << "ball(d=" << dimension_ << ", r=" << radius_ << ")";
      break;
    case Kind::kBox:
      os << "box(d=" << dimension_ << ")";
      break;
    case Kind::kSimplex:
      os << "simplex(d=" << dimension_ << ", floor=" << floor_ << ")";
      break;
  }
  return os.str();
}

}  // namespace swreg
