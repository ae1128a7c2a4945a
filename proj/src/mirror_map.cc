#include "swreg/mirror_map.hpp"

#include <cmath>

#include "swreg/errors.hpp"

namespace swreg {

MirrorMap MirrorMap::squared_euclidean() { return MirrorMap(Kind::kSquaredEuclidean); }
MirrorMap MirrorMap::negative_entropy() { return MirrorMap(Kind::kNegativeEntropy); }

const char* MirrorMap::name() const noexcept {
  return kind_ == Kind::kSquaredEuclidean ? "squared-euclidean" : "negative-entropy";
}

namespace {

void require_positive(const Vector& x) {
  if (!x.allFinite()) throw InvalidInput("negative-entropy: non-finite coordinate");
  if ((x.array() <= 0.0).any()) {
    throw SingularityError("negative-entropy: coordinates must be strictly positive");
  }
}

}  // namespace

double MirrorMap::value(const Vector& x) const {
  if (kind_ == Kind::kSquaredEuclidean) return 0.5 * x.squaredNorm();
  require_positive(x);
  return (x.array() * x.array().log()).sum();
}

Vector MirrorMap::gradient(const Vector& x) const {
  if (kind_ == Kind::kSquaredEuclidean) return x;
  require_positive(x);
  return (x.array().log() + 1.0).matrix();
}

double MirrorMap::local_smoothness(const Vector& x) const {
  if (kind_ == Kind::kSquaredEuclidean) return 1.0;
  require_positive(x);
  return 1.0 / x.minCoeff();
}

void MirrorMap::check_compatible(const Domain& domain) const {
  if (kind_ == Kind::kNegativeEntropy && domain.kind() != Domain::Kind::kSimplex) {
    throw InvalidInput("negative-entropy mirror map requires the simplex domain");
  }
}

double MirrorMap::gradient_bound(const Domain& domain) const {
  check_compatible(domain);
  if (kind_ == Kind::kSquaredEuclidean) return domain.max_norm();
  // sum_i (1 + ln x_i)^2 is convex on (0, 1], so its maximum over the
  // floored simplex sits at a vertex.
  const double eps = domain.simplex_floor();
  const int d = domain.dimension();
  const double small = 1.0 + std::log(eps);
  const double big = 1.0 + std::log(1.0 - eps * (d - 1));
  return std::sqrt((d - 1) * small * small + big * big);
}

double MirrorMap::bregman_diameter(const Domain& domain) const {
  check_compatible(domain);
  if (kind_ == Kind::kSquaredEuclidean) {
    const double diam = domain.diameter();
    return 0.5 * diam * diam;
  }
  // KL(x || y) = sum x_i ln(x_i / y_i) <= ln(1 / min_i y_i)
  return -std::log(domain.simplex_floor());
}

double bregman_divergence(const MirrorMap& map, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw InvalidInput("bregman_divergence: dimension mismatch");
  if (map.kind() == MirrorMap::Kind::kSquaredEuclidean) {
    if (!x.allFinite() || !y.allFinite()) throw InvalidInput("bregman_divergence: non-finite input");
    return 0.5 * (x - y).squaredNorm();
  }
  const double value = map.value(x) - map.value(y) - map.gradient(y).dot(x - y);
  // the three-term form can dip a few ulps below zero near the diagonal
  return value < 0.0 ? 0.0 : value;
}

double bregman_divergence(const MirrorMap& map, const Domain& domain, const Vector& x, const Vector& y) {
  map.check_compatible(domain);
  domain.require_member(x, "bregman_divergence x");
  domain.require_member(y, "bregman_divergence y");
  return bregman_divergence(map, x, y);
}

}  // namespace swreg
