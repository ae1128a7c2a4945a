#include "swreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "swreg/cost.hpp"
#include "swreg/errors.hpp"
#include "swreg/text.hpp"

namespace swreg {

// --- grid ------------------------------------------------------------------

GridSpec::GridSpec(const Domain& domain, int points_per_axis, int budget_buckets)
    : domain_(domain), dimension_(domain.dimension()), m_(points_per_axis), K_(budget_buckets) {
  if (domain.kind() == Domain::Kind::kSimplex) throw InvalidInput("grid: simplex domains are not supported");
  if (dimension_ < 1 || dimension_ > 2) throw InvalidInput("grid: the oracle supports d = 1 or d = 2 only");
  if (m_ < 2) throw InvalidInput("grid: need at least 2 points per axis");
  if (K_ < 1) throw InvalidInput("grid: need at least 1 budget bucket");

  Vector lo(dimension_);
  Vector hi(dimension_);
  if (domain.kind() == Domain::Kind::kBall) {
    lo.setConstant(-domain.radius());
    hi.setConstant(domain.radius());
  } else {
    lo = domain.lower();
    hi = domain.upper();
  }
  auto axis = [&](int k, int i) { return lo[k] + ((hi[k] - lo[k]) * i) / (m_ - 1); };
  spacing_ = ((hi - lo) / (m_ - 1)).minCoeff();

  if (dimension_ == 1) {
    for (int i = 0; i < m_; ++i) points_.push_back(Vector::Constant(1, axis(0, i)));
  } else {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        Vector p(2);
        p << axis(0, i), axis(1, j);
        if (domain.contains(p, 1e-12)) points_.push_back(std::move(p));
      }
    }
  }
}

std::optional<std::size_t> GridSpec::find(const Vector& x) const {
  if (x.size() != dimension_) return std::nullopt;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if ((points_[i] - x).cwiseAbs().maxCoeff() <= 1e-12) return i;
  }
  return std::nullopt;
}

// --- canonical cost --------------------------------------------------------

double comparator_cost(std::span<const RoundLoss> losses, std::span<const Vector> points, double sigma,
                       const std::optional<Vector>& start) {
  if (losses.size() != points.size() || points.empty()) throw InvalidInput("comparator_cost: length mismatch");
  double acc = start ? switching_cost(*start, points[0], sigma) + losses[0].value(points[0])
                     : losses[0].value(points[0]);
  for (std::size_t t = 1; t < points.size(); ++t) {
    acc = acc + (switching_cost(points[t - 1], points[t], sigma) + losses[t].value(points[t]));
  }
  return acc;
}

double path_length(std::span<const Vector> points, const std::optional<Vector>& start) {
  if (points.empty()) return 0.0;
  double len = start ? (points[0] - *start).norm() : 0.0;
  for (std::size_t t = 1; t < points.size(); ++t) len += (points[t] - points[t - 1]).norm();
  return len;
}

// --- dynamic program -------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DpProblem {
  std::size_t cells = 0;
  std::size_t T = 0;
  long budget_states = 0;       // B + 1
  std::vector<long> quanta;     // cells x cells, quanta[i * cells + j]
  std::vector<double> switch_cost;
  std::vector<long> start_quanta;
  std::vector<double> start_cost;
  bool has_start = false;
};

void check_common(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma) {
  if (losses.empty()) throw InvalidInput("oracle: need T >= 1");
  if (!(D >= 0.0) || !std::isfinite(D)) throw InvalidInput("oracle: budget D must be finite and >= 0");
  if (!(sigma >= 1.0 && sigma <= 2.0)) throw InvalidInput("oracle: sigma must lie in [1, 2]");
  for (const RoundLoss& loss : losses) {
    if (loss.dimension() != grid.dimension()) throw InvalidInput("oracle: loss/grid dimension mismatch");
  }
}

DpProblem build_problem(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                        const OracleOptions& options) {
  check_common(losses, grid, D, sigma);
  DpProblem p;
  p.cells = grid.size();
  p.T = losses.size();
  p.has_start = options.start.has_value();

  std::optional<std::size_t> start_cell;
  if (p.has_start) {
    start_cell = grid.find(*options.start);
    if (!start_cell) throw InvalidInput("oracle: start point is not on the grid");
  }

  const std::size_t C = p.cells;
  p.quanta.resize(C * C);
  p.switch_cost.resize(C * C);
  long budget = 0;
  if (grid.dimension() == 1) {
    // Steps are integer multiples of the spacing h; a quantum of h / c keeps
    // the accounting exact while never being coarser than D / K.
    const double h = grid.spacing();
    const long c = D > 0.0 ? std::max(1L, static_cast<long>(std::ceil(h * grid.budget_buckets() / D))) : 1L;
    const double q = h / static_cast<double>(c);
    const long moves = static_cast<long>(p.T) - 1 + (p.has_start ? 1 : 0);
    const long useful = c * static_cast<long>(C - 1) * std::max(moves, 0L);
    budget = D > 0.0 ? std::min(static_cast<long>(std::floor(D / q + 1e-9)), useful) : 0;
    for (std::size_t i = 0; i < C; ++i) {
      for (std::size_t j = 0; j < C; ++j) {
        const long diff = static_cast<long>(i > j ? i - j : j - i);
        p.quanta[i * C + j] = diff * c;
      }
    }
  } else {
    const double q = D > 0.0 ? D / grid.budget_buckets() : 0.0;
    budget = D > 0.0 ? grid.budget_buckets() : 0;
    for (std::size_t i = 0; i < C; ++i) {
      for (std::size_t j = 0; j < C; ++j) {
        const double len = (grid.point(i) - grid.point(j)).norm();
        long k = 0;
        if (i != j) k = q > 0.0 ? static_cast<long>(std::ceil(len / q - 1e-9)) : budget + 1;
        p.quanta[i * C + j] = std::max(k, i != j ? 1L : 0L);
      }
    }
  }
  for (std::size_t i = 0; i < C; ++i) {
    for (std::size_t j = 0; j < C; ++j) {
      p.switch_cost[i * C + j] = switching_cost(grid.point(i), grid.point(j), sigma);
    }
  }
  p.budget_states = budget + 1;

  if (p.has_start) {
    p.start_quanta.resize(C);
    p.start_cost.resize(C);
    for (std::size_t j = 0; j < C; ++j) {
      p.start_quanta[j] = p.quanta[*start_cell * C + j];
      p.start_cost[j] = switching_cost(*options.start, grid.point(j), sigma);
    }
  }

  const double states = static_cast<double>(C) * static_cast<double>(p.budget_states) * static_cast<double>(p.T);
  if (states > options.state_cap) {
    throw ResourceError("oracle: " + format_double(states) + " states exceed the cap of " +
                        format_double(options.state_cap) + "; reduce grid points, budget buckets or T");
  }
  return p;
}

void loss_values(std::span<const RoundLoss> losses, const GridSpec& grid, std::size_t t, std::vector<double>& out) {
  out.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = losses[t].value(grid.point(j));
}

void first_round(const DpProblem& p, const std::vector<double>& f, std::vector<double>& table) {
  const long B1 = p.budget_states;
  std::fill(table.begin(), table.end(), kInf);
  for (std::size_t j = 0; j < p.cells; ++j) {
    if (p.has_start) {
      const long k = p.start_quanta[j];
      if (k < B1) table[j * B1 + k] = p.start_cost[j] + f[j];
    } else {
      table[j * B1] = f[j];
    }
  }
}

// One DP round: next[j][u + k_ij] = min over i of cur[i][u] + (c_ij + f[j]).
void advance(const DpProblem& p, const std::vector<double>& f, const double* cur, double* next) {
  const long B1 = p.budget_states;
  const std::size_t C = p.cells;
  std::fill(next, next + C * B1, kInf);
  for (std::size_t i = 0; i < C; ++i) {
    const double* src = cur + i * B1;
    long lo = 0;
    while (lo < B1 && src[lo] == kInf) ++lo;
    if (lo == B1) continue;
    long hi = B1 - 1;
    while (src[hi] == kInf) --hi;
    for (std::size_t j = 0; j < C; ++j) {
      const long k = p.quanta[i * C + j];
      if (k + lo >= B1) continue;
      const double add = p.switch_cost[i * C + j] + f[j];
      double* dst = next + j * B1 + k;
      const long end = std::min(hi, B1 - 1 - k);
      for (long u = lo; u <= end; ++u) {
        const double v = src[u] + add;
        dst[u] = v < dst[u] ? v : dst[u];
      }
    }
  }
}

}  // namespace

double offline_optimum_cost(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                            const OracleOptions& options) {
  const DpProblem p = build_problem(losses, grid, D, sigma, options);
  const std::size_t size = p.cells * static_cast<std::size_t>(p.budget_states);
  std::vector<double> cur(size);
  std::vector<double> next(size);
  std::vector<double> f;
  loss_values(losses, grid, 0, f);
  first_round(p, f, cur);
  for (std::size_t t = 1; t < p.T; ++t) {
    loss_values(losses, grid, t, f);
    advance(p, f, cur.data(), next.data());
    cur.swap(next);
  }
  const double best = *std::min_element(cur.begin(), cur.end());
  if (!std::isfinite(best)) throw std::logic_error("oracle: no feasible path (the static path always is)");
  return best;
}

ComparatorPath offline_optimum_dp(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                                  const OracleOptions& options) {
  const DpProblem p = build_problem(losses, grid, D, sigma, options);
  const long B1 = p.budget_states;
  const std::size_t layer = p.cells * static_cast<std::size_t>(B1);
  if (static_cast<double>(layer) * static_cast<double>(p.T) > 6e7) {
    throw ResourceError("oracle: path reconstruction needs " + std::to_string(layer * p.T) +
                        " stored states; use the cost-only oracle or reduce grid points, buckets or T");
  }
  std::vector<double> tables(layer * p.T);
  std::vector<double> f;
  loss_values(losses, grid, 0, f);
  std::vector<double> first(layer);
  first_round(p, f, first);
  std::copy(first.begin(), first.end(), tables.begin());
  for (std::size_t t = 1; t < p.T; ++t) {
    loss_values(losses, grid, t, f);
    advance(p, f, tables.data() + (t - 1) * layer, tables.data() + t * layer);
  }

  // lowest cell, then lowest consumed budget, among the minima
  const double* last = tables.data() + (p.T - 1) * layer;
  std::size_t cell = 0;
  long used = 0;
  double best = kInf;
  for (std::size_t j = 0; j < p.cells; ++j) {
    for (long u = 0; u < B1; ++u) {
      if (last[j * B1 + u] < best) {
        best = last[j * B1 + u];
        cell = j;
        used = u;
      }
    }
  }
  if (!std::isfinite(best)) throw std::logic_error("oracle: no feasible path (the static path always is)");

  std::vector<std::size_t> cells(p.T);
  cells[p.T - 1] = cell;
  for (std::size_t t = p.T - 1; t >= 1; --t) {
    loss_values(losses, grid, t, f);
    const double* prev = tables.data() + (t - 1) * layer;
    const double target = tables[t * layer + cell * B1 + used];
    bool found = false;
    for (std::size_t i = 0; i < p.cells && !found; ++i) {
      const long k = p.quanta[i * p.cells + cell];
      if (k > used) continue;
      if (prev[i * B1 + used - k] + (p.switch_cost[i * p.cells + cell] + f[cell]) == target) {
        cell = i;
        used -= k;
        found = true;
      }
    }
    if (!found) throw std::logic_error("oracle: backtracking lost the optimal path");
    cells[t - 1] = cell;
  }

  ComparatorPath path;
  path.cells = cells;
  for (std::size_t c : cells) path.points.push_back(grid.point(c));
  path.budget_D = D;
  path.sigma = sigma;
  path.include_x0_transition = p.has_start;
  path.path_length = path_length(path.points, options.start);
  path.total_cost = comparator_cost(losses, path.points, sigma, options.start);
  return path;
}

// --- exhaustive enumeration ------------------------------------------------

ComparatorPath exhaustive_optimum(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                                  const OracleOptions& options) {
  check_common(losses, grid, D, sigma);
  const std::size_t C = grid.size();
  const std::size_t T = losses.size();
  if (T * std::log10(static_cast<double>(C)) > 7.0 + 1e-12) {
    throw ResourceError("exhaustive oracle: " + std::to_string(C) + "^" + std::to_string(T) +
                        " paths exceed the 1e7 cap");
  }
  const double limit = D + 1e-9 * std::max(1.0, D);

  std::vector<std::vector<double>> f(T);
  for (std::size_t t = 0; t < T; ++t) loss_values(losses, grid, t, f[t]);

  std::vector<std::size_t> current(T);
  std::vector<std::size_t> best_cells;
  double best = kInf;

  // depth-first in lexicographic order; the fold matches comparator_cost
  auto visit = [&](auto&& self, std::size_t t, double acc, double len) -> void {
    for (std::size_t j = 0; j < C; ++j) {
      double a = 0.0;
      double l = 0.0;
      if (t == 0) {
        if (options.start) {
          a = switching_cost(*options.start, grid.point(j), sigma) + f[0][j];
          l = (grid.point(j) - *options.start).norm();
        } else {
          a = f[0][j];
        }
      } else {
        const Vector& prev = grid.point(current[t - 1]);
        a = acc + (switching_cost(prev, grid.point(j), sigma) + f[t][j]);
        l = len + (grid.point(j) - prev).norm();
      }
      if (l > limit) continue;
      current[t] = j;
      if (t + 1 == T) {
        if (a < best) {
          best = a;
          best_cells = current;
        }
      } else {
        self(self, t + 1, a, l);
      }
    }
  };
  visit(visit, 0, 0.0, 0.0);
  if (best_cells.empty()) throw std::logic_error("exhaustive oracle: no feasible path");

  ComparatorPath path;
  path.cells = best_cells;
  for (std::size_t c : best_cells) path.points.push_back(grid.point(c));
  path.budget_D = D;
  path.sigma = sigma;
  path.include_x0_transition = options.start.has_value();
  path.path_length = path_length(path.points, options.start);
  path.total_cost = comparator_cost(losses, path.points, sigma, options.start);
  return path;
}

// --- lower-bound construction ----------------------------------------------

ComparatorPath lower_bound_comparator(std::span<const Vector> v_stream, double R, double D, double sigma) {
  const std::size_t T = v_stream.size();
  if (T < 2 || T % 2 != 0) throw InvalidInput("lower_bound_comparator: T must be even and positive");
  if (!(R > 0.0)) throw InvalidInput("lower_bound_comparator: R must be positive");
  if (!(D >= 0.0)) throw InvalidInput("lower_bound_comparator: D must be >= 0");
  const int d = static_cast<int>(v_stream.front().size());
  const std::size_t half = T / 2;
  const std::size_t N = std::max<std::size_t>(1, std::min(static_cast<std::size_t>(std::floor(D / R)), half));

  std::vector<Vector> points(T, Vector::Zero(d));
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t begin = (half * i) / N;
    const std::size_t end = i + 1 == N ? T : (half * (i + 1)) / N;
    Vector sum = Vector::Zero(d);
    for (std::size_t t = begin; t < end; ++t) sum += v_stream[t];
    const double norm = sum.norm();
    const Vector u = norm > 0.0 ? Vector(sum * (0.5 * R / norm)) : Vector::Zero(d);
    for (std::size_t t = begin; t < end; ++t) points[t] = u;
  }

  std::vector<RoundLoss> losses;
  losses.reserve(T);
  for (const Vector& v : v_stream) losses.push_back(RoundLoss::linear(v));

  ComparatorPath path;
  path.points = std::move(points);
  path.budget_D = D;
  path.sigma = sigma;
  path.path_length = path_length(path.points);
  path.total_cost = comparator_cost(losses, path.points, sigma);
  if (path.path_length > static_cast<double>(N - 1) * R + 1e-9) {
    throw std::logic_error("lower_bound_comparator: block path exceeds (N-1)R");
  }
  return path;
}

void write_comparator_csv(const ComparatorPath& path, std::span<const RoundLoss> losses, std::ostream& out) {
  if (losses.size() != path.points.size() || path.points.empty()) {
    throw InvalidInput("comparator csv: length mismatch");
  }
  const Eigen::Index d = path.points.front().size();
  out << "round";
  if (d == 1) {
    out << ",y";
  } else {
    for (Eigen::Index k = 0; k < d; ++k) out << ",y" << (k + 1);
  }
  out << ",step_length,cum_length,cost\n";
  double cum = 0.0;
  for (std::size_t t = 0; t < path.points.size(); ++t) {
    const Vector& y = path.points[t];
    const double step = t == 0 ? 0.0 : (y - path.points[t - 1]).norm();
    cum += step;
    const double sw = t == 0 ? 0.0 : switching_cost(path.points[t - 1], y, path.sigma);
    out << (t + 1);
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << format_double(y[k]);
    out << ',' << format_double(step) << ',' << format_double(cum) << ',' << format_double(sw + losses[t].value(y))
        << '\n';
  }
}

}  // namespace swreg
