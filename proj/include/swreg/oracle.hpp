#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "swreg/loss.hpp"

namespace swreg {

/// Uniform grid over a ball or box domain, d in {1, 2}. Axis points are
/// lo + ((hi - lo) * i) / (m - 1), so going from m to 2m - 1 points per axis
/// yields a grid that contains the coarser one exactly. For a 2-D ball only
/// the points inside the ball are kept. Cells are numbered with the first
/// coordinate varying slowest.
class GridSpec {
 public:
  static constexpr int kDefaultPoints = 41;
  static constexpr int kDefaultBuckets = 64;

  GridSpec(const Domain& domain, int points_per_axis = kDefaultPoints, int budget_buckets = kDefaultBuckets);

  int dimension() const noexcept { return dimension_; }
  int points_per_axis() const noexcept { return m_; }
  int budget_buckets() const noexcept { return K_; }
  const Domain& domain() const noexcept { return domain_; }
  /// Spacing along each axis (the smallest one for a box).
  double spacing() const noexcept { return spacing_; }

  std::size_t size() const noexcept { return points_.size(); }
  const Vector& point(std::size_t index) const { return points_.at(index); }
  const std::vector<Vector>& points() const noexcept { return points_; }

  /// Index of the grid point equal to x (within 1e-12), if any.
  std::optional<std::size_t> find(const Vector& x) const;

 private:
  Domain domain_;
  int dimension_;
  int m_;
  int K_;
  double spacing_ = 0.0;
  std::vector<Vector> points_;
};

/// Offline comparator {y_t} with its path length sum ||y_{t+1} - y_t|| and
/// total cost sum f_t(y_t) + sum ||y_{t+1} - y_t||^sigma.
struct ComparatorPath {
  std::vector<Vector> points;
  std::vector<std::size_t> cells;  // grid indices; empty when not grid-based
  double path_length = 0.0;
  double total_cost = 0.0;
  double budget_D = 0.0;
  double sigma = 1.0;
  bool include_x0_transition = false;
};

struct OracleOptions {
  /// Start point for the proof-style convention: the move start -> y_1 is
  /// charged to both cost and budget. Must be a grid point.
  std::optional<Vector> start;
  /// Upper bound on cells * budget_states * T.
  double state_cap = 1e8;
};

/// Cost of a path, folded in a fixed order: f_1(y_1), then
/// acc + (||y_t - y_{t-1}||^sigma + f_t(y_t)). The DP and the enumerator
/// both accumulate in exactly this order, so their optima agree bit for bit.
double comparator_cost(std::span<const RoundLoss> losses, std::span<const Vector> points, double sigma,
                       const std::optional<Vector>& start = std::nullopt);

/// Sum of ||y_{t+1} - y_t|| (plus ||y_1 - start|| when a start is given).
double path_length(std::span<const Vector> points, const std::optional<Vector>& start = std::nullopt);

/// Minimum-cost grid path with path length <= D, by dynamic programming over
/// (round, cell, consumed budget). Consumed budget is counted in quanta and
/// rounded up per step, so no infeasible path is accepted. On a 1-D grid the
/// quantum is spacing / ceil(spacing * K / D), which divides every step
/// exactly and makes the budget test exact. On a 2-D grid it is D / K.
/// Ties go to the lowest cell index at the last round, then to the lowest
/// predecessor index walking backwards.
ComparatorPath offline_optimum_dp(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                                  const OracleOptions& options = {});

/// Optimal cost only; keeps two rolling tables instead of T.
double offline_optimum_cost(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                            const OracleOptions& options = {});

/// Enumerates every grid path (cells^T <= 1e7), keeps those with exact path
/// length <= D and returns the cheapest (first in lexicographic order on ties).
ComparatorPath exhaustive_optimum(std::span<const RoundLoss> losses, const GridSpec& grid, double D, double sigma,
                                  const OracleOptions& options = {});

/// Block-constant path from the Rademacher lower-bound construction. The
/// first T/2 rounds are split evenly into N = max(1, min(floor(D/R), T/2))
/// blocks; block i holds u_i = (R/2) S_i / ||S_i|| where S_i sums v_t over the
/// block (u_i = 0 when S_i = 0). The last block extends over the second half,
/// so sum_t <v_t, y_t> = (R/2) sum_i ||S_i|| and the path length is at most
/// (N - 1) R <= D.
ComparatorPath lower_bound_comparator(std::span<const Vector> v_stream, double R, double D, double sigma = 1.0);

/// round,y (one column per coordinate: y1,y2,...),step_length,cum_length,cost
void write_comparator_csv(const ComparatorPath& path, std::span<const RoundLoss> losses, std::ostream& out);

}  // namespace swreg
