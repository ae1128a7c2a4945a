#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "swreg/algorithms.hpp"

namespace swreg {

struct ComparatorPath;

/// ||x_b - x_a||_2^sigma, sigma in [1, 2].
double switching_cost(const Vector& x_a, const Vector& x_b, double sigma);

/// Operating and switching costs of the decisions played over an episode.
///
/// switching[k] is the cost of moving from the decision played at round k+1
/// to the one played at round k+2 (T-1 entries). The x_0 -> (round-1 decision)
/// transition is kept apart and only counted when include_x0_transition is set.
struct CostLedger {
  double sigma = 1.0;
  bool include_x0_transition = false;
  std::vector<double> operating;
  std::vector<double> switching;
  double initial_switching = 0.0;

  long horizon() const noexcept { return static_cast<long>(operating.size()); }
  /// Switching charged to round t (the move into the round-t decision).
  double switching_at(long t) const;
  double total_operating() const;
  double total_switching() const;
  double total() const { return total_operating() + total_switching(); }
};

CostLedger ledger_from_transcript(const EpisodeTranscript& transcript, const LossStream& stream, double sigma,
                                  bool include_x0_transition = false);

struct AverageLoss {
  double operating = 0.0;
  double switching = 0.0;
  double total = 0.0;
};

/// Running averages over rounds 1..t.
AverageLoss average_loss(const CostLedger& ledger, long t);

/// All T running averages in one pass.
std::vector<AverageLoss> average_loss_curve(const CostLedger& ledger);

/// cost(A) - cost(A*). Both sides must share sigma, horizon and transition
/// convention.
double dynamic_regret(const CostLedger& ledger, const ComparatorPath& comparator);

/// round,operating,switching,cum_operating,cum_switching,avg_operating,avg_switching,avg_total
void write_ledger_csv(const CostLedger& ledger, std::ostream& out);

extern const char* const kLedgerCsvHeader;

}  // namespace swreg
