#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swreg/cost.hpp"
#include "swreg/harness/config.hpp"
#include "swreg/harness/rate_fit.hpp"
#include "swreg/oracle.hpp"

namespace swreg {

struct HarnessOptions {
  int jobs = 1;
  bool write_files = true;
};

/// Outcome of one acceptance-style assertion declared in the config.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<Check>& checks);

// --- building blocks -------------------------------------------------------

Domain make_domain(const ExperimentConfig& config);
MirrorMap make_map(const ExperimentConfig& config);

/// Stream for horizon T. Synthetic streams take their seeds from
/// derive_seed(config.seed, key + "/stream") and key + "/drift"; csv streams
/// are truncated to T rounds.
LossStream make_stream(const ExperimentConfig& config, long T, const std::string& key);

/// Learning rate for one (protocol, sigma) episode on `stream`.
struct RateChoice {
  LearningRateSchedule schedule = LearningRateSchedule::constant(1.0);
  ProblemConstants constants;
  std::vector<double> tried;  // heuristic deltas, largest first
};

/// Theorem mode: constants are estimated from the whole stream, then
/// theorem1_rate (OA) or theorem2_rate (OCO). Heuristic mode: heuristic_tune
/// from delta0.
RateChoice choose_rate(const ExperimentConfig& config, Protocol protocol, double sigma, const LossStream& stream,
                       const Domain& domain, const MirrorMap& map);

OracleOptions oracle_options(const ExperimentConfig& config, const Domain& domain);

// --- run -------------------------------------------------------------------

struct RunRecord {
  Protocol protocol = Protocol::kOA;
  double sigma = 1.0;
  RateChoice rate;
  AverageLoss final_average;
  double total_cost = 0.0;
  std::optional<double> regret;
  std::string ledger_file;
};

struct ComparatorRecord {
  double sigma = 1.0;
  double total_cost = 0.0;
  double path_length = 0.0;
  std::string file;
};

struct RunResult {
  std::uint64_t stream_seed = 0;
  std::vector<RunRecord> runs;  // protocol-major, then sigma, config order
  std::vector<ComparatorRecord> comparators;
  std::vector<std::string> files;
  std::vector<Check> checks;
};

/// One episode per (protocol, sigma) on a single stream. Writes
/// ledger_<protocol>_sigma<s>.csv, run_summary.csv and manifest.json; with the
/// oracle on and d <= 2 also comparator_sigma<s>.csv and regret_summary.csv.
RunResult run_experiment(const ExperimentConfig& config, const HarnessOptions& options = {});

/// Comparator paths only (the `oracle` subcommand).
RunResult run_oracle(const ExperimentConfig& config, const HarnessOptions& options = {});

// --- sweeps ----------------------------------------------------------------

struct RateSeries {
  Protocol protocol = Protocol::kOA;
  double sigma = 1.0;
  std::vector<long> horizons;
  std::vector<double> mean_regret;
  std::optional<RateFit> fit;
  bool trimmed = false;
  std::string status;  // "ok" or "fit-invalid"
  std::string diagnostic;
};

struct SweepRateResult {
  std::vector<RateSeries> series;  // protocol-major, then sigma
  std::vector<std::string> files;
  std::vector<Check> checks;
};

/// Regret against the DP comparator, averaged over config.seeds streams per
/// T, then fit_exponent over (T, mean regret). Writes rate_points.csv,
/// rate_means.csv, rate_fit.csv and manifest.json.
SweepRateResult sweep_rate(const ExperimentConfig& config, const HarnessOptions& options = {});

/// Exponent the analysis predicts: 1/(sigma+1) for OA, 1/2 for OCO.
double theory_exponent(Protocol protocol, double sigma);

struct SigmaRow {
  double sigma = 1.0;
  double oa_sl = 0.0;
  double oco_sl = 0.0;
  double diff = 0.0;  // oco_sl - oa_sl
  double oa_total = 0.0;
  double oco_total = 0.0;
  int oa_wins = 0;  // seeds with final avg_total(OA) <= avg_total(OCO)
  int seeds = 0;
};

struct SweepSigmaResult {
  std::vector<SigmaRow> rows;
  std::vector<std::string> files;
  std::vector<Check> checks;
};

/// Final average losses of OA and OCO per sigma, seed-means over config.seeds
/// streams. Writes sigma_summary.csv (sigma,oa_sl,oco_sl,diff),
/// sigma_runs.csv and manifest.json.
SweepSigmaResult sweep_sigma(const ExperimentConfig& config, const HarnessOptions& options = {});

extern const char* const kSigmaSummaryHeader;
extern const char* const kRateFitHeader;

}  // namespace swreg
