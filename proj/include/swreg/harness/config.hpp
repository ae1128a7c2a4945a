#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "swreg/algorithms.hpp"

namespace swreg {

enum class StreamKind { kRademacher, kDriftingLogistic, kCsv, kConstant };
enum class RateMode { kTheorem, kHeuristic };

const char* to_string(StreamKind kind);
const char* to_string(RateMode mode);

/// Everything an experiment needs. The file form is one `key = value` per
/// line; '#' starts a comment line. See README for the key list.
struct ExperimentConfig {
  std::vector<Protocol> protocols{Protocol::kOA, Protocol::kOCO};

  StreamKind stream = StreamKind::kDriftingLogistic;
  int dimension = 50;
  long horizon = 1500;
  std::vector<long> horizons;  // sweep-rate only
  int segments = 2;
  double label_noise = 0.05;
  std::string csv_path;

  std::vector<double> sigmas{1.0};
  double budget = 10.0;

  Domain::Kind domain = Domain::Kind::kBall;
  double radius = 5.0;  // ball radius, or half-width of the box [-r, r]^d
  MirrorMap::Kind mirror_map = MirrorMap::Kind::kSquaredEuclidean;

  RateMode rate = RateMode::kHeuristic;
  double delta0 = 10.0;

  std::uint64_t seed = 0;
  int seeds = 10;
  std::string out_dir = "out";

  bool oracle = false;
  int grid_points = 41;
  int budget_buckets = 64;
  bool include_x0_transition = false;

  // Sweep-rate drops the smallest T once when the log2 residual exceeds this.
  double fit_residual_threshold = 0.05;

  // Optional acceptance assertions; a failed one makes the CLI exit with 4.
  std::optional<double> assert_exponent_slack;  // exponent <= theory + slack
  std::optional<double> assert_exponent_gap;    // exponent(larger sigma) <= exponent(smaller) + gap
  std::optional<int> assert_oa_wins_min;        // seeds with OA total <= OCO total, per sigma
  bool assert_diff_nondecreasing = false;       // sweep-sigma diff over sigma

  /// Throws ConfigError naming the offending key.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the key-value form. Unknown or repeated keys and malformed values
/// raise ConfigError with the line number. The result is validated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key, fixed order, shortest round-trip numbers.
/// parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

/// FNV-1a of the canonical text with out_dir blanked, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace swreg
