#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "swreg/loss.hpp"

namespace swreg {

/// Piecewise-constant ground truth for a drifting stream. Segment k covers
/// rounds [starts[k], starts[k+1]) with 1-based round indices.
struct DriftSchedule {
  std::vector<long> starts;
  std::vector<Vector> truths;

  /// `segments` equal-length segments, each with a ground-truth vector drawn
  /// uniformly from the sphere of the given radius.
  static DriftSchedule evenly_split(int d, long T, int segments, double radius, std::uint64_t seed);

  /// Throws InvalidInput unless starts begin at 1, strictly increase, stay
  /// within 1..T and each truth has dimension d.
  void validate(int d, long T) const;

  std::size_t segment_of(long round) const;
};

/// A finite sequence of round losses f_1..f_T, immutable once built.
class LossStream {
 public:
  enum class Kind { kRademacher, kDriftingLogistic, kCsvDataset, kCustom };

  LossStream(Kind kind, std::vector<RoundLoss> losses, std::uint64_t seed = 0, std::string source = {});

  Kind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& source() const noexcept { return source_; }

  long size() const noexcept { return static_cast<long>(losses_.size()); }
  int dimension() const noexcept { return dimension_; }

  /// f_t for 1 <= t <= size(); ProtocolError past the end.
  const RoundLoss& round(long t) const;

  std::span<const RoundLoss> losses() const noexcept { return losses_; }

  /// Copy of the first T rounds.
  LossStream prefix(long T) const;

 private:
  Kind kind_;
  std::vector<RoundLoss> losses_;
  std::uint64_t seed_;
  std::string source_;
  int dimension_;
};

const char* to_string(LossStream::Kind kind);

/// Linear losses f_t(x) = <v_t, x> with i.i.d. Rademacher coordinates.
LossStream rademacher_stream(int d, long T, std::uint64_t seed);

/// Logistic losses on instances drawn uniformly from [-1, 1]^d. Each feature
/// column is then divided by its max absolute value (the same pass the CSV
/// loader applies, so export and reload are lossless), and the label is
/// sign(w_k^T a_t) flipped with probability label_noise.
LossStream drifting_logistic_stream(int d, long T, const DriftSchedule& schedule, double label_noise,
                                    std::uint64_t seed);

/// Rows "label,feature_1,...,feature_d" with label in {-1,+1} or {0,1}.
/// Lines starting with '#' and blank lines are skipped. Columns are scaled
/// by their max absolute value (all-zero columns are left alone).
LossStream load_csv_stream(const std::filesystem::path& path);
LossStream parse_csv_stream(std::istream& in, std::string source = "<stream>");

/// Writes a logistic stream in the dataset format, preceded by a
/// "# seed=...,kind=..." comment line.
void export_csv_stream(const LossStream& stream, std::ostream& out);
void export_csv_stream(const LossStream& stream, const std::filesystem::path& path);

}  // namespace swreg
