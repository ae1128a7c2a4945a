#include "swreg/streams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swreg/errors.hpp"
#include "swreg/rng.hpp"
#include "swreg/text.hpp"

namespace swreg {

const char* to_string(LossStream::Kind kind) {
  switch (kind) {
    case LossStream::Kind::kRademacher:
      return "rademacher";
    case LossStream::Kind::kDriftingLogistic:
      return "drifting-logistic";
    case LossStream::Kind::kCsvDataset:
      return "csv-dataset";
    case LossStream::Kind::kCustom:
      return "custom";
  }
  return "unknown";
}

// --- DriftSchedule ---------------------------------------------------------

DriftSchedule DriftSchedule::evenly_split(int d, long T, int segments, double radius, std::uint64_t seed) {
  if (d < 1 || T < 1) throw InvalidInput("drift schedule: need d >= 1 and T >= 1");
  if (segments < 1 || segments > T) throw InvalidInput("drift schedule: need 1 <= segments <= T");
  if (!(radius > 0.0)) throw InvalidInput("drift schedule: radius must be positive");
  DriftSchedule schedule;
  Rng rng(seed);
  for (int k = 0; k < segments; ++k) {
    schedule.starts.push_back(1 + (T * k) / segments);
    Vector w(d);
    for (int i = 0; i < d; ++i) w[i] = rng.normal();
    schedule.truths.push_back(w * (radius / w.norm()));
  }
  return schedule;
}

void DriftSchedule::validate(int d, long T) const {
  if (starts.empty() || starts.size() != truths.size()) {
    throw InvalidInput("drift schedule: need one truth vector per segment");
  }
  if (starts.front() != 1) throw InvalidInput("drift schedule: first segment must start at round 1");
  for (std::size_t k = 1; k < starts.size(); ++k) {
    if (starts[k] <= starts[k - 1]) throw InvalidInput("drift schedule: segment starts must increase");
  }
  if (starts.back() > T) throw InvalidInput("drift schedule: segment starts beyond the horizon");
  for (const Vector& w : truths) {
    if (w.size() != d || !w.allFinite()) throw InvalidInput("drift schedule: bad truth vector");
  }
}

std::size_t DriftSchedule::segment_of(long round) const {
  const auto it = std::upper_bound(starts.begin(), starts.end(), round);
  return static_cast<std::size_t>(std::distance(starts.begin(), it)) - 1;
}

// --- LossStream ------------------------------------------------------------

LossStream::LossStream(Kind kind, std::vector<RoundLoss> losses, std::uint64_t seed, std::string source)
    : kind_(kind), losses_(std::move(losses)), seed_(seed), source_(std::move(source)) {
  if (losses_.empty()) throw InvalidInput("loss stream: no rounds");
  dimension_ = losses_.front().dimension();
  for (const RoundLoss& loss : losses_) {
    if (loss.dimension() != dimension_) throw InvalidInput("loss stream: mixed dimensions");
  }
}

const RoundLoss& LossStream::round(long t) const {
  if (t < 1 || t > size()) {
    throw ProtocolError("loss stream exhausted: round " + std::to_string(t) + " requested, stream has " +
                        std::to_string(size()));
  }
  return losses_[static_cast<std::size_t>(t - 1)];
}

LossStream LossStream::prefix(long T) const {
  if (T < 1 || T > size()) throw InvalidInput("loss stream prefix: bad length");
  return LossStream(kind_, std::vector<RoundLoss>(losses_.begin(), losses_.begin() + T), seed_, source_);
}

// --- generators ------------------------------------------------------------

LossStream rademacher_stream(int d, long T, std::uint64_t seed) {
  if (d < 1 || T < 1) throw InvalidInput("rademacher stream: need d >= 1 and T >= 1");
  Rng rng(seed);
  std::vector<RoundLoss> losses;
  losses.reserve(static_cast<std::size_t>(T));
  for (long t = 0; t < T; ++t) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.sign();
    losses.push_back(RoundLoss::linear(std::move(v)));
  }
  return LossStream(LossStream::Kind::kRademacher, std::move(losses), seed);
}

namespace {

void normalize_columns(std::vector<Vector>& rows) {
  if (rows.empty()) return;
  const Eigen::Index d = rows.front().size();
  Vector scale = Vector::Zero(d);
  for (const Vector& r : rows) scale = scale.cwiseMax(r.cwiseAbs());
  for (Vector& r : rows) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (scale[j] > 0.0) r[j] /= scale[j];
    }
  }
}

}  // namespace

LossStream drifting_logistic_stream(int d, long T, const DriftSchedule& schedule, double label_noise,
                                    std::uint64_t seed) {
  if (d < 1 || T < 1) throw InvalidInput("drifting stream: need d >= 1 and T >= 1");
  if (!(label_noise >= 0.0 && label_noise < 0.5)) throw InvalidInput("drifting stream: noise must be in [0, 0.5)");
  schedule.validate(d, T);

  Rng rng(seed);
  std::vector<Vector> instances;
  instances.reserve(static_cast<std::size_t>(T));
  for (long t = 0; t < T; ++t) {
    Vector a(d);
    for (int i = 0; i < d; ++i) a[i] = rng.uniform(-1.0, 1.0);
    instances.push_back(std::move(a));
  }
  normalize_columns(instances);

  std::vector<RoundLoss> losses;
  losses.reserve(static_cast<std::size_t>(T));
  for (long t = 1; t <= T; ++t) {
    Vector& a = instances[static_cast<std::size_t>(t - 1)];
    const Vector& w = schedule.truths[schedule.segment_of(t)];
    double label = w.dot(a) >= 0.0 ? 1.0 : -1.0;
    if (rng.bernoulli(label_noise)) label = -label;
    losses.push_back(RoundLoss::logistic(std::move(a), label));
  }
  return LossStream(LossStream::Kind::kDriftingLogistic, std::move(losses), seed);
}

// --- CSV -------------------------------------------------------------------

LossStream parse_csv_stream(std::istream& in, std::string source) {
  std::vector<Vector> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (fields.size() < 2) throw ParseError("expected label and at least one feature", line_no);
    if (width < 0) width = static_cast<Eigen::Index>(fields.size()) - 1;
    if (static_cast<Eigen::Index>(fields.size()) - 1 != width) {
      throw ParseError("expected " + std::to_string(width) + " features, got " + std::to_string(fields.size() - 1),
                       line_no);
    }
    double label = 0.0;
    if (!parse_double(fields[0], label)) throw ParseError("bad label '" + std::string(fields[0]) + "'", line_no);
    if (label == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0) throw ParseError("label must be -1, +1, 0 or 1", line_no);
    Vector a(width);
    for (Eigen::Index j = 0; j < width; ++j) {
      const auto field = fields[static_cast<std::size_t>(j + 1)];
      if (!parse_double(field, a[j]) || !std::isfinite(a[j])) {
        throw ParseError("bad feature '" + std::string(field) + "' in column " + std::to_string(j + 1), line_no);
      }
    }
    rows.push_back(std::move(a));
    labels.push_back(label);
  }
  if (rows.empty()) throw InvalidInput("csv stream " + source + ": no data rows");
  normalize_columns(rows);

  std::vector<RoundLoss> losses;
  losses.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) losses.push_back(RoundLoss::logistic(std::move(rows[i]), labels[i]));
  return LossStream(LossStream::Kind::kCsvDataset, std::move(losses), 0, std::move(source));
}

LossStream load_csv_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open csv stream " + path.string());
  return parse_csv_stream(in, path.string());
}

void export_csv_stream(const LossStream& stream, std::ostream& out) {
  out << "# seed=" << stream.seed() << ",kind=" << to_string(stream.kind()) << '\n';
  for (const RoundLoss& loss : stream.losses()) {
    if (!loss.is_logistic()) throw InvalidInput("csv export supports logistic streams only");
    const LogisticLoss& l = loss.as_logistic();
    out << (l.label > 0.0 ? "1" : "-1");
    for (Eigen::Index j = 0; j < l.instance.size(); ++j) out << ',' << format_double(l.instance[j]);
    out << '\n';
  }
}

void export_csv_stream(const LossStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  export_csv_stream(stream, out);
}

}  // namespace swreg
