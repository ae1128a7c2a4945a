#include "swreg/cost.hpp"

#include <cmath>
#include <ostream>

#include "swreg/errors.hpp"
#include "swreg/oracle.hpp"
#include "swreg/text.hpp"

namespace swreg {

const char* const kLedgerCsvHeader =
    "round,operating,switching,cum_operating,cum_switching,avg_operating,avg_switching,avg_total";

double switching_cost(const Vector& x_a, const Vector& x_b, double sigma) {
  if (!(sigma >= 1.0 && sigma <= 2.0)) throw InvalidInput("switching_cost: sigma must lie in [1, 2]");
  if (x_a.size() != x_b.size()) throw InvalidInput("switching_cost: dimension mismatch");
  const double n = (x_b - x_a).norm();
  return sigma == 1.0 ? n : std::pow(n, sigma);
}

double CostLedger::switching_at(long t) const {
  if (t < 1 || t > horizon()) throw InvalidInput("switching_at: round out of range");
  if (t == 1) return include_x0_transition ? initial_switching : 0.0;
  return switching[static_cast<std::size_t>(t - 2)];
}

double CostLedger::total_operating() const {
  double sum = 0.0;
  for (double v : operating) sum += v;
  return sum;
}

double CostLedger::total_switching() const {
  double sum = include_x0_transition ? initial_switching : 0.0;
  for (double v : switching) sum += v;
  return sum;
}

CostLedger ledger_from_transcript(const EpisodeTranscript& transcript, const LossStream& stream, double sigma,
                                  bool include_x0_transition) {
  if (!(sigma >= 1.0 && sigma <= 2.0)) throw InvalidInput("ledger: sigma must lie in [1, 2]");
  const long T = transcript.horizon();
  if (T < 1 || T != stream.size()) {
    throw InvalidInput("ledger: transcript has " + std::to_string(T) + " rounds, stream has " +
                       std::to_string(stream.size()));
  }
  if (static_cast<long>(transcript.decisions.size()) != T + 1) {
    throw InvalidInput("ledger: transcript must hold x_0..x_T");
  }
  CostLedger ledger;
  ledger.sigma = sigma;
  ledger.include_x0_transition = include_x0_transition;
  ledger.operating.reserve(static_cast<std::size_t>(T));
  ledger.switching.reserve(static_cast<std::size_t>(T - 1));
  for (long t = 1; t <= T; ++t) {
    const Vector& x = transcript.played(t);
    ledger.operating.push_back(stream.round(t).value(x));
    if (t >= 2) ledger.switching.push_back(switching_cost(transcript.played(t - 1), x, sigma));
  }
  ledger.initial_switching = switching_cost(transcript.initial(), transcript.played(1), sigma);
  return ledger;
}

AverageLoss average_loss(const CostLedger& ledger, long t) {
  if (t < 1 || t > ledger.horizon()) throw InvalidInput("average_loss: round out of range");
  double op = 0.0;
  double sw = 0.0;
  for (long l = 1; l <= t; ++l) {
    op += ledger.operating[static_cast<std::size_t>(l - 1)];
    sw += ledger.switching_at(l);
  }
  const double n = static_cast<double>(t);
  return {op / n, sw / n, op / n + sw / n};
}

std::vector<AverageLoss> average_loss_curve(const CostLedger& ledger) {
  std::vector<AverageLoss> curve;
  curve.reserve(static_cast<std::size_t>(ledger.horizon()));
  double op = 0.0;
  double sw = 0.0;
  for (long l = 1; l <= ledger.horizon(); ++l) {
    op += ledger.operating[static_cast<std::size_t>(l - 1)];
    sw += ledger.switching_at(l);
    const double n = static_cast<double>(l);
    curve.push_back({op / n, sw / n, op / n + sw / n});
  }
  return curve;
}

double dynamic_regret(const CostLedger& ledger, const ComparatorPath& comparator) {
  if (ledger.sigma != comparator.sigma) throw InvalidInput("dynamic_regret: sigma mismatch");
  if (ledger.include_x0_transition != comparator.include_x0_transition) {
    throw InvalidInput("dynamic_regret: transition convention mismatch");
  }
  if (ledger.horizon() != static_cast<long>(comparator.points.size())) {
    throw InvalidInput("dynamic_regret: horizon mismatch");
  }
  return ledger.total() - comparator.total_cost;
}

void write_ledger_csv(const CostLedger& ledger, std::ostream& out) {
  out << kLedgerCsvHeader << '\n';
  double cum_op = 0.0;
  double cum_sw = 0.0;
  for (long t = 1; t <= ledger.horizon(); ++t) {
    const double op = ledger.operating[static_cast<std::size_t>(t - 1)];
    const double sw = ledger.switching_at(t);
    cum_op += op;
    cum_sw += sw;
    const double n = static_cast<double>(t);
    out << t << ',' << format_double(op) << ',' << format_double(sw) << ',' << format_double(cum_op) << ','
        << format_double(cum_sw) << ',' << format_double(cum_op / n) << ',' << format_double(cum_sw / n) << ','
        << format_double(cum_op / n + cum_sw / n) << '\n';
  }
}

}  // namespace swreg
