#include "swreg/algorithms.hpp"

#include <cmath>
#include <limits>

#include "swreg/cost.hpp"
#include "swreg/errors.hpp"

namespace swreg {

const char* to_string(Protocol protocol) { return protocol == Protocol::kOA ? "OA" : "OCO"; }

Protocol parse_protocol(const std::string& text) {
  if (text == "OA" || text == "oa") return Protocol::kOA;
  if (text == "OCO" || text == "oco") return Protocol::kOCO;
  throw InvalidInput("unknown protocol '" + text + "' (expected OA or OCO)");
}

// --- rates -----------------------------------------------------------------

Theorem1Rate theorem1_rate(const ProblemConstants& c) {
  c.validate();
  const double mu_over_l = c.L > 0.0 ? c.mu / c.L : std::numeric_limits<double>::infinity();
  if (c.budget_D == 0.0) {
    if (!std::isfinite(mu_over_l)) {
      throw InvalidInput("theorem1_rate: D = 0 and L = 0 leave no finite step size");
    }
    return {mu_over_l, true};
  }
  const double exponent = 1.0 / (1.0 + c.sigma);
  const double budget_term =
      std::pow(static_cast<double>(c.horizon_T), -exponent) * std::pow(c.budget_D, exponent);
  return {std::min(mu_over_l, budget_term), false};
}

double theorem2_rate(const ProblemConstants& c) {
  c.validate();
  return std::min(c.mu / 4.0, std::sqrt((c.budget_D + c.G) / static_cast<double>(c.horizon_T)));
}

LearningRateSchedule LearningRateSchedule::constant(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidInput("learning rate must be positive");
  return {Kind::kConstant, rate};
}

LearningRateSchedule LearningRateSchedule::theorem1(const ProblemConstants& c) {
  const Theorem1Rate r = theorem1_rate(c);
  LearningRateSchedule s(Kind::kTheorem1, r.gamma);
  s.degenerate_budget_ = r.degenerate_budget;
  return s;
}

LearningRateSchedule LearningRateSchedule::theorem2(const ProblemConstants& c) {
  return {Kind::kTheorem2, theorem2_rate(c)};
}

LearningRateSchedule LearningRateSchedule::heuristic_sqrt(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("heuristic delta must be positive");
  return {Kind::kHeuristicSqrt, delta};
}

double LearningRateSchedule::rate(long t) const {
  if (t < 1) throw InvalidInput("learning rate requested for round < 1");
  if (kind_ == Kind::kHeuristicSqrt) return value_ / std::sqrt(static_cast<double>(t));
  return value_;
}

// --- transcript / steps ----------------------------------------------------

const Vector& EpisodeTranscript::played(long t) const {
  if (t < 1 || t > horizon()) throw InvalidInput("played: round out of range");
  const long index = protocol == Protocol::kOA ? t : t - 1;
  return decisions[static_cast<std::size_t>(index)];
}

Vector md_oa_step(const RoundLoss& loss, const Vector& x_prev, double gamma, const MirrorMap& map,
                  const Domain& domain) {
  return mirror_argmin(loss.gradient(x_prev), x_prev, gamma, map, domain);
}

Vector md_oco_step(const Vector& grad_t, const Vector& x_t, double eta, const MirrorMap& map, const Domain& domain) {
  return mirror_argmin(grad_t, x_t, eta, map, domain);
}

EpisodeTranscript run_episode(Protocol protocol, const LossStream& stream, const LearningRateSchedule& schedule,
                              const MirrorMap& map, const Domain& domain, const Vector& x0, long horizon) {
  map.check_compatible(domain);
  domain.require_member(x0, "run_episode x0");
  if (stream.dimension() != domain.dimension()) throw InvalidInput("run_episode: stream/domain dimension mismatch");
  const long T = horizon < 0 ? stream.size() : horizon;
  if (T < 1) throw InvalidInput("run_episode: horizon must be >= 1");

  EpisodeTranscript tr;
  tr.protocol = protocol;
  tr.decisions.reserve(static_cast<std::size_t>(T + 1));
  tr.gradients.reserve(static_cast<std::size_t>(T));
  tr.rates.reserve(static_cast<std::size_t>(T));
  tr.decisions.push_back(x0);

  for (long t = 1; t <= T; ++t) {
    // Both protocols run the same update; they differ in which iterate faces
    // f_t. OA plays the x_t computed here (after seeing f_t), OCO has already
    // committed x_{t-1} before f_t arrives. EpisodeTranscript::played encodes it.
    const Vector& x_prev = tr.decisions.back();
    const double rate = schedule.rate(t);
    const RoundLoss& loss = stream.round(t);
    Vector g = loss.gradient(x_prev);
    Vector next = protocol == Protocol::kOA ? mirror_argmin(g, x_prev, rate, map, domain)
                                            : md_oco_step(g, x_prev, rate, map, domain);
    tr.gradients.push_back(std::move(g));
    tr.rates.push_back(rate);
    tr.decisions.push_back(std::move(next));
  }
  return tr;
}

EpisodeTranscript run_episode(Protocol protocol, const LossStream& stream, const LearningRateSchedule& schedule,
                              const MirrorMap& map, const Domain& domain) {
  return run_episode(protocol, stream, schedule, map, domain, domain.initial_point());
}

// --- heuristic tuning ------------------------------------------------------

namespace {

bool average_loss_converged(const CostLedger& ledger) {
  for (double v : ledger.operating) {
    if (!std::isfinite(v)) return false;
  }
  for (double v : ledger.switching) {
    if (!std::isfinite(v)) return false;
  }
  const long T = ledger.horizon();
  const long mid = (T + 1) / 2;
  return average_loss(ledger, T).total <= average_loss(ledger, mid).total + 1e-9;
}

}  // namespace

TuneResult heuristic_tune(Protocol protocol, const LossStream& stream, const Domain& domain, const MirrorMap& map,
                          double delta0, const TuneOptions& options) {
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) throw InvalidInput("heuristic_tune: delta0 must be positive");
  TuneResult result;
  for (double delta = delta0; delta >= options.min_delta; delta /= 2.0) {
    result.tried.push_back(delta);
    const EpisodeTranscript tr =
        run_episode(protocol, stream, LearningRateSchedule::heuristic_sqrt(delta), map, domain);
    const CostLedger ledger = ledger_from_transcript(tr, stream, options.sigma, options.include_x0_transition);
    if (average_loss_converged(ledger)) {
      result.delta = delta;
      return result;
    }
  }
  throw TuningFailure("heuristic_tune: no delta >= " + std::to_string(options.min_delta) +
                      " made the average loss converge");
}

}  // namespace swreg
