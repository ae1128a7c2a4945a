#pragma once

#include <string>
#include <vector>

#include "swreg/constants.hpp"
#include "swreg/mirror_step.hpp"
#include "swreg/streams.hpp"

namespace swreg {

/// OA: f_t is revealed before the round-t decision. OCO: the decision is
/// played first, then f_t is revealed.
enum class Protocol { kOA, kOCO };

const char* to_string(Protocol protocol);
Protocol parse_protocol(const std::string& text);

class LearningRateSchedule {
 public:
  enum class Kind { kConstant, kTheorem1, kTheorem2, kHeuristicSqrt };

  static LearningRateSchedule constant(double rate);
  static LearningRateSchedule theorem1(const ProblemConstants& c);
  static LearningRateSchedule theorem2(const ProblemConstants& c);
  /// delta / sqrt(t)
  static LearningRateSchedule heuristic_sqrt(double delta);

  Kind kind() const noexcept { return kind_; }
  /// The constant rate, or delta for the heuristic schedule.
  double parameter() const noexcept { return value_; }
  /// Set when theorem1 fell back to mu/L because D = 0.
  bool degenerate_budget() const noexcept { return degenerate_budget_; }

  /// Rate for round t >= 1.
  double rate(long t) const;

 private:
  LearningRateSchedule(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
  bool degenerate_budget_ = false;
};

struct Theorem1Rate {
  double gamma = 0.0;
  // D = 0 makes the budget term vanish; gamma falls back to mu/L.
  bool degenerate_budget = false;
};

/// gamma = min(mu/L, T^{-1/(1+sigma)} D^{1/(1+sigma)}), mu/L = +inf when L = 0.
Theorem1Rate theorem1_rate(const ProblemConstants& c);

/// eta = min(mu/4, sqrt((D + G) / T)).
double theorem2_rate(const ProblemConstants& c);

/// Iterates x_0..x_T plus what each update consumed. Under OA the decision
/// played at round t is x_t; under OCO it is x_{t-1}, since x_t is computed
/// only after f_t is revealed.
struct EpisodeTranscript {
  Protocol protocol = Protocol::kOA;
  std::vector<Vector> decisions;
  std::vector<Vector> gradients;
  std::vector<double> rates;

  long horizon() const noexcept { return static_cast<long>(rates.size()); }
  /// Decision played at round t, 1 <= t <= horizon().
  const Vector& played(long t) const;
  const Vector& initial() const { return decisions.front(); }
};

/// One MD-OA round: observe f_t, step from x_prev along grad f_t(x_prev).
Vector md_oa_step(const RoundLoss& loss, const Vector& x_prev, double gamma, const MirrorMap& map,
                  const Domain& domain);

/// One MD-OCO update: grad_t was queried at the played x_t; returns x_{t+1}.
Vector md_oco_step(const Vector& grad_t, const Vector& x_t, double eta, const MirrorMap& map, const Domain& domain);

/// Runs `horizon` rounds (default: the whole stream) from x0.
EpisodeTranscript run_episode(Protocol protocol, const LossStream& stream, const LearningRateSchedule& schedule,
                              const MirrorMap& map, const Domain& domain, const Vector& x0, long horizon = -1);

EpisodeTranscript run_episode(Protocol protocol, const LossStream& stream, const LearningRateSchedule& schedule,
                              const MirrorMap& map, const Domain& domain);

struct TuneResult {
  double delta = 0.0;
  std::vector<double> tried;
};

struct TuneOptions {
  double sigma = 1.0;
  bool include_x0_transition = false;
  double min_delta = 1e-6;
};

/// Halves delta from delta0 until an episode with rates delta/sqrt(t) passes
/// the convergence test: every loss finite and the average total loss at
/// round T no larger than at round ceil(T/2) (+1e-9).
TuneResult heuristic_tune(Protocol protocol, const LossStream& stream, const Domain& domain, const MirrorMap& map,
                          double delta0, const TuneOptions& options = {});

}  // namespace swreg
