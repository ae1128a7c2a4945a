// Acceptance runner: one PASS/FAIL line per criterion.
//   swreg_acceptance [--only <name>] [--list]
// Exit status is 0 when every selected criterion passes, 1 otherwise.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "generators.hpp"
#include "swreg/algorithms.hpp"
#include "swreg/constants.hpp"
#include "swreg/harness/config.hpp"
#include "swreg/harness/experiment.hpp"
#include "swreg/harness/output.hpp"
#include "swreg/mirror_step.hpp"
#include "swreg/oracle.hpp"

using namespace swreg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

fs::path config_path(const std::string& name) { return fs::path(SWREG_SOURCE_DIR) / "configs" / name; }

ExperimentConfig load(const std::string& name, const std::string& out) {
  ExperimentConfig c = load_config(config_path(name));
  c.out_dir = (fs::current_path() / "acceptance_out" / out).string();
  fs::remove_all(c.out_dir);
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// DP optimum equals brute-force enumeration on 200 small 1-D instances.
Outcome dp_vs_exhaustive() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(1, "acceptance/dp"));
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    const long T = 1 + static_cast<long>(rng.next() % 5);
    const int m = 2 + static_cast<int>(rng.next() % 6);
    const int K = 1 + static_cast<int>(rng.next() % 16);
    const double sigma = std::array<double, 3>{1.0, 1.5, 2.0}[rng.next() % 3];
    const Domain dom = rng.bernoulli(0.5) ? Domain::ball(1, rng.uniform(0.5, 2.0))
                                          : Domain::box(Vector::Constant(1, -rng.uniform(0.2, 2.0)),
                                                        Vector::Constant(1, rng.uniform(0.2, 2.0)));
    const GridSpec grid(dom, m, K);
    std::vector<RoundLoss> losses;
    for (long t = 0; t < T; ++t) losses.push_back(gen::random_loss(rng, 1));
    const double D = rng.uniform(0.0, 2.0 * dom.diameter());
    const auto dp = offline_optimum_dp(losses, grid, D, sigma);
    const auto ex = exhaustive_optimum(losses, grid, D, sigma);
    if (dp.total_cost != ex.total_cost || dp.path_length > D) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          std::to_string(mismatches) + " mismatches in 200 instances, " + fmt(secs, 3) + " s (limit 30 s)"};
}

// ||x_t - x_{t-1}|| <= 2 G gamma_t / mu on every OA round.
Outcome lemma3() {
  Rng rng(derive_seed(1, "acceptance/lemma3"));
  long rounds = 0, violations = 0;
  double worst = -1e300;
  for (int e = 0; e < 50; ++e) {
    const Domain dom = gen::random_domain(rng);
    const MirrorMap map = gen::map_for(dom);
    std::vector<RoundLoss> losses;
    const bool drift = e % 3 == 0;
    for (int t = 0; t < 1000; ++t) {
      if (drift) {
        // sign flips half way through
        Vector w = Vector::Ones(dom.dimension()) * (t < 500 ? 1.0 : -1.0);
        const Vector a = gen::gaussian(rng, dom.dimension());
        losses.push_back(RoundLoss::logistic(a, w.dot(a) >= 0 ? 1.0 : -1.0));
      } else {
        losses.push_back(gen::random_loss(rng, dom.dimension()));
      }
    }
    const LossStream stream(LossStream::Kind::kCustom, losses);
    const auto c = estimate_constants(stream.losses(), dom, map);
    const auto sched = e % 2 ? LearningRateSchedule::heuristic_sqrt(rng.uniform(0.05, 3.0))
                             : LearningRateSchedule::constant(rng.uniform(0.001, 1.0));
    const auto tr = run_episode(Protocol::kOA, stream, sched, map, dom);
    for (long t = 1; t <= tr.horizon(); ++t) {
      const double step = (tr.decisions[t] - tr.decisions[t - 1]).norm();
      const double bound = 2.0 * c.G * tr.rates[t - 1] / c.mu;
      worst = std::max(worst, step - bound);
      ++rounds;
      if (step > bound + 1e-9) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(rounds) +
                               " rounds, max(step - bound) = " + fmt(worst)};
}

Outcome lemma1_lemma2() {
  Rng rng(derive_seed(1, "acceptance/lemma12"));
  int bad1 = 0, bad2 = 0;
  double worst1 = -1e300, worst2 = -1e300;
  for (int k = 0; k < 10000; ++k) {
    const Domain dom = gen::random_domain(rng);
    const MirrorMap map = gen::map_for(dom);
    const Vector u = gen::in_domain(rng, dom);
    const Vector us = gen::on_boundary_or_inside(rng, dom);
    const Vector g = gen::gaussian(rng, dom.dimension(), 2.0);
    const double lam = rng.uniform(0.05, 3.0);
    const Vector u1 = mirror_argmin(g, u, lam, map, dom);
    const double gap = g.dot(u1 - us) - (bregman_divergence(map, us, u) - bregman_divergence(map, us, u1) -
                                         bregman_divergence(map, u1, u)) / lam;
    worst1 = std::max(worst1, gap);
    if (gap > 1e-8) ++bad1;
  }
  for (int k = 0; k < 10000; ++k) {
    const Domain dom = gen::random_domain(rng);
    const MirrorMap map = gen::map_for(dom);
    const double G = map.gradient_bound(dom);
    const Vector a = gen::on_boundary_or_inside(rng, dom);
    const Vector b = gen::on_boundary_or_inside(rng, dom);
    const Vector x = gen::on_boundary_or_inside(rng, dom);
    const double gap =
        bregman_divergence(map, a, x) - bregman_divergence(map, b, x) - 2.0 * G * (a - b).norm();
    worst2 = std::max(worst2, gap);
    if (gap > 1e-8) ++bad2;
  }
  return {bad1 == 0 && bad2 == 0, "three-point: " + std::to_string(bad1) + "/10000 violations (max gap " +
                                      fmt(worst1) + "); shift: " + std::to_string(bad2) +
                                      "/10000 violations (max gap " + fmt(worst2) + ")"};
}

Outcome closed_form_vs_solver() {
  Rng rng(derive_seed(1, "acceptance/closed-form"));
  const auto euc = MirrorMap::squared_euclidean();
  double worst = 0.0;
  int n = 0;
  for (double scale : {1.0, 0.5}) {
    InnerSolverOptions opts;
    opts.step_scale = scale;
    for (int k = 0; k < 1000; ++k) {
      const Domain dom = gen::random_domain(rng, false);
      const Vector x_ref = gen::on_boundary_or_inside(rng, dom);
      const Vector g = gen::gaussian(rng, dom.dimension(), 3.0);
      const double lam = rng.uniform(0.01, 2.0);
      const Vector a = mirror_argmin(g, x_ref, lam, euc, dom);
      const Vector b = mirror_argmin_projected_gradient(g, x_ref, lam, euc, dom, opts);
      worst = std::max(worst, (a - b).norm());
      ++n;
    }
  }
  return {worst <= 1e-8, std::to_string(n) + " triples, max ||closed - solver|| = " + fmt(worst) + " (tol 1e-8)"};
}

const RateSeries* find_series(const SweepRateResult& r, Protocol p, double sigma) {
  for (const auto& s : r.series)
    if (s.protocol == p && s.sigma == sigma) return &s;
  return nullptr;
}

std::string describe(const RateSeries& s) {
  if (!s.fit) return "fit-invalid (" + s.diagnostic + ")";
  return "exponent " + fmt(s.fit->exponent) + (s.trimmed ? " (smallest T dropped)" : "");
}

Outcome theorem2_exponent() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = load("theorem2_rate.cfg", "theorem2_rate");
  const auto r = sweep_rate(c);
  const double secs = seconds_since(t0);
  const RateSeries* s = find_series(r, Protocol::kOCO, 1.0);
  if (!s) return {false, "no OCO sigma=1 series"};
  const bool ok = s->fit && s->fit->exponent <= 0.60 && secs < 120.0;
  return {ok, "OCO sigma=1 " + describe(*s) + ", limit 0.60; " + fmt(secs, 3) + " s (limit 120 s)"};
}

Outcome theorem1_ordering() {
  const auto c = load("theorem1_sigma.cfg", "theorem1_sigma");
  const auto r = sweep_rate(c);
  const RateSeries* s1 = find_series(r, Protocol::kOA, 1.0);
  const RateSeries* s2 = find_series(r, Protocol::kOA, 2.0);
  if (!s1 || !s2) return {false, "missing OA series"};
  const std::string detail = "OA sigma=1 " + describe(*s1) + "; OA sigma=2 " + describe(*s2);
  if (!s1->fit || !s2->fit) return {false, detail};
  const double e1 = s1->fit->exponent, e2 = s2->fit->exponent;
  const bool ok = e2 <= e1 + 0.05 && e2 <= 1.0 / 3.0 + 0.15;
  return {ok, detail + "; need e2 <= e1 + 0.05 and e2 <= 1/3 + 0.15"};
}

SweepSigmaResult drift_sweep(const std::string& out) {
  static std::map<std::string, SweepSigmaResult> cache;
  auto it = cache.find(out);
  if (it == cache.end()) it = cache.emplace(out, sweep_sigma(load("drift_sigma.cfg", out))).first;
  return it->second;
}

Outcome oa_beats_oco() {
  const auto r = drift_sweep("drift_sigma");
  bool ok = !r.rows.empty();
  std::ostringstream d;
  for (const auto& row : r.rows) {
    ok = ok && row.oa_wins >= 8;
    d << "sigma=" << fmt(row.sigma) << ": OA <= OCO on " << row.oa_wins << "/" << row.seeds << "; ";
  }
  d << "need >= 8/10 per sigma";
  return {ok, d.str()};
}

Outcome switching_difference() {
  const auto r = drift_sweep("drift_sigma");
  bool ok = r.rows.size() >= 2;
  std::ostringstream d;
  d << "diff(oco_sl - oa_sl):";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i > 0 && r.rows[i].diff < r.rows[i - 1].diff) ok = false;
    d << " sigma=" << fmt(r.rows[i].sigma) << " " << fmt(r.rows[i].diff);
  }
  d << (ok ? " (non-decreasing)" : " (not non-decreasing)");
  return {ok, d.str()};
}

std::map<std::string, std::string> csv_files(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") out[e.path().filename().string()] = read_file(e.path());
  return out;
}

// Every acceptance config twice: serial, then with two jobs, into separate dirs.
Outcome determinism() {
  int compared = 0;
  std::vector<std::string> differing;
  auto compare = [&](const std::string& tag, const std::function<void(const ExperimentConfig&, int)>& run,
                     const std::string& cfg) {
    auto a = load(cfg, "det_" + tag + "_a");
    auto b = load(cfg, "det_" + tag + "_b");
    run(a, 1);
    run(b, 2);
    const auto fa = csv_files(a.out_dir), fb = csv_files(b.out_dir);
    if (fa.empty() || fa != fb) differing.push_back(tag);
    compared += static_cast<int>(fa.size());
  };
  auto rate = [](const ExperimentConfig& c, int jobs) { sweep_rate(c, {jobs, true}); };
  auto sigma = [](const ExperimentConfig& c, int jobs) { sweep_sigma(c, {jobs, true}); };
  auto run = [](const ExperimentConfig& c, int jobs) { run_experiment(c, {jobs, true}); };
  compare("theorem2_rate", rate, "theorem2_rate.cfg");
  compare("theorem1_sigma", rate, "theorem1_sigma.cfg");
  compare("drift_sigma", sigma, "drift_sigma.cfg");
  compare("drift_run", run, "drift_run.cfg");
  compare("rademacher_oracle", run, "rademacher_oracle.cfg");
  std::string detail = std::to_string(compared) + " csv files compared across jobs=1 and jobs=2";
  for (const auto& d : differing) detail += "; differs: " + d;
  return {differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle_dp_matches_exhaustive", dp_vs_exhaustive},
      {"lemma3_step_bound", lemma3},
      {"lemma1_lemma2_inequalities", lemma1_lemma2},
      {"euclidean_closed_form_vs_solver", closed_form_vs_solver},
      {"theorem2_rate_exponent", theorem2_exponent},
      {"theorem1_sigma_ordering", theorem1_ordering},
      {"oa_beats_oco_on_drift", oa_beats_oco},
      {"switching_difference_nondecreasing", switching_difference},
      {"determinism", determinism},
  };

  CLI::App app{"acceptance criteria"};
  std::string only;
  bool list = false;
  app.add_option("--only", only, "run a single criterion");
  app.add_flag("--list", list, "print criterion names");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& [name, fn] : criteria) std::printf("%s\n", name.c_str());
    return 0;
  }

  int failed = 0, ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && name != only) continue;
    ++ran;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
