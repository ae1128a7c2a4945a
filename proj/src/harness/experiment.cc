#include "swreg/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "swreg/errors.hpp"
#include "swreg/harness/output.hpp"
#include "swreg/rng.hpp"
#include "swreg/text.hpp"

namespace swreg {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const char* const kSigmaSummaryHeader = "sigma,oa_sl,oco_sl,diff";
const char* const kRateFitHeader = "protocol,sigma,status,exponent,intercept,residual,points_used,trimmed";

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

// Runs fn(0..n-1) on up to `jobs` threads. Results must go to per-index
// slots. If several tasks throw, the lowest index wins so errors are
// reproducible too.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

const char* rate_kind(const LearningRateSchedule& s) {
  switch (s.kind()) {
    case LearningRateSchedule::Kind::kConstant:
      return "constant";
    case LearningRateSchedule::Kind::kTheorem1:
      return "theorem1";
    case LearningRateSchedule::Kind::kTheorem2:
      return "theorem2";
    case LearningRateSchedule::Kind::kHeuristicSqrt:
      return "heuristic";
  }
  return "?";
}

bool oracle_supported(const ExperimentConfig& c, int dimension) {
  return dimension <= 2 && c.domain != Domain::Kind::kSimplex;
}

Json constants_json(const ProblemConstants& c) {
  Json j;
  j["mu"] = c.mu;
  j["L"] = c.L;
  j["G"] = c.G;
  j["R"] = c.R;
  j["sigma"] = c.sigma;
  j["D"] = c.budget_D;
  j["T"] = c.horizon_T;
  return j;
}

Json rate_json(const RateChoice& r) {
  Json j;
  j["kind"] = rate_kind(r.schedule);
  j["value"] = r.schedule.parameter();
  j["degenerate_budget"] = r.schedule.degenerate_budget();
  j["deltas_tried"] = r.tried;
  j["constants"] = constants_json(r.constants);
  return j;
}

Json manifest_base(const char* command, const ExperimentConfig& config) {
  Json j;
  j["command"] = command;
  j["config_hash"] = config_hash(config);
  j["config"] = to_text(config);
  j["master_seed"] = std::to_string(config.seed);
  j["seed_derivation"] = "derive_seed(master, key) = splitmix64(master ^ splitmix64(fnv1a(key)))";
  return j;
}

Json stream_json(const ExperimentConfig& config, const std::string& key, const LossStream& stream) {
  Json j;
  j["key"] = key;
  j["kind"] = to_string(config.stream);
  j["stream_seed"] = std::to_string(derive_seed(config.seed, key + "/stream"));
  if (config.stream == StreamKind::kDriftingLogistic) {
    j["drift_seed"] = std::to_string(derive_seed(config.seed, key + "/drift"));
  }
  j["horizon"] = stream.size();
  j["dimension"] = stream.dimension();
  if (!stream.source().empty()) j["source"] = stream.source();
  return j;
}

std::string ledger_name(Protocol p, double sigma) {
  return std::string("ledger_") + to_string(p) + "_sigma" + sigma_tag(sigma) + ".csv";
}

std::string comparator_name(double sigma) { return "comparator_sigma" + sigma_tag(sigma) + ".csv"; }

class OutputSet {
 public:
  OutputSet(const ExperimentConfig& config, bool enabled) : dir_(config.out_dir), enabled_(enabled) {}
  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  std::vector<std::string> commit() {
    std::vector<std::string> names;
    for (const auto& [name, content] : files_) {
      if (enabled_) write_file_atomic(dir_ / name, content);
      names.push_back(name);
    }
    return names;
  }

 private:
  fs::path dir_;
  bool enabled_;
  std::vector<std::pair<std::string, std::string>> files_;
};

ComparatorPath comparator_dp(const LossStream& stream, const GridSpec& grid, double D, double sigma,
                             const OracleOptions& opts) {
  try {
    return offline_optimum_dp(stream.losses(), grid, D, sigma, opts);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) + " (reduce grid_points, budget_buckets or horizon)");
  }
}

double comparator_cost_only(const LossStream& stream, const GridSpec& grid, double D, double sigma,
                            const OracleOptions& opts) {
  try {
    return offline_optimum_cost(stream.losses(), grid, D, sigma, opts);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) + " (reduce grid_points, budget_buckets or horizons)");
  }
}

std::vector<double> sorted_sigmas(const ExperimentConfig& c) {
  std::vector<double> s = c.sigmas;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

// --- building blocks -------------------------------------------------------

Domain make_domain(const ExperimentConfig& c) {
  switch (c.domain) {
    case Domain::Kind::kBall:
      return Domain::ball(c.dimension, c.radius);
    case Domain::Kind::kBox:
      return Domain::box(Vector::Constant(c.dimension, -c.radius), Vector::Constant(c.dimension, c.radius));
    case Domain::Kind::kSimplex:
      return Domain::simplex(c.dimension);
  }
  throw ConfigError("domain: unsupported kind");
}

MirrorMap make_map(const ExperimentConfig& c) {
  return c.mirror_map == MirrorMap::Kind::kSquaredEuclidean ? MirrorMap::squared_euclidean()
                                                            : MirrorMap::negative_entropy();
}

LossStream make_stream(const ExperimentConfig& c, long T, const std::string& key) {
  const std::uint64_t seed = derive_seed(c.seed, key + "/stream");
  switch (c.stream) {
    case StreamKind::kRademacher:
      return rademacher_stream(c.dimension, T, seed);
    case StreamKind::kConstant: {
      const LossStream one = rademacher_stream(c.dimension, 1, seed);
      std::vector<RoundLoss> losses(static_cast<std::size_t>(T), one.round(1));
      return LossStream(LossStream::Kind::kCustom, std::move(losses), seed, "constant");
    }
    case StreamKind::kDriftingLogistic: {
      if (c.segments > T) throw ConfigError("segments: more segments than rounds");
      const auto schedule =
          DriftSchedule::evenly_split(c.dimension, T, c.segments, c.radius, derive_seed(c.seed, key + "/drift"));
      return drifting_logistic_stream(c.dimension, T, schedule, c.label_noise, seed);
    }
    case StreamKind::kCsv: {
      LossStream full = [&] {
        try {
          return load_csv_stream(c.csv_path);
        } catch (const ParseError& e) {
          throw ConfigError(c.csv_path + ": " + e.what());
        } catch (const InvalidInput& e) {
          throw ConfigError(c.csv_path + ": " + e.what());
        }
      }();
      if (full.dimension() != c.dimension) {
        throw ConfigError("dimension: config says " + std::to_string(c.dimension) + " but " + c.csv_path + " has " +
                          std::to_string(full.dimension()) + " features");
      }
      if (full.size() < T) {
        throw ConfigError("horizon: " + c.csv_path + " has only " + std::to_string(full.size()) + " rows");
      }
      return full.size() == T ? full : full.prefix(T);
    }
  }
  throw ConfigError("stream: unsupported kind");
}

RateChoice choose_rate(const ExperimentConfig& config, Protocol protocol, double sigma, const LossStream& stream,
                       const Domain& domain, const MirrorMap& map) {
  RateChoice choice;
  choice.constants = estimate_constants(stream.losses(), domain, map);
  choice.constants.sigma = sigma;
  choice.constants.budget_D = config.budget;
  choice.constants.horizon_T = stream.size();
  if (config.rate == RateMode::kTheorem) {
    choice.schedule = protocol == Protocol::kOA ? LearningRateSchedule::theorem1(choice.constants)
                                                : LearningRateSchedule::theorem2(choice.constants);
    return choice;
  }
  TuneOptions opts;
  opts.sigma = sigma;
  opts.include_x0_transition = config.include_x0_transition;
  const TuneResult tuned = heuristic_tune(protocol, stream, domain, map, config.delta0, opts);
  choice.schedule = LearningRateSchedule::heuristic_sqrt(tuned.delta);
  choice.tried = tuned.tried;
  return choice;
}

OracleOptions oracle_options(const ExperimentConfig& config, const Domain& domain) {
  OracleOptions opts;
  if (config.include_x0_transition) opts.start = domain.initial_point();
  return opts;
}

double theory_exponent(Protocol protocol, double sigma) {
  return protocol == Protocol::kOA ? 1.0 / (sigma + 1.0) : 0.5;
}

// --- run -------------------------------------------------------------------

RunResult run_experiment(const ExperimentConfig& config, const HarnessOptions& options) {
  config.validate();
  const Domain domain = make_domain(config);
  const MirrorMap map = make_map(config);
  map.check_compatible(domain);
  const std::string key = "run";
  const LossStream stream = make_stream(config, config.horizon, key);
  const bool with_oracle = config.oracle && oracle_supported(config, stream.dimension());

  const std::size_t P = config.protocols.size();
  const std::size_t S = config.sigmas.size();
  std::vector<RunRecord> runs(P * S);
  std::vector<CostLedger> ledgers(P * S);
  std::vector<std::string> ledger_csv(P * S);
  std::vector<ComparatorPath> paths(with_oracle ? S : 0);
  std::vector<std::string> comparator_csv(paths.size());

  std::optional<GridSpec> grid;
  if (with_oracle) grid.emplace(domain, config.grid_points, config.budget_buckets);
  const OracleOptions opts = oracle_options(config, domain);

  parallel_for(P * S + paths.size(), options.jobs, [&](std::size_t i) {
    if (i < P * S) {
      RunRecord& r = runs[i];
      r.protocol = config.protocols[i / S];
      r.sigma = config.sigmas[i % S];
      r.rate = choose_rate(config, r.protocol, r.sigma, stream, domain, map);
      const auto tr = run_episode(r.protocol, stream, r.rate.schedule, map, domain);
      ledgers[i] = ledger_from_transcript(tr, stream, r.sigma, config.include_x0_transition);
      r.final_average = average_loss(ledgers[i], ledgers[i].horizon());
      r.total_cost = ledgers[i].total();
      r.ledger_file = ledger_name(r.protocol, r.sigma);
      std::ostringstream out;
      write_ledger_csv(ledgers[i], out);
      ledger_csv[i] = out.str();
    } else {
      const std::size_t s = i - P * S;
      paths[s] = comparator_dp(stream, *grid, config.budget, config.sigmas[s], opts);
      std::ostringstream out;
      write_comparator_csv(paths[s], stream.losses(), out);
      comparator_csv[s] = out.str();
    }
  });

  RunResult result;
  result.stream_seed = derive_seed(config.seed, key + "/stream");
  OutputSet files(config, options.write_files);
  std::ostringstream summary;
  summary << "protocol,sigma,rate_kind,rate,avg_operating,avg_switching,avg_total,total_cost\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    RunRecord& r = runs[i];
    if (with_oracle) r.regret = dynamic_regret(ledgers[i], paths[i % S]);
    files.add(r.ledger_file, std::move(ledger_csv[i]));
    summary << to_string(r.protocol) << ',' << format_double(r.sigma) << ',' << rate_kind(r.rate.schedule) << ','
            << format_double(r.rate.schedule.parameter()) << ',' << format_double(r.final_average.operating) << ','
            << format_double(r.final_average.switching) << ',' << format_double(r.final_average.total) << ','
            << format_double(r.total_cost) << '\n';
  }
  files.add("run_summary.csv", summary.str());

  if (with_oracle) {
    std::ostringstream regret;
    regret << "protocol,sigma,player_cost,comparator_cost,regret,comparator_path_length\n";
    for (std::size_t s = 0; s < S; ++s) {
      ComparatorRecord c{config.sigmas[s], paths[s].total_cost, paths[s].path_length, comparator_name(config.sigmas[s])};
      files.add(c.file, std::move(comparator_csv[s]));
      result.comparators.push_back(c);
    }
    for (const auto& r : runs) {
      const auto& path = paths[static_cast<std::size_t>(&r - runs.data()) % S];
      regret << to_string(r.protocol) << ',' << format_double(r.sigma) << ',' << format_double(r.total_cost) << ','
             << format_double(path.total_cost) << ',' << format_double(*r.regret) << ','
             << format_double(path.path_length) << '\n';
    }
    files.add("regret_summary.csv", regret.str());
  }

  Json manifest = manifest_base("run", config);
  manifest["stream"] = stream_json(config, key, stream);
  manifest["oracle"] = with_oracle;
  if (config.oracle && !with_oracle) manifest["oracle_skipped"] = "oracle needs d <= 2 on a ball or box domain";
  Json jruns = Json::array();
  for (const auto& r : runs) {
    Json j;
    j["protocol"] = to_string(r.protocol);
    j["sigma"] = r.sigma;
    j["rate"] = rate_json(r.rate);
    j["ledger_file"] = r.ledger_file;
    j["avg_total"] = r.final_average.total;
    if (r.regret) j["regret"] = *r.regret;
    jruns.push_back(j);
  }
  manifest["runs"] = jruns;
  if (with_oracle) {
    Json jc = Json::array();
    for (const auto& c : result.comparators) {
      jc.push_back({{"sigma", c.sigma},
                    {"grid_points", config.grid_points},
                    {"budget_buckets", config.budget_buckets},
                    {"total_cost", c.total_cost},
                    {"path_length", c.path_length},
                    {"file", c.file}});
    }
    manifest["comparators"] = jc;
  }
  files.add("manifest.json", manifest.dump(2) + "\n");

  result.runs = std::move(runs);
  result.files = files.commit();
  return result;
}

RunResult run_oracle(const ExperimentConfig& config, const HarnessOptions& options) {
  config.validate();
  const Domain domain = make_domain(config);
  const std::string key = "run";
  const LossStream stream = make_stream(config, config.horizon, key);
  if (!oracle_supported(config, stream.dimension())) {
    throw ConfigError("oracle: needs dimension <= 2 on a ball or box domain");
  }
  const GridSpec grid(domain, config.grid_points, config.budget_buckets);
  const OracleOptions opts = oracle_options(config, domain);
  const std::size_t S = config.sigmas.size();
  std::vector<ComparatorPath> paths(S);
  std::vector<std::string> csv(S);
  parallel_for(S, options.jobs, [&](std::size_t s) {
    paths[s] = comparator_dp(stream, grid, config.budget, config.sigmas[s], opts);
    std::ostringstream out;
    write_comparator_csv(paths[s], stream.losses(), out);
    csv[s] = out.str();
  });

  RunResult result;
  result.stream_seed = derive_seed(config.seed, key + "/stream");
  OutputSet files(config, options.write_files);
  std::ostringstream summary;
  summary << "sigma,budget,comparator_cost,path_length\n";
  Json jc = Json::array();
  for (std::size_t s = 0; s < S; ++s) {
    ComparatorRecord c{config.sigmas[s], paths[s].total_cost, paths[s].path_length, comparator_name(config.sigmas[s])};
    files.add(c.file, std::move(csv[s]));
    summary << format_double(c.sigma) << ',' << format_double(config.budget) << ',' << format_double(c.total_cost)
            << ',' << format_double(c.path_length) << '\n';
    jc.push_back({{"sigma", c.sigma}, {"total_cost", c.total_cost}, {"path_length", c.path_length}, {"file", c.file}});
    result.comparators.push_back(c);
  }
  files.add("oracle_summary.csv", summary.str());
  Json manifest = manifest_base("oracle", config);
  manifest["stream"] = stream_json(config, key, stream);
  manifest["comparators"] = jc;
  files.add("manifest.json", manifest.dump(2) + "\n");
  result.files = files.commit();
  return result;
}

// --- sweep-rate ------------------------------------------------------------

SweepRateResult sweep_rate(const ExperimentConfig& config, const HarnessOptions& options) {
  config.validate();
  if (config.horizons.size() < 4) throw ConfigError("horizons: sweep-rate needs at least 4 values");
  if (config.stream == StreamKind::kCsv) throw ConfigError("stream: sweep-rate needs a synthetic stream");
  if (!oracle_supported(config, config.dimension)) {
    throw ConfigError("sweep-rate: the comparator needs dimension <= 2 on a ball or box domain");
  }
  const Domain domain = make_domain(config);
  const MirrorMap map = make_map(config);
  map.check_compatible(domain);
  const GridSpec grid(domain, config.grid_points, config.budget_buckets);
  const OracleOptions opts = oracle_options(config, domain);

  const std::size_t H = config.horizons.size();
  const std::size_t K = static_cast<std::size_t>(config.seeds);
  const std::size_t P = config.protocols.size();
  const std::size_t S = config.sigmas.size();

  struct Sample {
    double rate = 0.0;
    double player = 0.0;
    double comparator = 0.0;
    double regret = 0.0;
  };
  // samples[(h * K + k) * P * S + p * S + s]
  std::vector<Sample> samples(H * K * P * S);
  std::vector<std::string> keys(H * K);
  std::vector<std::uint64_t> stream_seeds(H * K);

  parallel_for(H * K, options.jobs, [&](std::size_t u) {
    const long T = config.horizons[u / K];
    keys[u] = "rate/T=" + std::to_string(T) + "/rep=" + std::to_string(u % K);
    stream_seeds[u] = derive_seed(config.seed, keys[u] + "/stream");
    const LossStream stream = make_stream(config, T, keys[u]);
    for (std::size_t s = 0; s < S; ++s) {
      const double sigma = config.sigmas[s];
      const double opt = comparator_cost_only(stream, grid, config.budget, sigma, opts);
      for (std::size_t p = 0; p < P; ++p) {
        const RateChoice rate = choose_rate(config, config.protocols[p], sigma, stream, domain, map);
        const auto tr = run_episode(config.protocols[p], stream, rate.schedule, map, domain);
        const double player = ledger_from_transcript(tr, stream, sigma, config.include_x0_transition).total();
        samples[u * P * S + p * S + s] = {rate.schedule.parameter(), player, opt, player - opt};
      }
    }
  });

  SweepRateResult result;
  std::ostringstream points, means, fits;
  points << "protocol,sigma,T,rep,seed,rate,player_cost,comparator_cost,regret\n";
  means << "protocol,sigma,T,mean_regret,min_regret,max_regret\n";
  fits << kRateFitHeader << '\n';
  Json jseries = Json::array();

  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t s = 0; s < S; ++s) {
      RateSeries series;
      series.protocol = config.protocols[p];
      series.sigma = config.sigmas[s];
      std::vector<std::pair<double, double>> pts;
      for (std::size_t h = 0; h < H; ++h) {
        double sum = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          const std::size_t u = h * K + k;
          const Sample& x = samples[u * P * S + p * S + s];
          sum += x.regret;
          lo = k == 0 ? x.regret : std::min(lo, x.regret);
          hi = k == 0 ? x.regret : std::max(hi, x.regret);
          points << to_string(series.protocol) << ',' << format_double(series.sigma) << ',' << config.horizons[h]
                 << ',' << k << ',' << stream_seeds[u] << ',' << format_double(x.rate) << ','
                 << format_double(x.player) << ',' << format_double(x.comparator) << ','
                 << format_double(x.regret) << '\n';
        }
        const double mean = sum / static_cast<double>(K);
        series.horizons.push_back(config.horizons[h]);
        series.mean_regret.push_back(mean);
        pts.emplace_back(static_cast<double>(config.horizons[h]), mean);
        means << to_string(series.protocol) << ',' << format_double(series.sigma) << ',' << config.horizons[h] << ','
              << format_double(mean) << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
      }
      try {
        RateFit fit = fit_exponent(pts);
        if (fit.residual > config.fit_residual_threshold && pts.size() > 4) {
          fit = fit_exponent(std::span(pts).subspan(1));
          series.trimmed = true;
        }
        series.fit = fit;
        series.status = "ok";
      } catch (const FitInvalid& e) {
        series.status = "fit-invalid";
        std::string d = std::string(e.what()) + "; mean regret by T:";
        for (std::size_t h = 0; h < H; ++h) {
          d += " " + std::to_string(series.horizons[h]) + ":" + format_double(series.mean_regret[h]);
        }
        series.diagnostic = d;
      }
      fits << to_string(series.protocol) << ',' << format_double(series.sigma) << ',' << series.status << ',';
      if (series.fit) {
        fits << format_double(series.fit->exponent) << ',' << format_double(series.fit->intercept) << ','
             << format_double(series.fit->residual) << ',' << series.fit->points.size();
      } else {
        fits << ",,,0";
      }
      fits << ',' << (series.trimmed ? "true" : "false") << '\n';

      Json j;
      j["protocol"] = to_string(series.protocol);
      j["sigma"] = series.sigma;
      j["status"] = series.status;
      if (series.fit) {
        j["exponent"] = series.fit->exponent;
        j["intercept"] = series.fit->intercept;
        j["residual"] = series.fit->residual;
      }
      j["trimmed_smallest_T"] = series.trimmed;
      if (!series.diagnostic.empty()) j["diagnostic"] = series.diagnostic;
      jseries.push_back(j);
      result.series.push_back(std::move(series));
    }
  }

  if (config.assert_exponent_slack) {
    for (const auto& se : result.series) {
      Check c;
      c.name = std::string("exponent ") + to_string(se.protocol) + " sigma=" + format_double(se.sigma);
      const double bound = theory_exponent(se.protocol, se.sigma) + *config.assert_exponent_slack;
      if (!se.fit) {
        c.detail = se.diagnostic;
      } else {
        c.passed = se.fit->exponent <= bound;
        c.detail = format_double(se.fit->exponent) + " <= " + format_double(bound);
      }
      result.checks.push_back(c);
    }
  }
  if (config.assert_exponent_gap) {
    const auto sig = sorted_sigmas(config);
    for (Protocol proto : config.protocols) {
      auto find = [&](double sigma) -> const RateSeries& {
        for (const auto& se : result.series) {
          if (se.protocol == proto && se.sigma == sigma) return se;
        }
        throw std::logic_error("series not found");
      };
      for (std::size_t i = 1; i < sig.size(); ++i) {
        const RateSeries& a = find(sig[i - 1]);
        const RateSeries& b = find(sig[i]);
        Check c;
        c.name = std::string("exponent ordering ") + to_string(proto) + " sigma " + format_double(sig[i]) + " vs " +
                 format_double(sig[i - 1]);
        if (!a.fit || !b.fit) {
          c.detail = "fit-invalid: " + (b.fit ? a.diagnostic : b.diagnostic);
        } else {
          const double bound = a.fit->exponent + *config.assert_exponent_gap;
          c.passed = b.fit->exponent <= bound;
          c.detail = format_double(b.fit->exponent) + " <= " + format_double(bound);
        }
        result.checks.push_back(c);
      }
    }
  }

  OutputSet files(config, options.write_files);
  files.add("rate_points.csv", points.str());
  files.add("rate_means.csv", means.str());
  files.add("rate_fit.csv", fits.str());
  Json manifest = manifest_base("sweep-rate", config);
  Json jstreams = Json::array();
  for (std::size_t u = 0; u < keys.size(); ++u) {
    jstreams.push_back({{"key", keys[u]}, {"stream_seed", std::to_string(stream_seeds[u])}});
  }
  manifest["streams"] = jstreams;
  manifest["comparator"] = {{"method", "offline_optimum_cost"},
                            {"grid_points", config.grid_points},
                            {"budget_buckets", config.budget_buckets},
                            {"budget", config.budget}};
  manifest["fits"] = jseries;
  files.add("manifest.json", manifest.dump(2) + "\n");
  result.files = files.commit();
  return result;
}

// --- sweep-sigma -----------------------------------------------------------

SweepSigmaResult sweep_sigma(const ExperimentConfig& config, const HarnessOptions& options) {
  config.validate();
  const auto has = [&](Protocol p) {
    return std::find(config.protocols.begin(), config.protocols.end(), p) != config.protocols.end();
  };
  if (!has(Protocol::kOA) || !has(Protocol::kOCO)) throw ConfigError("protocols: sweep-sigma needs both OA and OCO");
  const Domain domain = make_domain(config);
  const MirrorMap map = make_map(config);
  map.check_compatible(domain);

  const std::size_t K = static_cast<std::size_t>(config.seeds);
  const std::size_t S = config.sigmas.size();
  std::vector<std::optional<LossStream>> streams(K);
  std::vector<std::string> keys(K);
  parallel_for(K, options.jobs, [&](std::size_t k) {
    keys[k] = "sigma/rep=" + std::to_string(k);
    streams[k].emplace(make_stream(config, config.horizon, keys[k]));
  });

  struct Episode {
    RateChoice rate;
    AverageLoss final;
  };
  // episodes[(k * S + s) * 2 + p], p = 0 for OA, 1 for OCO
  std::vector<Episode> episodes(K * S * 2);
  parallel_for(episodes.size(), options.jobs, [&](std::size_t i) {
    const std::size_t k = i / (S * 2);
    const double sigma = config.sigmas[(i / 2) % S];
    const Protocol proto = i % 2 == 0 ? Protocol::kOA : Protocol::kOCO;
    const LossStream& stream = *streams[k];
    Episode& e = episodes[i];
    e.rate = choose_rate(config, proto, sigma, stream, domain, map);
    const auto tr = run_episode(proto, stream, e.rate.schedule, map, domain);
    const CostLedger ledger = ledger_from_transcript(tr, stream, sigma, config.include_x0_transition);
    e.final = average_loss(ledger, ledger.horizon());
  });

  SweepSigmaResult result;
  std::ostringstream summary, runs;
  summary << kSigmaSummaryHeader << '\n';
  runs << "rep,seed,sigma,protocol,rate_kind,rate,avg_operating,avg_switching,avg_total\n";
  for (std::size_t s = 0; s < S; ++s) {
    SigmaRow row;
    row.sigma = config.sigmas[s];
    row.seeds = static_cast<int>(K);
    for (std::size_t k = 0; k < K; ++k) {
      const Episode& oa = episodes[(k * S + s) * 2];
      const Episode& oco = episodes[(k * S + s) * 2 + 1];
      row.oa_sl += oa.final.switching;
      row.oco_sl += oco.final.switching;
      row.oa_total += oa.final.total;
      row.oco_total += oco.final.total;
      if (oa.final.total <= oco.final.total) ++row.oa_wins;
    }
    const double n = static_cast<double>(K);
    row.oa_sl /= n;
    row.oco_sl /= n;
    row.oa_total /= n;
    row.oco_total /= n;
    row.diff = row.oco_sl - row.oa_sl;
    summary << format_double(row.sigma) << ',' << format_double(row.oa_sl) << ',' << format_double(row.oco_sl) << ','
            << format_double(row.diff) << '\n';
    result.rows.push_back(row);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t s = 0; s < S; ++s) {
      for (int p = 0; p < 2; ++p) {
        const Episode& e = episodes[(k * S + s) * 2 + static_cast<std::size_t>(p)];
        runs << k << ',' << streams[k]->seed() << ',' << format_double(config.sigmas[s]) << ','
             << (p == 0 ? "OA" : "OCO") << ',' << rate_kind(e.rate.schedule) << ','
             << format_double(e.rate.schedule.parameter()) << ',' << format_double(e.final.operating) << ','
             << format_double(e.final.switching) << ',' << format_double(e.final.total) << '\n';
      }
    }
  }

  if (config.assert_oa_wins_min) {
    for (const auto& row : result.rows) {
      Check c;
      c.name = "OA total <= OCO total, sigma=" + format_double(row.sigma);
      c.passed = row.oa_wins >= *config.assert_oa_wins_min;
      c.detail = std::to_string(row.oa_wins) + " of " + std::to_string(row.seeds) + " seeds (need " +
                 std::to_string(*config.assert_oa_wins_min) + ")";
      result.checks.push_back(c);
    }
  }
  if (config.assert_diff_nondecreasing && S >= 2) {
    std::vector<SigmaRow> rows = result.rows;
    std::sort(rows.begin(), rows.end(), [](const SigmaRow& a, const SigmaRow& b) { return a.sigma < b.sigma; });
    Check c;
    c.name = "switching difference non-decreasing in sigma";
    c.passed = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) c.detail += ' ';
      c.detail += format_double(rows[i].sigma) + ":" + format_double(rows[i].diff);
      if (i && rows[i].diff < rows[i - 1].diff) c.passed = false;
    }
    result.checks.push_back(c);
  }

  OutputSet files(config, options.write_files);
  files.add("sigma_summary.csv", summary.str());
  files.add("sigma_runs.csv", runs.str());
  Json manifest = manifest_base("sweep-sigma", config);
  Json jstreams = Json::array();
  for (std::size_t k = 0; k < K; ++k) jstreams.push_back(stream_json(config, keys[k], *streams[k]));
  manifest["streams"] = jstreams;
  Json jrates = Json::array();
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    Json j = rate_json(episodes[i].rate);
    j["rep"] = i / (S * 2);
    j["sigma"] = config.sigmas[(i / 2) % S];
    j["protocol"] = i % 2 == 0 ? "OA" : "OCO";
    jrates.push_back(j);
  }
  manifest["rates"] = jrates;
  files.add("manifest.json", manifest.dump(2) + "\n");
  result.files = files.commit();
  return result;
}

}  // namespace swreg
