#include "swreg/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "swreg/errors.hpp"
#include "swreg/harness/output.hpp"
#include "swreg/rng.hpp"
#include "swreg/text.hpp"

namespace swreg {

const char* to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::kRademacher:
      return "rademacher";
    case StreamKind::kDriftingLogistic:
      return "drifting-logistic";
    case StreamKind::kCsv:
      return "csv";
    case StreamKind::kConstant:
      return "constant";
  }
  return "?";
}

const char* to_string(RateMode mode) { return mode == RateMode::kTheorem ? "theorem" : "heuristic"; }

namespace {

const char* domain_name(Domain::Kind kind) {
  switch (kind) {
    case Domain::Kind::kBall:
      return "ball";
    case Domain::Kind::kBox:
      return "box";
    case Domain::Kind::kSimplex:
      return "simplex";
  }
  return "?";
}

const char* map_name(MirrorMap::Kind kind) {
  return kind == MirrorMap::Kind::kSquaredEuclidean ? "euclidean" : "entropy";
}

[[noreturn]] void bad(std::size_t line, const std::string& key, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + what);
}

double to_double(std::size_t line, const std::string& key, std::string_view v) {
  double out = 0.0;
  if (!parse_double(v, out)) bad(line, key, "expected a number, got '" + std::string(v) + "'");
  return out;
}

long to_long(std::size_t line, const std::string& key, std::string_view v) {
  long out = 0;
  if (!parse_long(v, out)) bad(line, key, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

int to_int(std::size_t line, const std::string& key, std::string_view v) {
  const long out = to_long(line, key, v);
  if (out < -2147483647L || out > 2147483647L) bad(line, key, "integer out of range");
  return static_cast<int>(out);
}

bool to_bool(std::size_t line, const std::string& key, std::string_view v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  bad(line, key, "expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> list_items(std::string_view v) {
  std::vector<std::string_view> items;
  for (auto item : split(v, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else if constexpr (std::is_same_v<T, Protocol>) {
      out += to_string(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::size_t, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"protocols",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         c.protocols.clear();
         for (auto item : list_items(v)) {
           try {
             c.protocols.push_back(parse_protocol(std::string(item)));
           } catch (const InvalidInput& e) {
             bad(line, key, e.what());
           }
         }
       }},
      {"stream",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         if (v == "rademacher") c.stream = StreamKind::kRademacher;
         else if (v == "drifting-logistic") c.stream = StreamKind::kDriftingLogistic;
         else if (v == "csv") c.stream = StreamKind::kCsv;
         else if (v == "constant") c.stream = StreamKind::kConstant;
         else bad(line, key, "expected rademacher, drifting-logistic, csv or constant");
       }},
      {"dimension", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                       std::string_view v) { c.dimension = to_int(l, k, v); }},
      {"horizon", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                     std::string_view v) { c.horizon = to_long(l, k, v); }},
      {"horizons",
       [](ExperimentConfig& c, std::size_t l, const std::string& k, std::string_view v) {
         c.horizons.clear();
         for (auto item : list_items(v)) c.horizons.push_back(to_long(l, k, item));
       }},
      {"segments", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                      std::string_view v) { c.segments = to_int(l, k, v); }},
      {"label_noise", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                         std::string_view v) { c.label_noise = to_double(l, k, v); }},
      {"csv_path", [](ExperimentConfig& c, std::size_t, const std::string&,
                      std::string_view v) { c.csv_path = std::string(v); }},
      {"sigmas",
       [](ExperimentConfig& c, std::size_t l, const std::string& k, std::string_view v) {
         c.sigmas.clear();
         for (auto item : list_items(v)) c.sigmas.push_back(to_double(l, k, item));
       }},
      {"budget", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                    std::string_view v) { c.budget = to_double(l, k, v); }},
      {"domain",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         if (v == "ball") c.domain = Domain::Kind::kBall;
         else if (v == "box") c.domain = Domain::Kind::kBox;
         else if (v == "simplex") c.domain = Domain::Kind::kSimplex;
         else bad(line, key, "expected ball, box or simplex");
       }},
      {"radius", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                    std::string_view v) { c.radius = to_double(l, k, v); }},
      {"mirror_map",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         if (v == "euclidean") c.mirror_map = MirrorMap::Kind::kSquaredEuclidean;
         else if (v == "entropy") c.mirror_map = MirrorMap::Kind::kNegativeEntropy;
         else bad(line, key, "expected euclidean or entropy");
       }},
      {"rate",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         if (v == "theorem") c.rate = RateMode::kTheorem;
         else if (v == "heuristic") c.rate = RateMode::kHeuristic;
         else bad(line, key, "expected theorem or heuristic");
       }},
      {"delta0", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                    std::string_view v) { c.delta0 = to_double(l, k, v); }},
      {"seed",
       [](ExperimentConfig& c, std::size_t line, const std::string& key, std::string_view v) {
         std::uint64_t out = 0;
         auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
         if (ec != std::errc{} || ptr != v.data() + v.size()) bad(line, key, "expected an unsigned 64-bit integer");
         c.seed = out;
       }},
      {"seeds", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                   std::string_view v) { c.seeds = to_int(l, k, v); }},
      {"out_dir", [](ExperimentConfig& c, std::size_t, const std::string&,
                     std::string_view v) { c.out_dir = std::string(v); }},
      {"oracle", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                    std::string_view v) { c.oracle = to_bool(l, k, v); }},
      {"grid_points", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                         std::string_view v) { c.grid_points = to_int(l, k, v); }},
      {"budget_buckets", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                            std::string_view v) { c.budget_buckets = to_int(l, k, v); }},
      {"include_x0_transition", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                   std::string_view v) { c.include_x0_transition = to_bool(l, k, v); }},
      {"fit_residual_threshold", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                    std::string_view v) { c.fit_residual_threshold = to_double(l, k, v); }},
      {"assert_exponent_slack", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                   std::string_view v) { c.assert_exponent_slack = to_double(l, k, v); }},
      {"assert_exponent_gap", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                 std::string_view v) { c.assert_exponent_gap = to_double(l, k, v); }},
      {"assert_oa_wins_min", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                std::string_view v) { c.assert_oa_wins_min = to_int(l, k, v); }},
      {"assert_diff_nondecreasing", [](ExperimentConfig& c, std::size_t l, const std::string& k,
                                       std::string_view v) { c.assert_diff_nondecreasing = to_bool(l, k, v); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (protocols.empty()) throw ConfigError("protocols: at least one of OA, OCO is required");
  if (std::set<Protocol>(protocols.begin(), protocols.end()).size() != protocols.size()) {
    throw ConfigError("protocols: duplicate entry");
  }
  if (dimension < 1) throw ConfigError("dimension: must be >= 1");
  if (horizon < 1) throw ConfigError("horizon: must be >= 1");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1) throw ConfigError("horizons: every entry must be >= 1");
    if (i && horizons[i] <= horizons[i - 1]) throw ConfigError("horizons: must be strictly increasing");
  }
  if (segments < 1) throw ConfigError("segments: must be >= 1");
  if (!(label_noise >= 0.0 && label_noise < 0.5)) throw ConfigError("label_noise: must lie in [0, 0.5)");
  if (stream == StreamKind::kCsv && csv_path.empty()) throw ConfigError("csv_path: required when stream = csv");
  if (sigmas.empty()) throw ConfigError("sigmas: at least one value is required");
  if (std::set<double>(sigmas.begin(), sigmas.end()).size() != sigmas.size()) {
    throw ConfigError("sigmas: duplicate entry");
  }
  for (double s : sigmas) {
    if (!(s >= 1.0 && s <= 2.0)) throw ConfigError("sigmas: " + format_double(s) + " is outside [1, 2]");
  }
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw ConfigError("budget: must be finite and >= 0");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius: must be positive");
  if (mirror_map == MirrorMap::Kind::kNegativeEntropy && domain != Domain::Kind::kSimplex) {
    throw ConfigError("mirror_map: entropy requires domain = simplex");
  }
  if (domain == Domain::Kind::kSimplex && dimension < 2) throw ConfigError("dimension: simplex needs >= 2");
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) throw ConfigError("delta0: must be positive");
  if (seeds < 1) throw ConfigError("seeds: must be >= 1");
  if (out_dir.empty()) throw ConfigError("out_dir: must not be empty");
  if (grid_points < 2) throw ConfigError("grid_points: must be >= 2");
  if (budget_buckets < 1) throw ConfigError("budget_buckets: must be >= 1");
  if (!(fit_residual_threshold >= 0.0)) throw ConfigError("fit_residual_threshold: must be >= 0");
  if (assert_exponent_slack && !std::isfinite(*assert_exponent_slack)) {
    throw ConfigError("assert_exponent_slack: must be finite");
  }
  if (assert_exponent_gap && !std::isfinite(*assert_exponent_gap)) {
    throw ConfigError("assert_exponent_gap: must be finite");
  }
  if (assert_oa_wins_min && *assert_oa_wins_min < 0) throw ConfigError("assert_oa_wins_min: must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view value = trim(s.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) bad(line, key, "given more than once");
    it->second(config, line, key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "protocols = " << join(c.protocols) << '\n';
  out << "stream = " << to_string(c.stream) << '\n';
  out << "dimension = " << c.dimension << '\n';
  out << "horizon = " << c.horizon << '\n';
  out << "horizons = " << join(c.horizons) << '\n';
  out << "segments = " << c.segments << '\n';
  out << "label_noise = " << format_double(c.label_noise) << '\n';
  out << "csv_path = " << c.csv_path << '\n';
  out << "sigmas = " << join(c.sigmas) << '\n';
  out << "budget = " << format_double(c.budget) << '\n';
  out << "domain = " << domain_name(c.domain) << '\n';
  out << "radius = " << format_double(c.radius) << '\n';
  out << "mirror_map = " << map_name(c.mirror_map) << '\n';
  out << "rate = " << to_string(c.rate) << '\n';
  out << "delta0 = " << format_double(c.delta0) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "seeds = " << c.seeds << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "oracle = " << (c.oracle ? "true" : "false") << '\n';
  out << "grid_points = " << c.grid_points << '\n';
  out << "budget_buckets = " << c.budget_buckets << '\n';
  out << "include_x0_transition = " << (c.include_x0_transition ? "true" : "false") << '\n';
  out << "fit_residual_threshold = " << format_double(c.fit_residual_threshold) << '\n';
  if (c.assert_exponent_slack) out << "assert_exponent_slack = " << format_double(*c.assert_exponent_slack) << '\n';
  if (c.assert_exponent_gap) out << "assert_exponent_gap = " << format_double(*c.assert_exponent_gap) << '\n';
  if (c.assert_oa_wins_min) out << "assert_oa_wins_min = " << *c.assert_oa_wins_min << '\n';
  out << "assert_diff_nondecreasing = " << (c.assert_diff_nondecreasing ? "true" : "false") << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig keyed = config;
  keyed.out_dir = "-";  // where results go does not change what they are
  return hex64(fnv1a(to_text(keyed)));
}

}  // namespace swreg
