#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include "json.hpp"
#include "swreg/errors.hpp"
#include "swreg/harness/config.hpp"
#include "swreg/harness/experiment.hpp"
#include "swreg/harness/output.hpp"
#include "swreg/harness/rate_fit.hpp"
#include "swreg/rng.hpp"

using namespace swreg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swreg_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path());
  return out;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

ExperimentConfig small_drift(const fs::path& out) {
  ExperimentConfig c;
  c.dimension = 5;
  c.horizon = 200;
  c.sigmas = {1.0, 1.5, 2.0};
  c.seed = 99;
  c.seeds = 3;
  c.out_dir = out.string();
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SWREG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("fit_exponent recovers known slopes") {
  std::vector<std::pair<double, double>> sqrt_pts, pow3_pts;
  for (double T : {256.0, 512.0, 1024.0, 2048.0, 4096.0}) {
    sqrt_pts.emplace_back(T, 5.0 * std::sqrt(T));
    pow3_pts.emplace_back(T, std::pow(T, std::log2(3.0)));
  }
  const auto f = fit_exponent(sqrt_pts);
  CHECK(f.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log2(5.0)).epsilon(1e-12));
  CHECK(f.residual < 1e-20);
  CHECK(fit_exponent(pow3_pts).exponent == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("fit_exponent tolerates mild multiplicative noise") {
  Rng rng(71);
  for (int k = 0; k < 200; ++k) {
    const double e = rng.uniform(0.2, 0.8);
    std::vector<std::pair<double, double>> pts;
    for (int j = 8; j <= 13; ++j) {
      const double T = std::ldexp(1.0, j);
      pts.emplace_back(T, 2.0 * std::pow(T, e) * (1.0 + rng.uniform(-0.05, 0.05)));
    }
    REQUIRE(std::abs(fit_exponent(pts).exponent - e) <= 0.05);
  }
}

TEST_CASE("fit_exponent input errors") {
  using P = std::vector<std::pair<double, double>>;
  CHECK_THROWS_AS(fit_exponent(P{{1, 1}, {2, 2}, {4, 3}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponent(P{{0, 1}, {2, 2}, {4, 3}, {8, 4}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponent(P{{2, 1}, {2, 2}, {2, 3}, {2, 4}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponent(P{{1, 1}, {2, -2}, {4, 3}, {8, 4}}), FitInvalid);
  CHECK_THROWS_AS(fit_exponent(P{{1, 1}, {2, 0}, {4, 3}, {8, 4}}), FitInvalid);
  CHECK_THROWS_AS(fit_exponent(P{{1, 1}, {2, NAN}, {4, 3}, {8, 4}}), FitInvalid);
}

TEST_CASE("config: defaults, parsing and errors") {
  const auto c = parse_config("# comment\n\nstream = rademacher\ndimension = 2\nsigmas = 1, 2\nprotocols = OCO\n");
  CHECK(c.stream == StreamKind::kRademacher);
  CHECK(c.dimension == 2);
  CHECK(c.sigmas == std::vector<double>{1.0, 2.0});
  CHECK(c.protocols == std::vector<Protocol>{Protocol::kOCO});
  CHECK(c.horizon == 1500);
  CHECK(c.budget == 10.0);
  CHECK(c.delta0 == 10.0);

  auto error_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(error_of("dimension = 2\nfoo = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("dimension = 2\ndimension = 3\n").find("line 2") != std::string::npos);
  CHECK(error_of("dimension = two\n").find("line 1") != std::string::npos);
  CHECK(error_of("no equals sign\n") != "no error");
  CHECK(error_of("sigmas = 0.5\n").find("sigmas") != std::string::npos);
  CHECK(error_of("sigmas = 1, 1\n").find("sigmas") != std::string::npos);
  CHECK(error_of("label_noise = 0.5\n").find("label_noise") != std::string::npos);
  CHECK(error_of("mirror_map = entropy\n").find("mirror_map") != std::string::npos);
  CHECK(error_of("stream = csv\n").find("csv_path") != std::string::npos);
  CHECK(error_of("horizons = 512, 256, 1024, 2048\n").find("horizons") != std::string::npos);
  CHECK(error_of("protocols = OA, OA\n").find("protocols") != std::string::npos);
  CHECK(error_of("budget = -1\n").find("budget") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("config: canonical text round-trips for random configs") {
  Rng rng(72);
  for (int k = 0; k < 300; ++k) {
    ExperimentConfig c;
    c.protocols = rng.bernoulli(0.5) ? std::vector<Protocol>{Protocol::kOCO, Protocol::kOA}
                                     : std::vector<Protocol>{Protocol::kOA};
    c.stream = static_cast<StreamKind>(rng.next() % 4);
    if (c.stream == StreamKind::kCsv) c.csv_path = "data/x y.csv";
    c.domain = static_cast<Domain::Kind>(rng.next() % 3);
    c.dimension = 2 + static_cast<int>(rng.next() % 60);
    if (c.domain == Domain::Kind::kSimplex && rng.bernoulli(0.5)) c.mirror_map = MirrorMap::Kind::kNegativeEntropy;
    c.horizon = 1 + static_cast<long>(rng.next() % 100000);
    long h = 0;
    for (int j = 0; j < static_cast<int>(rng.next() % 6); ++j) c.horizons.push_back(h += 1 + rng.next() % 1000);
    c.segments = 1 + static_cast<int>(rng.next() % 5);
    c.label_noise = rng.uniform(0.0, 0.49);
    c.sigmas = {rng.uniform(1.0, 1.5), rng.uniform(1.5, 2.0)};
    c.budget = rng.uniform(0.0, 100.0);
    c.radius = rng.uniform(0.01, 10.0);
    c.rate = rng.bernoulli(0.5) ? RateMode::kTheorem : RateMode::kHeuristic;
    c.delta0 = rng.uniform(0.001, 100.0);
    c.seed = rng.next();
    c.seeds = 1 + static_cast<int>(rng.next() % 20);
    c.out_dir = "out/" + std::to_string(k);
    c.oracle = rng.bernoulli(0.5);
    c.grid_points = 2 + static_cast<int>(rng.next() % 100);
    c.budget_buckets = 1 + static_cast<int>(rng.next() % 100);
    c.include_x0_transition = rng.bernoulli(0.5);
    c.fit_residual_threshold = rng.uniform(0.0, 1.0);
    if (rng.bernoulli(0.5)) c.assert_exponent_slack = rng.uniform(-1.0, 1.0);
    if (rng.bernoulli(0.5)) c.assert_exponent_gap = rng.uniform(-1.0, 1.0);
    if (rng.bernoulli(0.5)) c.assert_oa_wins_min = static_cast<int>(rng.next() % 10);
    c.assert_diff_nondecreasing = rng.bernoulli(0.5);
    c.validate();
    const auto back = parse_config(to_text(c));
    REQUIRE(back == c);
    REQUIRE(to_text(back) == to_text(c));
    REQUIRE(config_hash(back) == config_hash(c));
  }
}

TEST_CASE("config hash ignores the output directory only") {
  ExperimentConfig a;
  ExperimentConfig b = a;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("run writes one ledger per protocol and sigma plus a manifest") {
  const auto dir = scratch("run");
  auto c = small_drift(dir);
  const auto result = run_experiment(c);
  CHECK(result.runs.size() == 6);
  const auto files = read_dir(dir);
  for (const char* p : {"OA", "OCO"})
    for (const char* s : {"1", "1.5", "2"}) {
      const std::string name = std::string("ledger_") + p + "_sigma" + s + ".csv";
      REQUIRE(files.count(name) == 1);
      CHECK(first_line(files.at(name)) == kLedgerCsvHeader);
    }
  REQUIRE(files.count("run_summary.csv") == 1);
  CHECK(first_line(files.at("run_summary.csv")) ==
        "protocol,sigma,rate_kind,rate,avg_operating,avg_switching,avg_total,total_cost");
  const auto manifest = nlohmann::json::parse(files.at("manifest.json"));
  CHECK(manifest["command"] == "run");
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(manifest["master_seed"] == "99");
  CHECK(manifest["stream"]["stream_seed"] == std::to_string(derive_seed(99, "run/stream")));
  for (const auto& r : manifest["runs"]) {
    CHECK(r["rate"]["deltas_tried"][0] == 10.0);
    CHECK(r["rate"]["constants"]["D"] == 10.0);
  }
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("identical configs produce byte-identical outputs, whatever the job count") {
  auto c = small_drift(scratch("det_a"));
  run_experiment(c);
  sweep_sigma(c);
  const auto a = read_dir(c.out_dir);
  c.out_dir = scratch("det_b").string();
  run_experiment(c, {3, true});
  sweep_sigma(c, {3, true});
  auto b = read_dir(c.out_dir);
  // manifests record their own out_dir; everything else must match byte for byte
  auto a_rest = a;
  a_rest.erase("manifest.json");
  b.erase("manifest.json");
  CHECK(a_rest.size() == 9);
  CHECK(a_rest == b);

  c.seed = 100;
  c.out_dir = scratch("det_c").string();
  run_experiment(c);
  CHECK(read_dir(c.out_dir).at("run_summary.csv") != a.at("run_summary.csv"));
  for (const char* n : {"det_a", "det_b", "det_c"}) fs::remove_all(scratch(n));
}

TEST_CASE("sweep-sigma summary and single-sigma configs") {
  const auto dir = scratch("sigma");
  auto c = small_drift(dir);
  c.sigmas = {1.5};
  const auto r = sweep_sigma(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].seeds == 3);
  CHECK(r.rows[0].diff == doctest::Approx(r.rows[0].oco_sl - r.rows[0].oa_sl));
  const auto files = read_dir(dir);
  CHECK(first_line(files.at("sigma_summary.csv")) == kSigmaSummaryHeader);
  CHECK(std::string(kSigmaSummaryHeader) == "sigma,oa_sl,oco_sl,diff");
  c.protocols = {Protocol::kOA};
  CHECK_THROWS_AS(sweep_sigma(c), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("sweep-rate configuration errors") {
  ExperimentConfig c;
  c.stream = StreamKind::kRademacher;
  c.dimension = 1;
  c.radius = 1.0;
  c.horizons = {16, 32, 64};
  c.out_dir = scratch("rate_err").string();
  CHECK_THROWS_AS(sweep_rate(c), ConfigError);
  c.horizons = {16, 32, 64, 128};
  c.dimension = 3;
  CHECK_THROWS_AS(sweep_rate(c), ConfigError);
}

TEST_CASE("sweep-rate on a constant stream: flat regret, fit header") {
  // the best fixed point is also the best moving path, so regret stays bounded
  const auto dir = scratch("rate_const");
  ExperimentConfig c;
  c.protocols = {Protocol::kOA};
  c.stream = StreamKind::kConstant;
  c.dimension = 1;
  c.radius = 1.0;
  c.budget = 4.0;
  c.horizons = {128, 256, 512, 1024};
  c.delta0 = 0.5;
  c.seeds = 2;
  c.seed = 11;
  c.grid_points = 21;
  c.budget_buckets = 16;
  c.out_dir = dir.string();
  const auto r = sweep_rate(c);
  REQUIRE(r.series.size() == 1);
  REQUIRE(r.series[0].fit.has_value());
  CHECK(r.series[0].fit->exponent <= 0.1);
  const auto files = read_dir(dir);
  CHECK(first_line(files.at("rate_fit.csv")) == kRateFitHeader);
  CHECK(files.count("rate_points.csv") == 1);
  CHECK(files.count("rate_means.csv") == 1);
  fs::remove_all(dir);
}

TEST_CASE("sweep-rate reports fit-invalid when OA regret goes negative") {
  // OA sees f_t before playing, so on a Rademacher stream with sigma = 2 it
  // beats the budget-limited comparator and the log fit is undefined.
  const auto dir = scratch("rate_neg");
  ExperimentConfig c;
  c.protocols = {Protocol::kOA};
  c.stream = StreamKind::kRademacher;
  c.dimension = 1;
  c.radius = 1.0;
  c.budget = 4.0;
  c.sigmas = {2.0};
  c.rate = RateMode::kTheorem;
  c.horizons = {256, 512, 1024, 2048};
  c.seeds = 2;
  c.seed = 5;
  c.grid_points = 21;
  c.budget_buckets = 16;
  c.assert_exponent_slack = 0.1;
  c.out_dir = dir.string();
  const auto r = sweep_rate(c);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series[0].status == "fit-invalid");
  CHECK_FALSE(r.series[0].fit.has_value());
  CHECK(r.series[0].diagnostic.find("mean regret") != std::string::npos);
  CHECK_FALSE(all_passed(r.checks));
  fs::remove_all(dir);
}

TEST_CASE("oracle resource errors carry a hint") {
  ExperimentConfig c;
  c.stream = StreamKind::kRademacher;
  c.dimension = 1;
  c.radius = 1.0;
  c.horizon = 5000;
  c.grid_points = 5000;
  c.budget_buckets = 5000;
  c.oracle = true;
  c.out_dir = scratch("oracle_res").string();
  try {
    run_oracle(c);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("reduce grid_points") != std::string::npos);
  }
  c.dimension = 3;
  CHECK_THROWS_AS(run_oracle(c), ConfigError);
}

TEST_CASE("atomic writes leave no temporary files behind") {
  const auto dir = scratch("atomic");
  write_file_atomic(dir / "sub" / "a.txt", "one");
  write_file_atomic(dir / "sub" / "a.txt", "two");
  CHECK(read_file(dir / "sub" / "a.txt") == "two");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++n;
  CHECK(n == 1);
  CHECK_THROWS_AS(write_file_atomic("/proc/swreg_no_such_dir/a.txt", "x"), ResourceError);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(sigma_tag(1.5) == "1.5");
  CHECK(sigma_tag(1.0) == "1");
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  const std::string cfgs = std::string(SWREG_SOURCE_DIR) + "/configs/";
  const std::string out = " --out-dir " + dir.string();

  CHECK(run_cli("validate " + cfgs + "drift_sigma.cfg") == 0);
  CHECK(run_cli("validate /nonexistent.cfg") == 2);
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("run " + cfgs + "drift_run.cfg --jobs 0") == 2);

  write_file_atomic(dir / "bad.cfg", "dimension = 1\nwhat = 3\n");
  CHECK(run_cli("validate " + (dir / "bad.cfg").string()) == 2);

  write_file_atomic(dir / "small.cfg",
                    "dimension = 5\nhorizon = 200\nseed = 99\nseeds = 2\nsigmas = 1, 2\nassert_oa_wins_min = 0\n");
  CHECK(run_cli("sweep-sigma " + (dir / "small.cfg").string() + out + "/ok --seed 99") == 0);
  CHECK(fs::exists(dir / "ok" / "sigma_summary.csv"));

  write_file_atomic(dir / "fail.cfg", "dimension = 5\nhorizon = 200\nseed = 99\nseeds = 2\nassert_oa_wins_min = 3\n");
  CHECK(run_cli("sweep-sigma " + (dir / "fail.cfg").string() + out + "/fail") == 4);

  // seed 0 gives a stream on which no delta passes the convergence test
  write_file_atomic(dir / "tune.cfg", "dimension = 5\nhorizon = 200\nseeds = 2\n");
  CHECK(run_cli("sweep-sigma " + (dir / "tune.cfg").string() + out + "/tune") == 1);

  write_file_atomic(dir / "huge.cfg",
                    "stream = rademacher\ndimension = 1\nradius = 1\nhorizon = 5000\noracle = true\n"
                    "grid_points = 5000\nbudget_buckets = 5000\n");
  CHECK(run_cli("oracle " + (dir / "huge.cfg").string() + out + "/huge") == 3);
  fs::remove_all(dir);
}
