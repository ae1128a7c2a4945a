// Command-line front end for the experiment harness.
//
//   swreg run <config>          episodes, ledgers, optional comparator
//   swreg sweep-rate <config>   regret exponent fits against the DP comparator
//   swreg sweep-sigma <config>  OA vs OCO switching loss over sigma
//   swreg oracle <config>       comparator paths only
//   swreg validate <config>     parse, validate, print canonical form
//
// Exit codes: 0 ok, 1 other failure, 2 config error, 3 resource error,
// 4 a config assertion failed.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "swreg/errors.hpp"
#include "swreg/harness/config.hpp"
#include "swreg/harness/experiment.hpp"
#include "swreg/text.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitAssertion = 4;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int jobs = 1;
};

swreg::ExperimentConfig load(const std::string& path, const Flags& flags) {
  swreg::ExperimentConfig config = swreg::load_config(path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  config.validate();
  return config;
}

int report_checks(const std::vector<swreg::Check>& checks) {
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  return swreg::all_passed(checks) ? kExitOk : kExitAssertion;
}

void report_files(const swreg::ExperimentConfig& config, const std::vector<std::string>& files) {
  std::cout << "wrote " << files.size() << " files to " << config.out_dir << '\n';
}

int cmd_run(const swreg::ExperimentConfig& config, const swreg::HarnessOptions& opts) {
  const auto result = swreg::run_experiment(config, opts);
  for (const auto& r : result.runs) {
    std::cout << swreg::to_string(r.protocol) << " sigma=" << swreg::format_double(r.sigma)
              << " rate=" << swreg::format_double(r.rate.schedule.parameter())
              << " avg_total=" << swreg::format_double(r.final_average.total)
              << " avg_switching=" << swreg::format_double(r.final_average.switching);
    if (r.regret) std::cout << " regret=" << swreg::format_double(*r.regret);
    std::cout << '\n';
  }
  report_files(config, result.files);
  return report_checks(result.checks);
}

int cmd_oracle(const swreg::ExperimentConfig& config, const swreg::HarnessOptions& opts) {
  const auto result = swreg::run_oracle(config, opts);
  for (const auto& c : result.comparators) {
    std::cout << "sigma=" << swreg::format_double(c.sigma) << " cost=" << swreg::format_double(c.total_cost)
              << " path_length=" << swreg::format_double(c.path_length) << '\n';
  }
  report_files(config, result.files);
  return kExitOk;
}

int cmd_sweep_rate(const swreg::ExperimentConfig& config, const swreg::HarnessOptions& opts) {
  const auto result = swreg::sweep_rate(config, opts);
  for (const auto& s : result.series) {
    std::cout << swreg::to_string(s.protocol) << " sigma=" << swreg::format_double(s.sigma) << ' ' << s.status;
    if (s.fit) {
      std::cout << " exponent=" << swreg::format_double(s.fit->exponent)
                << " residual=" << swreg::format_double(s.fit->residual) << (s.trimmed ? " (smallest T dropped)" : "");
    } else {
      std::cout << " (" << s.diagnostic << ')';
    }
    std::cout << '\n';
  }
  report_files(config, result.files);
  return report_checks(result.checks);
}

int cmd_sweep_sigma(const swreg::ExperimentConfig& config, const swreg::HarnessOptions& opts) {
  const auto result = swreg::sweep_sigma(config, opts);
  for (const auto& r : result.rows) {
    std::cout << "sigma=" << swreg::format_double(r.sigma) << " oa_sl=" << swreg::format_double(r.oa_sl)
              << " oco_sl=" << swreg::format_double(r.oco_sl) << " diff=" << swreg::format_double(r.diff)
              << " oa_wins=" << r.oa_wins << '/' << r.seeds << '\n';
  }
  report_files(config, result.files);
  return report_checks(result.checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online mirror descent with switching cost: experiment harness"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  auto* out_opt = app.add_option("--out-dir", out_dir, "output directory (overrides the config)");
  app.add_option("--jobs", flags.jobs, "concurrent sweep points")->check(CLI::PositiveNumber);

  std::string config_path;
  std::string command;
  const std::pair<const char*, const char*> subcommands[] = {
      {"run", "one episode per protocol and sigma, ledgers and summary"},
      {"sweep-rate", "regret vs horizon and fitted exponent"},
      {"sweep-sigma", "OA vs OCO final average loss per sigma"},
      {"oracle", "offline comparator paths only"},
      {"validate", "check a config and print its canonical form"},
  };
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("config", config_path, "config file")->required();
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) flags.seed = seed;
  if (*out_opt) flags.out_dir = out_dir;

  try {
    const swreg::ExperimentConfig config = load(config_path, flags);
    swreg::HarnessOptions opts;
    opts.jobs = flags.jobs;
    if (command == "validate") {
      std::cout << swreg::to_text(config) << "# hash " << swreg::config_hash(config) << '\n';
      return kExitOk;
    }
    if (command == "run") return cmd_run(config, opts);
    if (command == "oracle") return cmd_oracle(config, opts);
    if (command == "sweep-rate") return cmd_sweep_rate(config, opts);
    return cmd_sweep_sigma(config, opts);
  } catch (const swreg::Error& e) {
    std::cerr << "error (" << swreg::to_string(e.kind()) << "): " << e.what() << '\n';
    switch (e.kind()) {
      case swreg::ErrorKind::kConfig:
      case swreg::ErrorKind::kParse:
        return kExitConfig;
      case swreg::ErrorKind::kResource:
        return kExitResource;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
