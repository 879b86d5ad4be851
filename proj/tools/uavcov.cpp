// uavcov: coverage sweeps, single-point evaluation and the validation battery.
//
//   uavcov sweep <config>      table of analytic / Monte Carlo coverage
//   uavcov point <config>      one evaluation, JSON on stdout
//   uavcov validate <suite>    numerics | distributions | coverage | all
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 numeric error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "uavcov/cli/config.hpp"
#include "uavcov/cli/sweep.hpp"
#include "uavcov/cli/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

uavcov::cli::RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw uavcov::ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return uavcov::cli::parse_config(buf.str());
}

int do_sweep(const std::string& path, const std::string& output_override, unsigned workers) {
  using namespace uavcov::cli;
  RunConfig cfg = load(path);
  if (!output_override.empty()) cfg.output = output_override;
  if (workers) cfg.workers = workers;
  const SweepResult res = run_sweep(cfg);

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) throw uavcov::ConfigError("output", "cannot write '" + cfg.output + "'");
  }
  std::ostream& os = cfg.output.empty() ? std::cout : file;
  if (cfg.format == Format::Csv)
    write_csv(os, res);
  else
    os << to_json(res, cfg).dump(2) << '\n';

  for (const auto& r : res.rows)
    if (!r.error.empty()) std::cerr << "uavcov: point " << r.sweep_value << ": " << r.error << '\n';
  return res.ok() ? kOk : kNumericError;
}

int do_point(const std::string& path, unsigned workers) {
  using namespace uavcov::cli;
  RunConfig cfg = load(path);
  if (cfg.sweep.var != SweepVar::None)
    throw uavcov::ConfigError("sweep_var", "point evaluates a single configuration; remove the sweep keys");
  if (workers) cfg.workers = workers;
  const auto r = evaluate_point(cfg, cfg.params, cfg.elevation, cfg.seed, uavcov::resolve_workers(cfg.workers));
  auto j = to_json(r, SweepVar::None);
  j.erase("sweep_var");
  j.erase("sweep_value");
  j["mode"] = std::string(to_string(cfg.mode));
  j["metric"] = std::string(to_string(cfg.metric));
  j["elevation"] = cfg.elevation.describe();
  std::cout << j.dump(2) << '\n';
  return r.error.empty() ? kOk : kNumericError;
}

int do_validate(const std::string& suite, const uavcov::cli::ValidateOptions& opt, const std::string& output) {
  const auto rep = uavcov::cli::validate(suite, opt);
  const auto text = rep.to_json().dump(2);
  if (output.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream(output) << text << '\n';
  }
  for (const auto& c : rep.checks)
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " (" << c.value << " vs " << c.limit
              << ")\n";
  return rep.passed() ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV network coverage: analytic expressions and Monte Carlo"};
  app.require_subcommand(1);

  std::string config_path, output;
  unsigned workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run the sweep described by a config file");
  sweep->add_option("config", config_path, "Config file (key = value)")->required();
  sweep->add_option("-o,--output", output, "Output path (overrides the config)");
  sweep->add_option("-j,--workers", workers, "Worker threads (0 = all cores)");

  auto* point = app.add_subcommand("point", "Evaluate one configuration and print JSON");
  point->add_option("config", config_path, "Config file (key = value)")->required();
  point->add_option("-j,--workers", workers, "Worker threads (0 = all cores)");

  std::string suite;
  uavcov::cli::ValidateOptions vopt;
  auto* validate = app.add_subcommand("validate", "Run a validation suite and print a JSON report");
  validate->add_option("suite", suite, "numerics | distributions | coverage | all")->required();
  validate->add_option("-n,--samples", vopt.coverage_samples, "Monte Carlo samples per coverage point");
  validate->add_option("--ks-samples", vopt.ks_samples, "Realizations per distribution test");
  validate->add_option("-s,--seed", vopt.seed, "Master seed");
  validate->add_option("-j,--workers", vopt.workers, "Worker threads (0 = all cores)");
  validate->add_option("-o,--output", output, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sweep) return do_sweep(config_path, output, workers);
    if (*point) return do_point(config_path, workers);
    return do_validate(suite, vopt, output);
  } catch (const uavcov::ConfigError& e) {
    std::cerr << "uavcov: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const uavcov::InvalidParameter& e) {
    std::cerr << "uavcov: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const uavcov::Error& e) {
    std::cerr << "uavcov: numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}
