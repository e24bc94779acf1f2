// dce: command-line front end for the Kerr-cavity dynamical Casimir simulator.
//
//   dce run      --preset figure1 --output fig1.csv
//   dce sweep    --parameter kerr --values 0.1,0.2,0.3 --output sweep_dir
//   dce validate [--acceptance] [--only A3]
//
// Exit codes: 0 ok, 1 invalid configuration, 2 I/O error, 3 run failure
// (divergence, unconverged truncation), 4 validation failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dce/errors.hpp"
#include "dce/experiments.hpp"
#include "dce/validation.hpp"

namespace {

enum Exit { ok = 0, bad_config = 1, io_failure = 2, run_failure = 3, validation_failure = 4 };

// Flags shared by run and sweep. Every flag is optional; values given on the
// command line replace those from --config.
struct ConfigFlags {
  std::string config_file;
  std::optional<std::string> preset, omega0, epsilon, kerr, dim, dt, tmax, stride, methods, output,
      workers;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key = value configuration file");
    app->add_option("--preset", preset, "figure1 | figure2 (fixes omega0, epsilon, kerr, grid, methods)");
    app->add_option("--omega0", omega0, "bare cavity frequency");
    app->add_option("--epsilon", epsilon, "modulation depth, 0 <= epsilon < 1");
    app->add_option("--kerr", kerr, "comma-separated Kerr strengths K");
    app->add_option("--dim", dim, "Fock truncation, or 'auto'");
    app->add_option("--dt", dt, "integrator step");
    app->add_option("--tmax", tmax, "final time");
    app->add_option("--stride", stride, "steps per output sample");
    app->add_option("--methods", methods,
                    "comma list of analytic, full, full-approx-chi, rwa, su11-stepped");
    app->add_option("--output", output, "output file (run) or directory (sweep)");
    app->add_option("--workers", workers, "concurrent integrations");
  }

  dce::RunConfig resolve() const {
    dce::KeyValues kv;
    if (!config_file.empty()) kv = dce::read_key_value_file(config_file);
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"preset", &preset}, {"omega0", &omega0}, {"epsilon", &epsilon}, {"kerr", &kerr},
        {"dim", &dim},       {"dt", &dt},         {"tmax", &tmax},       {"stride", &stride},
        {"methods", &methods}, {"output", &output}, {"workers", &workers}};
    for (const auto& [key, value] : flags) {
      if (*value) kv[key] = **value;
    }
    std::vector<std::string> ignored;
    dce::RunConfig c = dce::config_from_key_values(kv, &ignored);
    for (const auto& key : ignored) {
      std::cerr << "warning: '" << key << "' is fixed by preset " << dce::to_string(*c.preset)
                << " and was ignored\n";
    }
    return c;
  }
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dce::InvalidParameter("values", "'" + item + "' is not a number");
    }
    start = comma + 1;
  }
  return out;
}

int do_run(const ConfigFlags& flags) {
  const dce::RunConfig c = flags.resolve();
  const dce::RunResult result = dce::run(c);
  dce::save_run(result, c.output);
  std::cout << "wrote " << c.output << " (" << result.series.size() << " series, "
            << dce::format_number(result.wall_time) << " s)\n";
  for (const auto& s : result.series) {
    if (!dce::is_numerical(s.method)) continue;
    std::cout << "  " << dce::to_string(s.method) << " K=" << dce::format_number(s.kerr)
              << " dim=" << s.dim;
    if (s.convergence) std::cout << " doubling change " << s.convergence->last_change;
    std::cout << '\n';
  }
  return ok;
}

int do_sweep(const ConfigFlags& flags, const std::string& parameter, const std::string& values) {
  dce::RunConfig c = flags.resolve();
  if (!flags.output && flags.config_file.empty()) c.output = "dce_sweep";
  const auto rows = dce::sweep(c, dce::parse_sweep_parameter(parameter), parse_values(values), c.output);
  std::cout << "wrote " << rows.size() << " runs and index.csv to " << c.output << '\n';
  return ok;
}

int do_validate(bool acceptance, const std::vector<std::string>& only, int workers) {
  std::vector<dce::Check> checks = dce::invariant_checks();
  if (acceptance || !only.empty()) {
    auto more = dce::acceptance_checks(workers);
    checks.insert(checks.end(), more.begin(), more.end());
  }
  int failed = 0, ran = 0;
  for (const auto& check : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), check.id) == only.end()) continue;
    if (only.empty() && !acceptance && check.id.front() == 'A') continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    dce::CheckResult r;
    try {
      r = check.run();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.passed) ++failed;
    std::printf("%s %s: %s (%.1fs)\n    %s\n", r.passed ? "PASS" : "FAIL", check.id.c_str(),
                check.title.c_str(), secs, r.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::cerr << "error: no check matches --only\n";
    return bad_config;
  }
  std::printf("%d/%d checks passed\n", ran - failed, ran);
  return failed == 0 ? ok : validation_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical Casimir effect in a Kerr cavity"};
  app.set_version_flag("--version", std::string(dce::kVersion));
  app.require_subcommand(1);

  ConfigFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "integrate from vacuum and write CSV plus metadata");
  run_flags.attach(run_cmd);

  ConfigFlags sweep_flags;
  std::string parameter, values;
  auto* sweep_cmd = app.add_subcommand("sweep", "one run per parameter value, with an index.csv");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--parameter", parameter, "kerr | epsilon | omega0 | dim | dt")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();

  bool acceptance = false;
  std::vector<std::string> only;
  int validate_workers = 1;
  auto* validate_cmd = app.add_subcommand("validate", "run the built-in self-checks");
  validate_cmd->add_flag("--acceptance", acceptance, "also run the acceptance criteria (slow)");
  validate_cmd->add_option("--only", only, "run only the named checks")->delimiter(',');
  validate_cmd->add_option("--workers", validate_workers, "concurrent integrations")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : bad_config;
  }

  try {
    if (*run_cmd) return do_run(run_flags);
    if (*sweep_cmd) return do_sweep(sweep_flags, parameter, values);
    return do_validate(acceptance, only, validate_workers);
  } catch (const dce::InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return bad_config;
  } catch (const dce::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return io_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return run_failure;
  }
}
