// Command-line front end: spinor trajectories, period tables, parameter
// sweeps, monodromy reports, convention reconciliation and the validation
// suite, all driven by one JSON config plus a few overrides.
//
// Exit codes: 0 success, 1 validation failure, 2 config error,
// 3 runtime/domain error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "laserspin/checks.hpp"
#include "laserspin/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw laserspin::ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << payload;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void force_circular(laserspin::RunConfig& rc, const char* cmd) {
  if (std::abs(rc.epsilon - laserspin::kCircularEpsilon) > 1e-12) {
    std::cerr << cmd << ": forcing epsilon = 1/sqrt(2) (circular polarization), config had epsilon = "
              << rc.epsilon << "\n";
    rc.epsilon = laserspin::kCircularEpsilon;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-1/2 precession driven by a strong monochromatic plane-wave laser"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::string method;
  int steps_per_period = 0;
  std::uint64_t seed = 0;
  bool json_summary = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--steps-per-period", steps_per_period, "integrator steps per fundamental period")
      ->check(CLI::PositiveNumber);
  app.add_option("--method", method, "integration scheme")
      ->check(CLI::IsMember({"midpoint", "magnus4"}));
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized validation sampling");
  app.add_flag("--json", json_summary, "machine-readable validate summary");

  auto* cmd_simulate = app.add_subcommand("simulate", "integrate a spinor trajectory");
  auto* cmd_monodromy = app.add_subcommand("monodromy", "one-cycle monodromy report (circular)");
  auto* cmd_period = app.add_subcommand("period", "exact/expanded/measured precession period");
  auto* cmd_sweep = app.add_subcommand("sweep", "period and phase sweep over (eta, epsilon, beta_z)");
  auto* cmd_phase = app.add_subcommand("phase", "cycle phase against eta (circular)");
  auto* cmd_reconcile = app.add_subcommand("reconcile", "scan sign/rate conventions against the closed form");
  auto* cmd_validate = app.add_subcommand("validate", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  laserspin::RunConfig rc;
  try {
    if (!config_path.empty()) rc = laserspin::parse_run_config(read_file(config_path));
    if (steps_per_period > 0) rc.integrator.steps_per_period = steps_per_period;
    if (method == "midpoint") rc.integrator.method = laserspin::Method::midpoint;
    if (method == "magnus4") rc.integrator.method = laserspin::Method::magnus4;
    if (seed_opt->count() > 0) rc.seed = seed;
    if (rc.physical().strong_field_warning()) {
      std::cerr << "warning: eta = " << rc.eta << " is close to the semi-relativistic boundary\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::string payload;
    int code = 0;

    if (cmd_simulate->parsed()) {
      const auto table = laserspin::simulate_table(rc);
      payload = format == "json" ? laserspin::table_json(table).dump(2) + "\n"
                                 : laserspin::emit_csv(table);
    } else if (cmd_monodromy->parsed()) {
      force_circular(rc, "monodromy");
      payload = laserspin::monodromy_report(rc).dump(2) + "\n";
    } else if (cmd_period->parsed()) {
      const auto table = laserspin::period_table(rc);
      payload = format == "json" ? laserspin::table_json(table).dump(2) + "\n"
                                 : laserspin::emit_csv(table);
    } else if (cmd_sweep->parsed()) {
      const auto table = laserspin::sweep_table(rc);
      payload = format == "json" ? laserspin::table_json(table).dump(2) + "\n"
                                 : laserspin::emit_csv(table);
    } else if (cmd_phase->parsed()) {
      const auto table = laserspin::phase_table(rc);
      payload = format == "json" ? laserspin::table_json(table).dump(2) + "\n"
                                 : laserspin::emit_csv(table);
    } else if (cmd_reconcile->parsed()) {
      force_circular(rc, "reconcile");
      const auto report = laserspin::reconcile_conventions(rc.physical(), rc.integrator,
                                                           rc.reconcile_tolerance);
      payload = format == "csv" ? laserspin::reconcile_csv(report)
                                : laserspin::reconcile_report(report).dump(2) + "\n";
    } else if (cmd_validate->parsed()) {
      laserspin::CheckOptions opts;
      opts.seed = rc.seed;
      opts.trials = rc.trials;
      opts.tolerance_scale = rc.tolerance_scale;
      opts.integrator = rc.integrator;
      const auto results = laserspin::run_validation_suite(opts);
      payload = (json_summary || format == "json") ? laserspin::validation_json(results).dump(2) + "\n"
                                                   : laserspin::validation_text(results);
      code = laserspin::all_passed(results) ? 0 : 1;
    }

    write_output(out_path, payload);
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
