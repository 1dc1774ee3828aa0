#include "eulerdd/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "eulerdd/error.hpp"

namespace eulerdd {

namespace {

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "config error: bad delta_t value '" + item + "'");
    }
  }
  return out;
}

// Writes to --out when set, otherwise to the stream.
void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(config.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "config error: cannot write " + config.out);
  f << text;
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << std::scientific << x;
  return os.str();
}

Json block_json(const BlockReport& b) {
  return {{"label", b.label},
          {"multiplicity", b.multiplicity},
          {"dimension", b.dimension},
          {"block_norm", b.block_norm},
          {"scalar_deviation", b.scalar_deviation},
          {"factor_deviation", b.factor_deviation},
          {"classification", to_string(b.classification)}};
}

struct VerifyRun {
  VerifyReport report;
  std::vector<std::pair<std::string, SubsystemReport>> robustness;
  std::optional<NoiseReport> noise;
};

VerifyRun run_verify(const RunConfig& config, const Scenario& scenario) {
  VerifyRun run;
  VerifyOptions options;
  options.trials = config.trials;
  options.quad_points = config.quad_points;
  options.seed = config.seed;
  run.report = run_checks(scenario, options);
  for (const auto& fault : scenario.faults) {
    auto r = robustness_report(scenario, fault, config.quad_points);
    CheckResult c;
    c.name = "robustness " + fault.name + ": blocks consistent with " + to_string(r.fault_case) + " fault";
    c.passed = r.consistent;
    // Compared quantity: leakage out of the commutant and between blocks.
    c.value = std::max(r.commutant_distance, r.cross_block);
    c.tolerance = kProtectionThreshold;
    run.report.checks.push_back(c);
    run.robustness.emplace_back(fault.name, std::move(r));
  }
  if (!scenario.noise.empty()) run.noise = noise_suppression_check(scenario);
  return run;
}

Json summary_of(const RunConfig& config, const Scenario& scenario, const VerifyRun& run) {
  Json doc = verify_summary(config, scenario, run.report);
  Json rob = Json::array();
  for (const auto& [name, r] : run.robustness) {
    Json blocks = Json::array();
    for (const auto& b : r.blocks) blocks.push_back(block_json(b));
    rob.push_back({{"fault", name},
                   {"case", to_string(r.fault_case)},
                   {"residual_norm", r.residual_norm},
                   {"commutant_distance", r.commutant_distance},
                   {"center_distance", r.center_distance},
                   {"consistent", r.consistent},
                   {"blocks", blocks}});
  }
  doc["robustness"] = rob;
  if (run.noise) {
    Json terms = Json::array();
    for (const auto& t : run.noise->terms) {
      terms.push_back({{"projected_norm", t.projected_norm}, {"center_distance", t.center_distance}, {"block_norms", t.block_norms}});
    }
    doc["noise"] = {{"full", run.noise->full}, {"central", run.noise->central}, {"dj_only", run.noise->dj_only}, {"terms", terms}};
  }
  return doc;
}

void print_human(const Scenario& scenario, const VerifyRun& run, std::ostream& out) {
  out << "scenario " << scenario.name << ": " << scenario.description << "\n";
  out << "  |G| = " << scenario.group.group.order() << ", generators = " << scenario.group.generator_count()
      << ", L = " << scenario.path.length() << ", path " << format_path(scenario.path.colors) << "\n";
  for (const auto& c : run.report.checks) {
    out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << "  value=" << sci(c.value) << "  tol=" << sci(c.tolerance);
    if (!c.notice.empty()) out << "  (" << c.notice << ")";
    out << "\n";
  }
  for (const auto& [name, r] : run.robustness) {
    out << "  fault " << name << " [" << to_string(r.fault_case) << "] residual " << sci(r.residual_norm) << "\n";
    for (const auto& b : r.blocks) {
      out << "    " << b.label << " (n=" << b.multiplicity << ", d=" << b.dimension << "): " << to_string(b.classification)
          << ", block norm " << sci(b.block_norm) << "\n";
    }
  }
  if (run.noise) {
    out << "  noise: full suppression " << (run.noise->full ? "yes" : "no") << ", central " << (run.noise->central ? "yes" : "no")
        << ", D_J-only " << (run.noise->dj_only ? "yes" : "no") << "\n";
  }
  out << (run.report.passed() ? "all checks passed\n" : "some checks FAILED\n");
}

RunConfig resolve_config(const RunConfig& base, const std::string& config_path, const CLI::App& app,
                         const RunConfig& flags, const std::string& delta_text) {
  RunConfig c = config_path.empty() ? base : load_run_config(config_path);
  const auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--scenario")) {
    c.scenario = flags.scenario;
    c.inline_scenario.reset();
  }
  if (given("--qubits")) c.qubits = flags.qubits;
  if (given("--delta-t")) c.delta_t = parse_delta_list(delta_text);
  if (given("--cycles")) c.cycles = flags.cycles;
  if (given("--quad-points")) c.quad_points = flags.quad_points;
  if (given("--slices")) c.slices = flags.slices;
  if (given("--trials")) c.trials = flags.trials;
  if (given("--seed")) c.seed = flags.seed;
  if (given("--fault-scale")) c.fault_scale = flags.fault_scale;
  if (given("--out")) c.out = flags.out;
  if (given("--verbose")) c.verbosity = flags.verbosity;
  validate_run_config(c);
  return c;
}

}  // namespace

Json verify_summary(const RunConfig& config, const Scenario& scenario, const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}, {"notice", c.notice}});
  }
  return {{"scenario", scenario.name},
          {"group_order", scenario.group.group.order()},
          {"cycle_length", scenario.path.length()},
          {"path", format_path(scenario.path.colors)},
          {"delta_t", scenario.delta_t},
          {"quad_points", config.quad_points},
          {"trials", config.trials},
          {"seed", config.seed},
          {"checks", checks},
          {"passed", report.passed()}};
}

std::string sweep_csv(const ScalingTable& table) {
  std::ostringstream os;
  os << "delta_t,cycle_time,cycles,distance,quad_error\n";
  for (const auto& r : table.rows) {
    os << sci(r.delta_t) << "," << sci(r.cycle_time) << "," << r.cycles << "," << sci(r.distance) << "," << sci(r.quad_error) << "\n";
  }
  for (const auto& n : table.notices) os << "# notice: " << n << "\n";
  if (table.slope) os << "# slope=" << std::fixed << std::setprecision(6) << *table.slope << "\n";
  return os.str();
}

int cmd_list(bool json, std::ostream& out) {
  const auto catalog = scenario_catalog();
  if (json) {
    Json doc = Json::array();
    for (const auto& e : catalog) doc.push_back({{"name", e.name}, {"description", e.description}});
    out << doc.dump(2) << "\n";
    return kExitPass;
  }
  for (const auto& e : catalog) out << std::left << std::setw(14) << e.name << e.description << "\n";
  return kExitPass;
}

int cmd_verify(const RunConfig& config, bool json, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = build_scenario(config, config.delta_t.front());
  } catch (const Error& e) {
    err << "eulerdd: " << e.what() << "\n";
    return kExitConfigError;
  }
  const auto run = run_verify(config, scenario);
  const std::string summary = summary_of(config, scenario, run).dump(2) + "\n";
  if (json) out << summary;
  else if (config.verbosity > 0) print_human(scenario, run, out);
  if (!config.out.empty()) emit(config, summary, out);
  if (!run.report.passed()) err << "eulerdd: verification failed for " << scenario.name << "\n";
  return run.report.passed() ? kExitPass : kExitCheckFailed;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = build_scenario(config, config.delta_t.front());
  } catch (const Error& e) {
    err << "eulerdd: " << e.what() << "\n";
    return kExitConfigError;
  }
  const auto table = scaling_study(scenario, config.delta_t, config.cycles, config.slices, config.quad_points);
  emit(config, sweep_csv(table), out);
  if (config.verbosity > 1 && !config.out.empty()) out << "wrote " << config.out << "\n";
  return kExitPass;
}

int cmd_export_schedule(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = build_scenario(config, config.delta_t.front());
  } catch (const Error& e) {
    err << "eulerdd: " << e.what() << "\n";
    return kExitConfigError;
  }
  emit(config, export_schedule(scenario.schedule()).dump(2) + "\n", out);
  return kExitPass;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eulerian dynamical decoupling: verification, sweeps and schedule export", "eulerdd"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path;
  std::string delta_text;
  bool json = false;
  app.add_option("--scenario", flags.scenario, "built-in scenario name");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--qubits", flags.qubits, "qubit count for pauli / spin-flip");
  app.add_option("--delta-t", delta_text, "sub-interval length, or comma-separated list for sweeps");
  app.add_option("--cycles", flags.cycles, "number of control cycles M");
  app.add_option("--quad-points", flags.quad_points, "Simpson intervals per segment");
  app.add_option("--slices", flags.slices, "simulation slices per sub-interval");
  app.add_option("--trials", flags.trials, "random trials per check");
  app.add_option("--seed", flags.seed, "seed for every random draw");
  app.add_option("--fault-scale", flags.fault_scale, "multiplier on fault amplitudes");
  app.add_option("--out", flags.out, "output path");
  app.add_option("--verbose", flags.verbosity, "verbosity level");
  app.add_flag("--json", json, "machine-readable output");

  auto* list = app.add_subcommand("list", "list built-in scenarios");
  auto* verify = app.add_subcommand("verify", "run the scenario's checks");
  auto* sweep = app.add_subcommand("sweep", "decoupling error against cycle time, as CSV");
  auto* exporter = app.add_subcommand("export-schedule", "write the control timeline as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "eulerdd: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  try {
    if (list->parsed()) return cmd_list(json, out);
    const RunConfig config = resolve_config(RunConfig{}, config_path, app, flags, delta_text);
    if (verify->parsed()) return cmd_verify(config, json, out, err);
    if (sweep->parsed()) return cmd_sweep(config, out, err);
    if (exporter->parsed()) return cmd_export_schedule(config, out, err);
  } catch (const Error& e) {
    err << "eulerdd: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kExitConfigError : kExitCheckFailed;
  }
  return kExitConfigError;
}

}  // namespace eulerdd
