#include "eulerdd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "eulerdd/error.hpp"

namespace eulerdd {

namespace {

constexpr std::size_t kImportMaxOrder = 4096;

[[noreturn]] void config_error(const std::string& why) { throw Error(ErrorCode::ConfigError, "config error: " + why); }

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) config_error("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_as(const Json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error("'" + key + "' in " + where + " is missing or has the wrong type");
  }
}

std::size_t get_count(const Json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) config_error("'" + key + "' in " + where + " must be a non-negative integer");
  return v.get<std::size_t>();
}

// 1-based index field converted to 0-based.
std::size_t get_index(const Json& obj, const std::string& key, const std::string& where) {
  const std::size_t k = get_count(obj, key, where);
  if (k == 0) config_error("'" + key + "' in " + where + " is 1-based");
  return k - 1;
}

double amplitude_unit(const Json& obj, double delta_t, const std::string& where) {
  const std::string units = obj.value("units", std::string("absolute"));
  if (units == "absolute") return 1.0;
  if (units == "per_delta_t") return 1.0 / delta_t;
  config_error("units in " + where + " must be 'absolute' or 'per_delta_t'");
}

std::vector<std::size_t> parse_path_json(const Json& j) {
  if (j.is_string()) return parse_path(j.get<std::string>());
  if (!j.is_array()) config_error("path must be a string or a list of 1-based colours");
  std::vector<std::size_t> out;
  for (const auto& c : j) {
    if (!c.is_number_integer() || c.get<long long>() < 1) config_error("path colours are positive integers");
    out.push_back(c.get<std::size_t>() - 1);
  }
  return out;
}

RepresentedGroup group_from_json(const Json& doc) {
  if (doc.contains("group")) {
    const auto& g = doc.at("group");
    check_keys(g, {"elements", "table", "generators"}, "group");
    Group group;
    group.elements = get_as<std::vector<std::string>>(g, "elements", "group");
    group.mult_table = get_as<std::vector<std::vector<std::size_t>>>(g, "table", "group");
    for (const auto& label : get_as<std::vector<std::string>>(g, "generators", "group")) {
      const auto it = std::find(group.elements.begin(), group.elements.end(), label);
      if (it == group.elements.end()) config_error("generator '" + label + "' is not a group element");
      group.generators.push_back(static_cast<std::size_t>(it - group.elements.begin()));
    }
    validate_group(group);
    if (!doc.contains("representation")) config_error("an explicit group needs a 'representation' list");
    UnitaryRep rep;
    for (const auto& m : doc.at("representation")) rep.matrices.push_back(parse_matrix(m));
    rep.dimension = rep.matrices.empty() ? 0 : rep.matrices.front().rows();
    validate_rep(group, rep);
    return {std::move(group), std::move(rep)};
  }
  if (!doc.contains("generators")) config_error("scenario needs 'generators' or 'group' + 'representation'");
  std::vector<Matrix> gens;
  for (const auto& m : doc.at("generators")) gens.push_back(parse_matrix(m));
  const std::size_t max_order = doc.contains("max_order") ? get_count(doc, "max_order", "scenario") : 256;
  return close_group(gens, max_order);
}

PulseProfile profile_from_json(const Json& p, const RepresentedGroup& g, double delta_t) {
  check_keys(p, {"generator", "axis", "segments", "units"}, "profile");
  const std::size_t lambda = get_index(p, "generator", "profile");
  if (p.contains("axis")) {
    if (p.contains("segments")) config_error("profile takes either 'axis' or 'segments'");
    return constant_profile(lambda, g, delta_t, parse_matrix(p.at("axis")));
  }
  if (!p.contains("segments")) config_error("profile needs 'axis' or 'segments'");
  const double unit = amplitude_unit(p, delta_t, "profile");
  std::vector<PulseSegment> segments;
  for (const auto& s : p.at("segments")) {
    check_keys(s, {"fraction", "axis", "amplitude"}, "profile segment");
    segments.push_back({get_as<double>(s, "fraction", "profile segment"), parse_matrix(s.at("axis")),
                        unit * get_as<double>(s, "amplitude", "profile segment")});
  }
  return piecewise_profile(lambda, g, std::move(segments), delta_t);
}

DriftModel drift_from_json(const Json& d, Eigen::Index dim, std::uint64_t seed) {
  check_keys(d, {"env_dim", "h_system", "h_env", "couplings", "generic", "seed"}, "drift");
  const Eigen::Index env = d.contains("env_dim") ? static_cast<Eigen::Index>(get_count(d, "env_dim", "drift")) : 1;
  if (d.value("generic", false)) {
    const std::uint64_t s = d.contains("seed") ? get_as<std::uint64_t>(d, "seed", "drift") : seed;
    return generic_drift(dim, env, s);
  }
  DriftModel drift;
  drift.system_dim = dim;
  drift.env_dim = env;
  drift.h_system = d.contains("h_system") ? parse_matrix(d.at("h_system")) : Matrix::Zero(dim, dim);
  drift.h_env = d.contains("h_env") ? parse_matrix(d.at("h_env")) : Matrix::Zero(env, env);
  if (d.contains("couplings")) {
    for (const auto& c : d.at("couplings")) {
      check_keys(c, {"system", "env"}, "coupling");
      drift.couplings.push_back({parse_matrix(c.at("system")), parse_matrix(c.at("env"))});
    }
  }
  validate_drift(drift);
  return drift;
}

FaultModel fault_from_json(const Json& f, const RepresentedGroup& g, double delta_t, double scale) {
  check_keys(f, {"name", "units", "per_generator"}, "fault");
  const double unit = amplitude_unit(f, delta_t, "fault") * scale;
  std::vector<GeneratorFault> per;
  for (const auto& pg : f.at("per_generator")) {
    check_keys(pg, {"generator", "segments", "hamiltonian", "amplitude"}, "fault generator");
    GeneratorFault gf;
    gf.generator = get_index(pg, "generator", "fault generator");
    if (pg.contains("hamiltonian")) {
      const double a = pg.value("amplitude", 1.0);
      gf.segments.push_back({1.0, unit * a * parse_matrix(pg.at("hamiltonian"))});
    } else {
      for (const auto& s : pg.at("segments")) {
        check_keys(s, {"fraction", "hamiltonian", "amplitude"}, "fault segment");
        const double a = s.value("amplitude", 1.0);
        gf.segments.push_back({get_as<double>(s, "fraction", "fault segment"), unit * a * parse_matrix(s.at("hamiltonian"))});
      }
    }
    per.push_back(std::move(gf));
  }
  return make_fault_model(f.value("name", std::string("fault")), std::move(per), g.rep);
}

CheckKind check_kind(const std::string& kind) {
  static const std::vector<std::pair<std::string, CheckKind>> kinds{
      {"cycle_length", CheckKind::CycleLength},       {"path_valid", CheckKind::PathValid},
      {"theorem", CheckKind::Theorem},                {"projector", CheckKind::Projector},
      {"residual_below", CheckKind::ResidualBelow},   {"residual_central", CheckKind::ResidualCentral},
      {"residual_equals", CheckKind::ResidualEquals}, {"noise_suppressed", CheckKind::NoiseSuppressed},
      {"abelian", CheckKind::Abelian},                {"noiseless_factor", CheckKind::NoiselessFactor},
  };
  for (const auto& [name, k] : kinds)
    if (name == kind) return k;
  config_error("unknown check kind '" + kind + "'");
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

RunConfig parse_run_config(const Json& doc) {
  check_keys(doc, {"scenario", "qubits", "delta_t", "cycles", "quad_points", "slices", "trials", "seed", "fault_scale",
                   "out", "verbosity"},
             "run config");
  RunConfig c;
  if (doc.contains("scenario")) {
    const auto& s = doc.at("scenario");
    if (s.is_string()) c.scenario = s.get<std::string>();
    else if (s.is_object()) {
      c.inline_scenario = s;
      c.scenario = s.value("name", std::string("custom"));
    } else config_error("'scenario' must be a name or an inline definition");
  }
  if (doc.contains("qubits")) c.qubits = get_count(doc, "qubits", "run config");
  if (doc.contains("delta_t")) {
    const auto& d = doc.at("delta_t");
    if (d.is_number()) c.delta_t = {d.get<double>()};
    else if (d.is_array()) c.delta_t = get_as<std::vector<double>>(doc, "delta_t", "run config");
    else config_error("'delta_t' must be a number or a list");
  }
  if (doc.contains("cycles")) c.cycles = get_count(doc, "cycles", "run config");
  if (doc.contains("quad_points")) c.quad_points = get_count(doc, "quad_points", "run config");
  if (doc.contains("slices")) c.slices = get_count(doc, "slices", "run config");
  if (doc.contains("trials")) c.trials = get_count(doc, "trials", "run config");
  if (doc.contains("seed")) c.seed = get_as<std::uint64_t>(doc, "seed", "run config");
  if (doc.contains("fault_scale")) c.fault_scale = get_as<double>(doc, "fault_scale", "run config");
  if (doc.contains("out")) c.out = get_as<std::string>(doc, "out", "run config");
  if (doc.contains("verbosity")) c.verbosity = get_as<int>(doc, "verbosity", "run config");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path.string());
  try {
    return parse_run_config(Json::parse(in, nullptr, true, true));
  } catch (const nlohmann::json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
}

void validate_run_config(const RunConfig& c) {
  if (c.delta_t.empty()) config_error("delta_t list is empty");
  for (double dt : c.delta_t)
    if (!(dt > 0.0) || !std::isfinite(dt)) config_error("delta_t must be positive, got " + format_double(dt));
  if (c.quad_points < kMinQuadPoints) config_error("quad_points must be at least 8");
  if (c.slices < kMinSlices) config_error("slices must be at least 16");
  if (c.cycles < 1) config_error("cycles must be at least 1");
  if (c.trials < 1) config_error("trials must be at least 1");
  if (!std::isfinite(c.fault_scale)) config_error("fault_scale must be finite");
}

Matrix parse_matrix(const Json& j) {
  if (j.is_string()) {
    try {
      return pauli_string(j.get<std::string>());
    } catch (const Error&) {
      config_error("bad Pauli string '" + j.get<std::string>() + "'");
    }
  }
  if (!j.is_array() || j.empty() || !j.front().is_array()) config_error("matrix must be a Pauli string or a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) config_error("matrix rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) m(r, c) = e.get<double>();
      else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      else config_error("matrix entries are numbers or [re, im] pairs");
    }
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Scenario scenario_from_json(const Json& doc, const ScenarioOptions& o) {
  check_keys(doc, {"name", "description", "generators", "max_order", "group", "representation", "path", "profiles",
                   "drift", "faults", "noise", "checks"},
             "scenario");
  Scenario s;
  s.name = doc.value("name", std::string("custom"));
  s.description = doc.value("description", std::string("inline scenario"));
  s.delta_t = o.delta_t;
  s.group = group_from_json(doc);
  const Eigen::Index d = s.group.rep.dimension;

  if (!doc.contains("profiles")) config_error("scenario needs 'profiles'");
  s.profiles.resize(s.group.generator_count());
  std::vector<bool> seen(s.group.generator_count(), false);
  for (const auto& p : doc.at("profiles")) {
    auto profile = profile_from_json(p, s.group, o.delta_t);
    if (profile.generator >= seen.size()) config_error("profile generator out of range");
    seen[profile.generator] = true;
    s.profiles[profile.generator] = std::move(profile);
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw Error(ErrorCode::IncompleteProfiles, "incomplete profile set: no profile for generator " + std::to_string(k + 1));
  }

  const auto graph = build_cayley(s.group.group);
  if (doc.contains("path")) {
    s.path = {parse_path_json(doc.at("path")), 0};
    const auto check = validate_path(graph, s.path.colors);
    if (!check.valid) config_error("path is not an Eulerian cycle: " + check.diagnostic);
  } else {
    s.path = eulerian_cycle(graph);
  }

  s.drift = doc.contains("drift") ? drift_from_json(doc.at("drift"), d, o.seed) : generic_drift(d, 2, o.seed);
  if (doc.contains("faults")) {
    for (const auto& f : doc.at("faults")) s.faults.push_back(fault_from_json(f, s.group, o.delta_t, o.fault_scale));
  }
  if (doc.contains("noise")) {
    for (const auto& n : doc.at("noise")) s.noise.push_back(parse_matrix(n));
  }

  if (doc.contains("checks")) {
    for (const auto& c : doc.at("checks")) {
      check_keys(c, {"name", "kind", "tolerance", "fault", "expected", "target"}, "check");
      ExpectedCheck e;
      e.kind = check_kind(get_as<std::string>(c, "kind", "check"));
      e.name = c.value("name", get_as<std::string>(c, "kind", "check"));
      e.tolerance = c.value("tolerance", 1e-9);
      if (c.contains("fault")) {
        e.index = get_index(c, "fault", "check");
        if (e.index >= s.faults.size()) config_error("check '" + e.name + "' refers to a missing fault");
      }
      e.expected = c.value("expected", 0.0);
      if (c.contains("target")) e.target = parse_matrix(c.at("target"));
      if (e.kind == CheckKind::CycleLength && !c.contains("expected")) {
        e.expected = static_cast<double>(s.group.group.order() * s.group.generator_count());
      }
      s.checks.push_back(std::move(e));
    }
  } else {
    const double length = static_cast<double>(s.group.group.order() * s.group.generator_count());
    s.checks = {{"cycle length", CheckKind::CycleLength, 0.0, 0, length, {}},
                {"path is Eulerian", CheckKind::PathValid, 0.0, 0, 0.0, {}},
                {"Q equals Pi on random X", CheckKind::Theorem, 1e-8, 0, 0.0, {}},
                {"projector properties", CheckKind::Projector, 1e-9, 0, 0.0, {}}};
  }
  return s;
}

Scenario build_scenario(const RunConfig& config, double delta_t) {
  ScenarioOptions o;
  o.qubits = config.qubits;
  o.delta_t = delta_t;
  o.fault_scale = config.fault_scale;
  o.seed = config.seed;
  if (config.inline_scenario) return scenario_from_json(*config.inline_scenario, o);
  return make_scenario(config.scenario, o);
}

Json export_schedule(const ControlSchedule& schedule) {
  if (schedule.kind != ScheduleKind::Eulerian) {
    throw Error(ErrorCode::InvalidSchedule, "invalid schedule: only Eulerian schedules can be exported");
  }
  // Distinct axes become the Hamiltonian table; amplitudes stay per segment.
  std::vector<Matrix> table;
  const auto id_of = [&](const Matrix& m) {
    for (std::size_t k = 0; k < table.size(); ++k)
      if (table[k].rows() == m.rows() && table[k] == m) return k;
    table.push_back(m);
    return table.size() - 1;
  };
  const auto id_name = [](std::size_t k) { return "H" + std::to_string(k + 1); };

  Json generators = Json::array();
  for (std::size_t c = 0; c < schedule.profiles.size(); ++c) {
    const auto& p = schedule.profiles[c];
    Json segs = Json::array();
    for (const auto& s : p.segments) segs.push_back({{"fraction", s.fraction}, {"hamiltonian", id_name(id_of(s.axis))}, {"amplitude", s.amplitude}});
    generators.push_back({{"generator", c + 1}, {"target", matrix_to_json(p.realized())}, {"segments", segs}});
  }

  Json timeline = Json::array();
  for (std::size_t l = 0; l < schedule.intervals(); ++l) {
    const auto color = schedule.sequence[l];
    const auto& p = schedule.profiles[color];
    double offset = 0.0;
    for (const auto& s : p.segments) {
      timeline.push_back({{"interval", l + 1},
                          {"generator", color + 1},
                          {"start", static_cast<double>(l) * schedule.delta_t + offset * schedule.delta_t},
                          {"duration", s.fraction * schedule.delta_t},
                          {"hamiltonian", id_name(id_of(s.axis))},
                          {"amplitude", s.amplitude}});
      offset += s.fraction;
    }
  }

  Json hams = Json::array();
  for (std::size_t k = 0; k < table.size(); ++k) hams.push_back({{"id", id_name(k)}, {"matrix", matrix_to_json(table[k])}});

  return {{"format", "eulerdd-schedule"},
          {"version", 1},
          {"kind", "eulerian"},
          {"dimension", schedule.dimension()},
          {"delta_t", schedule.delta_t},
          {"cycle_time", schedule.cycle_time},
          {"path", format_path(schedule.sequence)},
          {"hamiltonians", hams},
          {"generators", generators},
          {"timeline", timeline}};
}

ControlSchedule import_schedule(const Json& doc) {
  check_keys(doc, {"format", "version", "kind", "dimension", "delta_t", "cycle_time", "path", "hamiltonians", "generators",
                   "timeline"},
             "schedule");
  if (doc.value("format", std::string()) != "eulerdd-schedule") config_error("not a schedule document");
  if (doc.value("kind", std::string()) != "eulerian") config_error("only Eulerian schedules can be imported");
  const double dt = get_as<double>(doc, "delta_t", "schedule");
  if (!(dt > 0.0)) config_error("delta_t must be positive");

  std::vector<std::pair<std::string, Matrix>> table;
  for (const auto& h : doc.at("hamiltonians")) {
    check_keys(h, {"id", "matrix"}, "hamiltonian");
    table.emplace_back(get_as<std::string>(h, "id", "hamiltonian"), parse_matrix(h.at("matrix")));
  }
  const auto lookup = [&](const std::string& id) -> const Matrix& {
    for (const auto& [name, m] : table)
      if (name == id) return m;
    config_error("unknown hamiltonian id '" + id + "'");
  };

  std::vector<Matrix> targets;
  std::vector<std::vector<PulseSegment>> segments;
  for (const auto& g : doc.at("generators")) {
    check_keys(g, {"generator", "target", "segments"}, "generator");
    if (get_index(g, "generator", "generator") != targets.size()) config_error("generators must be listed in order");
    targets.push_back(parse_matrix(g.at("target")));
    std::vector<PulseSegment> segs;
    for (const auto& s : g.at("segments")) {
      check_keys(s, {"fraction", "hamiltonian", "amplitude"}, "segment");
      segs.push_back({get_as<double>(s, "fraction", "segment"), lookup(get_as<std::string>(s, "hamiltonian", "segment")),
                      get_as<double>(s, "amplitude", "segment")});
    }
    segments.push_back(std::move(segs));
  }

  const auto group = close_group(targets, kImportMaxOrder);
  std::vector<PulseProfile> profiles;
  for (std::size_t c = 0; c < targets.size(); ++c) profiles.push_back(piecewise_profile(c, group, segments[c], dt));
  const EulerPath path{parse_path_json(doc.at("path")), 0};
  auto schedule = eulerian_schedule(path, profiles, dt);

  if (doc.contains("timeline")) {
    const auto expected = export_schedule(schedule).at("timeline");
    const auto& given = doc.at("timeline");
    if (given.size() != expected.size()) config_error("timeline does not match the generator profiles");
    for (std::size_t k = 0; k < given.size(); ++k) {
      const bool same = std::abs(given[k].at("start").get<double>() - expected[k].at("start").get<double>()) <= 1e-12 &&
                        std::abs(given[k].at("duration").get<double>() - expected[k].at("duration").get<double>()) <= 1e-12 &&
                        given[k].at("generator") == expected[k].at("generator");
      if (!same) config_error("timeline row " + std::to_string(k + 1) + " does not match the generator profiles");
    }
  }
  return schedule;
}

}  // namespace eulerdd
