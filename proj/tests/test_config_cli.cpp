#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eulerdd/cli.hpp"
#include "eulerdd/config.hpp"
#include "eulerdd/error.hpp"

using namespace eulerdd;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::PreconditionViolation;
}

}  // namespace

TEST_CASE("matrix parsing") {
  CHECK((parse_matrix("XZ") - pauli_string("XZ")).norm() == 0.0);
  const Matrix m = parse_matrix(Json::parse(R"([[0, [0, -1]], [[0, 1], 0]])"));
  CHECK((m - sigma_y()).norm() == 0.0);
  CHECK(code_of([] { parse_matrix(Json::parse("[[1, 2], [3]]")); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_matrix(Json::parse("[[1, [1, 2, 3]], [0, 1]]")); }) == ErrorCode::ConfigError);
  Rng rng(4);
  const Matrix h = random_hermitian(rng, 3);
  CHECK((parse_matrix(matrix_to_json(h)) - h).norm() == 0.0);
}

TEST_CASE("run config keys are strict") {
  const auto c = parse_run_config(Json::parse(R"({"scenario": "pauli", "qubits": 2, "delta_t": [0.02, 0.01]})"));
  CHECK(c.scenario == "pauli");
  CHECK(c.qubits == 2);
  CHECK(c.delta_t == std::vector<double>{0.02, 0.01});
  CHECK(code_of([] { parse_run_config(Json::parse(R"({"scenari": "pauli"})")); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_run_config(Json::parse(R"({"cycles": -1})")); }) == ErrorCode::ConfigError);
  RunConfig bad;
  bad.delta_t = {-1.0};
  CHECK(code_of([&] { validate_run_config(bad); }) == ErrorCode::ConfigError);
  bad = {};
  bad.quad_points = 7;
  CHECK(code_of([&] { validate_run_config(bad); }) == ErrorCode::ConfigError);
  CHECK_NOTHROW(validate_run_config(RunConfig{}));
}

TEST_CASE("config file with comments") {
  const auto p = temp_file("eulerdd_cfg.json", "// sweep\n{\"scenario\": \"carr-purcell\", /* short */ \"cycles\": 3}\n");
  const auto c = load_run_config(p);
  CHECK(c.cycles == 3);
  std::filesystem::remove(p);
  CHECK(code_of([] { load_run_config("/nonexistent/eulerdd.json"); }) == ErrorCode::ConfigError);
}

TEST_CASE("inline scenario reproduces Carr-Purcell") {
  const Json doc = Json::parse(R"({
    "name": "cp-inline",
    "generators": ["X"],
    "path": "1,1",
    "profiles": [{"generator": 1, "axis": "X"}],
    "drift": {"env_dim": 1, "h_system": "Z"},
    "faults": [{"name": "over-rotation", "units": "per_delta_t",
                "per_generator": [{"generator": 1, "hamiltonian": "X", "amplitude": 0.1}]}],
    "noise": ["Z"],
    "checks": [{"kind": "cycle_length"}, {"kind": "theorem", "tolerance": 1e-8},
               {"kind": "residual_equals", "fault": 1, "target": [[0, 10], [10, 0]], "tolerance": 1e-9},
               {"kind": "noise_suppressed", "tolerance": 1e-12}]
  })");
  const auto s = scenario_from_json(doc, {});
  CHECK(s.name == "cp-inline");
  CHECK(s.path.length() == 2);
  const auto report = run_checks(s, {.trials = 10});
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
  CHECK(report.checks.size() == 4);
}

TEST_CASE("inline scenario with an explicit group table") {
  const Json doc = Json::parse(R"({
    "group": {"elements": ["e", "x"], "table": [[0, 1], [1, 0]], "generators": ["x"]},
    "representation": ["I", "X"],
    "profiles": [{"generator": 1, "axis": "X"}]
  })");
  const auto s = scenario_from_json(doc, {});
  CHECK(s.group.group.order() == 2);
  CHECK(s.path.length() == 2);  // Hierholzer fills the path in
  CHECK(code_of([] { scenario_from_json(Json::parse(R"({"profiles": []})"), {}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] {
          scenario_from_json(Json::parse(R"({"generators": ["X"], "profiles": [{"generator": 1, "axis": "X"}],
                                             "checks": [{"kind": "bogus"}]})"),
                             {});
        }) == ErrorCode::ConfigError);
}

TEST_CASE("schedule export and import round-trip") {
  for (const char* name : {"carr-purcell", "pauli", "symmetric-s3"}) {
    CAPTURE(name);
    const auto s = make_scenario(name).schedule();
    const Json doc = Json::parse(export_schedule(s).dump());
    const auto back = import_schedule(doc);
    REQUIRE(back.intervals() == s.intervals());
    const auto a = s.timeline();
    const auto b = back.timeline();
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::abs(a[k].start - b[k].start) <= 1e-12);
      CHECK(std::abs(a[k].duration - b[k].duration) <= 1e-12);
      CHECK((a[k].control - b[k].control).norm() <= 1e-12);
    }
    for (std::size_t l = 0; l <= s.intervals(); ++l) CHECK(phase_distance(s.frames[l], back.frames[l]) <= 1e-12);
  }
}

TEST_CASE("S3 export lists two segments for each gamma_2 interval") {
  const auto doc = export_schedule(make_scenario("symmetric-s3").schedule());
  CHECK(doc.at("format") == "eulerdd-schedule");
  CHECK(doc.at("path") == "2,2,2,1,2,1,1,2,1,1,2,1");
  std::vector<int> per_interval(12, 0);
  for (const auto& row : doc.at("timeline")) ++per_interval[row.at("interval").get<std::size_t>() - 1];
  const std::string path = "222121121121";
  for (std::size_t l = 0; l < 12; ++l) CHECK(per_interval[l] == (path[l] == '2' ? 2 : 1));
  CHECK(doc.at("hamiltonians").size() == 2);
  Json tampered = doc;
  tampered["timeline"][1]["start"] = 0.5;
  CHECK(code_of([&] { import_schedule(tampered); }) == ErrorCode::ConfigError);
}

TEST_CASE("bang-bang schedules are not exported") {
  const auto g = close_group(std::vector<Matrix>{sigma_x()}, 4);
  CHECK(code_of([&] { export_schedule(bangbang_schedule(g, 0.1)); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("cli exit codes") {
  CHECK(cli({"list"}).code == kExitPass);
  CHECK(cli({"verify", "--scenario", "carr-purcell", "--trials", "10"}).code == kExitPass);
  const auto bad = cli({"verify", "--delta-t", "-1"});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.err.find("config error") != std::string::npos);
  CHECK(cli({"verify", "--scenario", "nope"}).code == kExitConfigError);
  CHECK(cli({"verify", "--bogus"}).code == kExitConfigError);
  CHECK(cli({}).code == kExitConfigError);
  CHECK(cli({"verify", "--scenario", "pauli", "--qubits", "4"}).code != kExitPass);
}

TEST_CASE("cli verify reports failures with exit code 1") {
  const Json doc = {{"scenario",
                     {{"generators", {"X"}},
                      {"profiles", {{{"generator", 1}, {"axis", "X"}}}},
                      {"noise", {"X"}},
                      {"checks", {{{"kind", "noise_suppressed"}, {"tolerance", 1e-12}}}}}},
                    {"trials", 5}};
  const auto p = temp_file("eulerdd_fail.json", doc.dump());
  const auto r = cli({"verify", "--config", p.string()});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
  std::filesystem::remove(p);
}

TEST_CASE("cli list --json") {
  const auto r = cli({"list", "--json"});
  const auto j = Json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j.size() == 4);
  CHECK(j[1].at("name") == "pauli");
}

TEST_CASE("cli verify --json and determinism") {
  const std::vector<std::string> args{"verify", "--scenario", "symmetric-s3", "--trials", "10", "--json"};
  const auto a = cli(args);
  const auto b = cli(args);
  CHECK(a.code == kExitPass);
  CHECK(a.out == b.out);
  const auto j = Json::parse(a.out);
  CHECK(j.at("passed") == true);
  CHECK(j.at("scenario") == "symmetric-s3");
}

TEST_CASE("cli sweep writes CSV") {
  const auto r = cli({"sweep", "--scenario", "carr-purcell", "--delta-t", "0.02,0.01,0.002", "--cycles", "2",
                      "--slices", "32", "--quad-points", "32"});
  CHECK(r.code == kExitPass);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "delta_t,cycle_time,cycles,distance,quad_error");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) != 0) ++rows;
    last = line;
  }
  CHECK(rows == 3);
  CHECK(last.rfind("# slope=", 0) == 0);
}

TEST_CASE("cli export-schedule writes to --out") {
  const auto path = std::filesystem::temp_directory_path() / "eulerdd_schedule.json";
  const auto r = cli({"export-schedule", "--scenario", "symmetric-s3", "--out", path.string()});
  CHECK(r.code == kExitPass);
  std::ifstream in(path);
  const auto doc = Json::parse(in);
  CHECK(doc.at("timeline").size() == 18);
  std::filesystem::remove(path);
}

#ifdef EULERDD_CLI_PATH
TEST_CASE("installed binary runs") {
  const std::string cmd = std::string(EULERDD_CLI_PATH) + " list > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
#endif

TEST_CASE("cli verify pauli across ten fault seeds") {
  for (int seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    CHECK(cli({"verify", "--scenario", "pauli", "--seed", std::to_string(seed), "--trials", "10"}).code == kExitPass);
  }
}

TEST_CASE("cli sweep on symmetric-s3 and single point") {
  const auto r = cli({"sweep", "--scenario", "symmetric-s3", "--delta-t", "0.02,0.01,0.002", "--cycles", "2"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("# slope=") != std::string::npos);
  const auto one = cli({"sweep", "--scenario", "carr-purcell", "--delta-t", "0.01"});
  CHECK(one.code == kExitPass);
  CHECK(one.out.find("# notice: single point: slope omitted") != std::string::npos);
  CHECK(one.out.find("# slope=") == std::string::npos);
}
