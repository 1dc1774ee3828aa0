#include <doctest.h>

#include <cmath>

#include "eulerdd/analysis.hpp"
#include "eulerdd/error.hpp"

using namespace eulerdd;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ConfigError;
}

std::size_t block_with_dimension(const Scenario& s, Eigen::Index d) {
  const auto dec = decompose_irreps(s.group.rep);
  for (std::size_t j = 0; j < dec.blocks.size(); ++j)
    if (dec.blocks[j].dimension == d) return j;
  FAIL("no such block");
  return 0;
}

}  // namespace

TEST_CASE("catalog lists the four built-in scenarios") {
  const auto cat = scenario_catalog();
  REQUIRE(cat.size() == 4);
  CHECK(cat[0].name == "carr-purcell");
  CHECK(cat[3].name == "symmetric-s3");
  CHECK(code_of([] { make_scenario("nope"); }) == ErrorCode::ConfigError);
}

TEST_CASE("every built-in scenario passes its checks") {
  for (const auto& s : builtin_scenarios()) {
    CAPTURE(s.name);
    const auto report = run_checks(s, {.trials = 20, .quad_points = 64, .seed = 3});
    for (const auto& c : report.checks) {
      CAPTURE(c.name);
      CAPTURE(c.value);
      CHECK(c.passed);
    }
    CHECK(report.passed());
  }
}

TEST_CASE("cycle lengths") {
  CHECK(make_scenario("carr-purcell").path.length() == 2);
  CHECK(make_scenario("pauli").path.length() == 8);
  CHECK(make_scenario("pauli", {.qubits = 2}).path.length() == 64);
  CHECK(make_scenario("spin-flip", {.qubits = 3}).path.length() == 8);
  CHECK(make_scenario("symmetric-s3").path.length() == 12);
}

TEST_CASE("size guards") {
  CHECK(code_of([] { make_scenario("pauli", {.qubits = 4}); }) == ErrorCode::PreconditionViolation);
  CHECK(code_of([] { make_scenario("spin-flip", {.qubits = 5}); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("out-of-algebra controls skip the theorem with a notice") {
  ScenarioOptions o;
  o.qubits = 2;
  const auto s = spin_flip_scenario(o, false);
  CHECK_FALSE(s.controls_in_algebra());
  const auto t = verify_theorem(s, 10, 1e-8, 1);
  CHECK(t.skipped);
  CHECK(t.notice.find("outside the group algebra") != std::string::npos);
  CHECK_FALSE(t.passed);
  // Q still differs from Pi for these controls
  CHECK(t.max_deviation > 1e-6);
}

TEST_CASE("theorem and projector reports") {
  const auto s = make_scenario("symmetric-s3");
  const auto t = verify_theorem(s, 30, 1e-8, 2);
  CHECK(t.passed);
  CHECK(t.max_deviation < 1e-10);
  const auto p = projector_properties(s, 30, 1e-9, 2);
  CHECK(p.passed);
}

TEST_CASE("robustness classification") {
  const auto cp = make_scenario("carr-purcell");
  const auto in = robustness_report(cp, cp.faults[0]);
  CHECK(in.fault_case == FaultCase::NonPrimaryInAlgebra);
  CHECK(in.consistent);
  CHECK(in.center_distance < 1e-9);
  for (const auto& b : in.blocks) CHECK(b.classification == BlockClass::ProtectedSubspace);

  const auto pauli = make_scenario("pauli");
  const auto r = robustness_report(pauli, pauli.faults[0]);
  // the Pauli algebra is all of M_2, so every fault is in it
  CHECK(r.fault_case == FaultCase::PrimaryInAlgebra);
  CHECK(r.residual_norm < 1e-8);
  CHECK(r.consistent);

  const auto s3 = make_scenario("symmetric-s3");
  const auto arb = robustness_report(s3, s3.faults[1]);
  CHECK(arb.fault_case == FaultCase::Arbitrary);
  CHECK(arb.consistent);
  CHECK(arb.commutant_distance < 1e-9);
  CHECK(arb.cross_block < 1e-9);
  const std::size_t j1 = block_with_dimension(s3, 2);
  CHECK(arb.blocks[j1].classification == BlockClass::NoiselessFactor);
  CHECK(arb.blocks[j1].factor_deviation < 1e-9);
  const auto alg = robustness_report(s3, s3.faults[0]);
  CHECK(alg.fault_case == FaultCase::NonPrimaryInAlgebra);
  CHECK(alg.consistent);
  CHECK(to_string(FaultCase::Arbitrary).size() > 0);
  CHECK(to_string(BlockClass::NoiselessFactor) == "noiseless D_J factor");
}

TEST_CASE("symmetric group block labels") {
  const auto s = make_scenario("symmetric-s3");
  auto dec = decompose_irreps(s.group.rep);
  label_symmetric_blocks(dec, swap_gate(0, 1, 3), 3);
  REQUIRE(dec.blocks.size() == 2);
  CHECK(dec.blocks[0].label == "[2 1]");
  CHECK(dec.blocks[1].label == "[3]");
}

TEST_CASE("noise suppression reports") {
  const auto cp = make_scenario("carr-purcell");
  const auto n = noise_suppression_check(cp);
  CHECK(n.full);
  CHECK(n.central);
  // sigma_x survives the Carr-Purcell average
  const auto x = noise_suppression_check(cp, {sigma_x()});
  CHECK_FALSE(x.full);
  CHECK(x.central);

  // local noise on three qubits: only the two-dimensional S3 irrep factor is protected
  const auto s3 = make_scenario("symmetric-s3");
  const auto r = noise_suppression_check(s3);
  CHECK_FALSE(r.full);
  CHECK(r.dj_only);
  const std::size_t j1 = block_with_dimension(s3, 2);
  for (const auto& t : r.terms) CHECK(t.factor_deviations[j1] < 1e-10);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK(loglog_slope({1, 10}, {5, 0.5}) == doctest::Approx(-1.0));
}

TEST_CASE("scaling study notices") {
  auto s = make_scenario("carr-purcell");
  s.drift.h_system.setZero();
  s.drift.h_env.setZero();
  s.drift.couplings.clear();
  const auto zero = scaling_study(s, {0.02, 0.01, 0.002}, 2, 32, 32);
  CHECK_FALSE(zero.slope.has_value());
  bool found = false;
  for (const auto& n : zero.notices) found = found || n.find("round-off") != std::string::npos;
  CHECK(found);

  const auto single = scaling_study(make_scenario("carr-purcell"), {0.01}, 2, 32, 32);
  CHECK_FALSE(single.slope.has_value());
  REQUIRE(single.rows.size() == 1);
  CHECK(single.notices.front() == "single point: slope omitted");
}

TEST_CASE("bang-bang scaling is second order") {
  const auto s = make_scenario("pauli");
  const auto drift = generic_drift(2, 2, 7);
  const auto t = scaling_study(s, {0.02, 0.01, 0.005, 0.002}, 4, 64, 64, ScheduleKind::BangBang, &drift);
  REQUIRE(t.slope.has_value());
  CHECK(*t.slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(t.monotonic);
  CHECK(t.rows.size() == 4);
  CHECK(t.rows[0].cycle_time == doctest::Approx(0.08));
}

TEST_CASE("D_J encoding outlives C_J encoding under an arbitrary fault") {
  const auto s = make_scenario("symmetric-s3");
  const std::size_t j1 = block_with_dimension(s, 2);
  const double d = block_fidelity_error(s, &s.faults[1], j1, EncodingFactor::D, 10, 8, 5, 32);
  const double c = block_fidelity_error(s, &s.faults[1], j1, EncodingFactor::C, 10, 8, 5, 32);
  CAPTURE(d);
  CAPTURE(c);
  CHECK(c > 10.0 * d);
}

TEST_CASE("decoupling beats free evolution") {
  const auto s = make_scenario("pauli");
  const double with = decoupled_fidelity_error(s, &s.faults[0], 10, 8, 3, 32);
  const double without = undecoupled_fidelity_error(s, &s.faults[0], 10, 8, 3);
  CAPTURE(with);
  CAPTURE(without);
  CHECK(without > 10.0 * with);
}

TEST_CASE("generic drift") {
  const auto d = generic_drift(4, 3, 11);
  CHECK_NOTHROW(validate_drift(d));
  CHECK(d.couplings.size() == 3);
  const auto e = generic_drift(4, 3, 11);
  CHECK((d.total() - e.total()).norm() == 0.0);
  CHECK((d.total() - generic_drift(4, 3, 12).total()).norm() > 0.1);
}
