#include <doctest.h>

#include <numbers>

#include "eulerdd/error.hpp"
#include "eulerdd/pulses.hpp"

using namespace eulerdd;

namespace {

constexpr double kPi = std::numbers::pi;

RepresentedGroup cp() { return close_group(std::vector<Matrix>{sigma_x()}, 4); }

RepresentedGroup s3() {
  const Matrix s12 = swap_gate(0, 1, 3);
  return close_group(std::vector<Matrix>{s12, s12 * swap_gate(1, 2, 3)}, 16);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("constant profile picks the smallest rotation") {
  const auto g = cp();
  const double dt = 0.01;
  const auto p = constant_profile(0, g, dt, sigma_x());
  REQUIRE(p.segments.size() == 1);
  // |int f| = pi/2
  CHECK(std::abs(p.segments[0].amplitude) * dt == doctest::Approx(kPi / 2.0));
  CHECK(p.realization_error < kRealizationTol);
  CHECK(p.in_algebra);
  CHECK(phase_distance(p.realized(), sigma_x()) < 1e-12);
  CHECK((p.propagator(0.0) - identity(2)).norm() == 0.0);
  CHECK(p.max_norm() == doctest::Approx(kPi / 2.0 / dt));
}

TEST_CASE("constant profile errors") {
  const auto g = cp();
  CHECK(code_of([&] { constant_profile(0, g, 0.01, sigma_z()); }) == ErrorCode::UnreachableGenerator);
  CHECK(code_of([&] { constant_profile(0, g, 0.01, identity(3)); }) == ErrorCode::UnreachableGenerator);
  CHECK(code_of([&] { constant_profile(3, g, 0.01, sigma_x()); }) == ErrorCode::ProfileMismatch);
  CHECK(code_of([&] { constant_profile(0, g, -1.0, sigma_x()); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("Heisenberg profiles realise the S3 generators") {
  const auto g = s3();
  const double dt = 0.02;
  const double a1 = kPi / (4.0 * dt);
  const double a2 = kPi / (2.0 * dt);
  const auto h12 = heisenberg(0, 1, 3);
  const auto h23 = heisenberg(1, 2, 3);
  const auto p1 = piecewise_profile(0, g, {{1.0, h12, a1}}, dt);
  const auto p2 = piecewise_profile(1, g, {{0.5, h23, a2}, {0.5, h12, a2}}, dt);
  CHECK(p1.realization_error < 1e-12);
  CHECK(p2.realization_error < 1e-12);
  CHECK(p1.in_algebra);
  CHECK(p2.in_algebra);
  // swapped halves give swap23 swap12 instead
  CHECK(code_of([&] { piecewise_profile(1, g, {{0.5, h12, a2}, {0.5, h23, a2}}, dt); }) == ErrorCode::ProfileMismatch);
  CHECK(code_of([&] { piecewise_profile(0, g, {{0.6, h12, a1}}, dt); }) != ErrorCode::ConfigError);
}

TEST_CASE("out-of-algebra controls are detected") {
  const auto g = close_group(std::vector<Matrix>{pauli_string("XX"), pauli_string("ZZ")}, 8);
  const Matrix local = embed(sigma_x(), 0, 2) + embed(sigma_x(), 1, 2);
  const auto p = constant_profile(0, g, 0.01, local);
  CHECK(p.realization_error < 1e-10);
  CHECK_FALSE(p.in_algebra);
  CHECK(constant_profile(0, g, 0.01, pauli_string("XX")).in_algebra);
}

TEST_CASE("rescaling keeps the rotation") {
  const auto g = s3();
  const auto p = piecewise_profile(0, g, {{1.0, heisenberg(0, 1, 3), kPi / 4.0}}, 1.0);
  const auto q = p.rescaled(0.001);
  CHECK(q.delta_t == 0.001);
  CHECK(q.segments[0].amplitude == doctest::Approx(kPi / 4.0 * 1000.0));
  CHECK((q.realized() - p.realized()).norm() < 1e-12);
}

TEST_CASE("Eulerian schedule frames") {
  const auto g = s3();
  const double dt = 0.01;
  std::vector<PulseProfile> profiles{
      piecewise_profile(0, g, {{1.0, heisenberg(0, 1, 3), kPi / (4.0 * dt)}}, dt),
      piecewise_profile(1, g, {{0.5, heisenberg(1, 2, 3), kPi / (2.0 * dt)}, {0.5, heisenberg(0, 1, 3), kPi / (2.0 * dt)}}, dt)};
  const EulerPath path{parse_path("2,2,2,1,2,1,1,2,1,1,2,1"), 0};
  const auto s = eulerian_schedule(path, profiles, 0.005);
  CHECK(s.intervals() == 12);
  CHECK(s.cycle_time == doctest::Approx(0.06));
  REQUIRE(s.frames.size() == 13);
  CHECK(phase_distance(s.frames.back(), identity(8)) < 1e-10);
  // every group element is visited twice along the path (|Gamma| = 2)
  for (std::size_t l = 0; l < 12; ++l) {
    bool found = false;
    for (const auto& m : g.rep.matrices) found = found || equal_up_to_phase(s.frames[l], m, 1e-9);
    CHECK(found);
  }
  const auto timeline = s.timeline();
  CHECK(timeline.size() == 12 + 6);  // six gamma_2 intervals have two segments
  double t = 0.0;
  for (const auto& seg : timeline) {
    CHECK(seg.start == doctest::Approx(t));
    t += seg.duration;
  }
  CHECK(t == doctest::Approx(s.cycle_time));
  CHECK(s.max_control_norm() > 0.0);
}

TEST_CASE("schedule construction errors") {
  const auto g = cp();
  const auto p = constant_profile(0, g, 0.01, sigma_x());
  CHECK(code_of([&] { eulerian_schedule({{}, 0}, {p}, 0.01); }) == ErrorCode::InvalidSchedule);
  CHECK(code_of([&] { eulerian_schedule({{0, 1}, 0}, {p}, 0.01); }) == ErrorCode::IncompleteProfiles);
  CHECK(code_of([&] { eulerian_schedule({{0, 0}, 0}, {p}, 0.0); }) == ErrorCode::InvalidSchedule);
  // a single flip does not close the cycle
  CHECK(code_of([&] { eulerian_schedule({{0}, 0}, {p}, 0.01); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("bang-bang schedule") {
  const auto g = close_group(std::vector<Matrix>{sigma_x(), sigma_z()}, 8);
  const auto s = bangbang_schedule(g, 0.1);
  CHECK(s.kind == ScheduleKind::BangBang);
  CHECK(s.intervals() == 4);
  CHECK(s.cycle_time == doctest::Approx(0.4));
  REQUIRE(s.kicks.size() == 4);
  for (std::size_t l = 1; l <= 4; ++l) CHECK((s.kicks[l - 1] * s.frames[l - 1] - s.frames[l]).norm() < 1e-14);
  CHECK(std::isinf(s.max_control_norm()));
  const auto trivial = close_group(std::vector<Matrix>{identity(2)}, 2);
  CHECK(code_of([&] { bangbang_schedule(trivial, 0.1); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("fault models") {
  const auto g = s3();
  const auto h12 = heisenberg(0, 1, 3);
  const auto in = make_fault_model("h", {{0, {{1.0, 0.1 * h12}}}}, g.rep);
  CHECK(in.in_algebra);
  CHECK((in.at(0, 0.3, 8) - 0.1 * h12).norm() == 0.0);
  CHECK(in.at(1, 0.3, 8).norm() == 0.0);
  const auto out = make_fault_model("z", {{0, {{1.0, embed(sigma_z(), 0, 3)}}}}, g.rep);
  CHECK_FALSE(out.in_algebra);
  CHECK(code_of([&] { make_fault_model("bad", {{0, {{0.4, h12}}}}, g.rep); }) == ErrorCode::IncompatibleFaultGrid);
  CHECK(code_of([&] { make_fault_model("bad", {{0, {{1.0, identity(2)}}}}, g.rep); }) == ErrorCode::ShapeError);
}

TEST_CASE("fault grids must nest with the profile grid") {
  const auto g = s3();
  const double dt = 0.01;
  std::vector<PulseProfile> profiles{
      piecewise_profile(0, g, {{1.0, heisenberg(0, 1, 3), kPi / (4.0 * dt)}}, dt),
      piecewise_profile(1, g, {{0.5, heisenberg(1, 2, 3), kPi / (2.0 * dt)}, {0.5, heisenberg(0, 1, 3), kPi / (2.0 * dt)}}, dt)};
  const auto s = eulerian_schedule({parse_path("2,2,2,1,2,1,1,2,1,1,2,1"), 0}, profiles, dt);
  const Matrix z = embed(sigma_z(), 0, 3);
  const auto finer = make_fault_model("finer", {{1, {{0.25, z}, {0.25, z}, {0.5, z}}}}, g.rep);
  const auto coarser = make_fault_model("coarser", {{1, {{1.0, z}}}}, g.rep);
  const auto crossing = make_fault_model("crossing", {{1, {{0.3, z}, {0.7, z}}}}, g.rep);
  CHECK_NOTHROW(apply_fault(s, finer));
  CHECK_NOTHROW(apply_fault(s, coarser));
  CHECK(code_of([&] { apply_fault(s, crossing); }) == ErrorCode::IncompatibleFaultGrid);
  const auto faulty = apply_fault(s, finer);
  CHECK(faulty.timeline().size() == s.timeline().size() + 6);
  CHECK(code_of([&] { apply_fault(bangbang_schedule(g, dt), coarser); }) == ErrorCode::InvalidSchedule);
}

TEST_CASE("breakpoints") {
  const auto b = breakpoints({0.25, 0.25, 0.5});
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 0.0);
  CHECK(b[2] == 0.5);
  CHECK(b[3] == 1.0);
}
