#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "eulerdd/analysis.hpp"

// Results checked against closed forms or brute-force sums that share no code
// with the library's quadrature.

using namespace eulerdd;

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint rule with dense exponentials, no Simpson and no propagator caching.
Matrix brute_f_map(const std::vector<PulseProfile>& profiles, const Matrix& x, int n) {
  Matrix acc = Matrix::Zero(x.rows(), x.cols());
  for (const auto& p : profiles) {
    for (int k = 0; k < n; ++k) {
      const double s = (k + 0.5) / n * p.delta_t;
      // rebuild u(s) from the segment list directly
      Matrix u = identity(x.rows());
      double t0 = 0.0;
      for (const auto& seg : p.segments) {
        const double len = seg.fraction * p.delta_t;
        const double span = std::clamp(s - t0, 0.0, len);
        if (span > 0.0) u = (-kI * seg.amplitude * span * seg.axis).exp() * u;
        t0 += len;
      }
      acc += u.adjoint() * x * u / static_cast<double>(n);
    }
  }
  return acc / static_cast<double>(profiles.size());
}

}  // namespace

TEST_CASE("Carr-Purcell: F(sigma_z) = (2/pi) sigma_y up to the rotation sense") {
  const auto s = make_scenario("carr-purcell");
  const Matrix f = f_map(s.profiles, sigma_z(), 512);
  const Matrix expected = 2.0 / kPi * sigma_y();
  CHECK(std::min((f - expected).norm(), (f + expected).norm()) < 1e-10);
  CHECK((f_map(s.profiles, sigma_x(), 256) - sigma_x()).norm() < 1e-12);
}

TEST_CASE("f_map agrees with a brute-force midpoint sum") {
  for (const char* name : {"carr-purcell", "pauli", "symmetric-s3"}) {
    CAPTURE(name);
    const auto s = make_scenario(name);
    Rng rng(13);
    const Matrix x = random_hermitian(rng, s.group.rep.dimension);
    CHECK((f_map(s.profiles, x, 256) - brute_f_map(s.profiles, x, 4000)).norm() < 1e-6);
  }
}

TEST_CASE("single-qubit Pauli twirl") {
  const auto s = make_scenario("pauli");
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const Matrix x = random_hermitian(rng, 2);
    const Complex tr = x.trace();
    CHECK((pi_G(s.group.rep, x) - tr / 2.0 * identity(2)).norm() < 1e-13);
    CHECK((q_map(s.group.rep, s.profiles, x) - tr / 2.0 * identity(2)).norm() < 1e-10);
  }
}

TEST_CASE("bang-bang cycle of a Pauli frame set against an explicit product") {
  const auto g = close_group(std::vector<Matrix>{sigma_x(), sigma_z()}, 8);
  const double dt = 0.1;
  const Matrix h = 0.3 * sigma_z() + 0.2 * sigma_x();
  const auto schedule = bangbang_schedule(g, dt);
  DriftModel d;
  d.system_dim = 2;
  d.h_system = h;
  d.h_env = Matrix::Zero(1, 1);
  // toggling-frame product over the frames, written out with Eigen's expm
  Matrix expected = identity(2);
  for (std::size_t l = 0; l < schedule.intervals(); ++l) {
    const Matrix f = schedule.frames[l];
    expected = (-kI * dt * (f.adjoint() * h * f)).exp() * expected;
  }
  CHECK(phase_distance(simulate_cycles(d, schedule, 1, 1).unitary, expected) < 1e-12);
}

TEST_CASE("exchange pulse realises the swap") {
  const auto s = make_scenario("symmetric-s3");
  CHECK(phase_distance(s.profiles[0].realized(), swap_gate(0, 1, 3)) < 1e-12);
  const Matrix cycle = swap_gate(0, 1, 3) * swap_gate(1, 2, 3);
  CHECK(phase_distance(s.profiles[1].realized(), cycle) < 1e-12);
  // direct matrix exponentials of the two exchange halves
  const double dt = s.delta_t;
  const Matrix u = (-kI * (kPi / (2 * dt)) * (dt / 2) * heisenberg(0, 1, 3)).exp() *
                   (-kI * (kPi / (2 * dt)) * (dt / 2) * heisenberg(1, 2, 3)).exp();
  CHECK(phase_distance(u, cycle) < 1e-12);
}
