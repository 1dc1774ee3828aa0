#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eulerdd/error.hpp"
#include "eulerdd/linalg.hpp"

using namespace eulerdd;

TEST_CASE("kron puts the first factor on the more significant index") {
  const Matrix a = sigma_x();
  const Matrix b = sigma_z();
  const Matrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) CHECK(std::abs(k(2 * i + p, 2 * j + q) - a(i, j) * b(p, q)) == 0.0);
  const Matrix ab[] = {a, b};
  CHECK((kron_all(ab) - k).norm() == 0.0);
}

TEST_CASE("embed and pauli_string agree with explicit products") {
  CHECK((embed(sigma_x(), 0, 2) - kron(sigma_x(), identity(2))).norm() == 0.0);
  CHECK((embed(sigma_z(), 1, 2) - kron(identity(2), sigma_z())).norm() == 0.0);
  CHECK((pauli_string("XZ") - kron(sigma_x(), sigma_z())).norm() == 0.0);
  CHECK((pauli_string("iy") - kron(identity(2), sigma_y())).norm() == 0.0);
  CHECK_THROWS_AS(pauli_string("XQ"), Error);
}

TEST_CASE("swap and Heisenberg coupling") {
  const Matrix s = swap_gate(0, 2, 3);
  // |100> (index 4) <-> |001> (index 1)
  CHECK(std::abs(s(1, 4) - 1.0) == 0.0);
  CHECK(std::abs(s(4, 1) - 1.0) == 0.0);
  CHECK(std::abs(s(2, 2) - 1.0) == 0.0);
  const Matrix h = heisenberg(0, 1, 2);
  CHECK((h - (2.0 * swap_gate(0, 1, 2) - identity(4))).norm() < 1e-14);
  // exp(-i pi h / 4) is the exchange gate up to phase
  CHECK(phase_distance(expm_hermitian(h, std::numbers::pi / 4.0), swap_gate(0, 1, 2)) < 1e-12);
}

TEST_CASE("expm_hermitian matches the closed-form Pauli rotation") {
  for (double t : {0.0, 0.3, 1.7, -2.2}) {
    const Matrix expected = std::cos(t) * identity(2) - kI * std::sin(t) * sigma_x();
    CHECK((expm_hermitian(sigma_x(), t) - expected).norm() < 1e-14);
  }
  Rng rng(5);
  const Matrix h = random_hermitian(rng, 5);
  HermitianPropagator p(h);
  CHECK(p.dim() == 5);
  CHECK((p.at(0.4) * p.at(0.6) - p.at(1.0)).norm() < 1e-13);
  CHECK(unitarity_error(p.at(3.0)) < 1e-13);
}

TEST_CASE("phase alignment") {
  Rng rng(2);
  const Matrix u = expm_hermitian(random_hermitian(rng, 3), 1.0);
  const Complex phase = std::polar(1.0, 0.77);
  CHECK(phase_distance(phase * u, u) < 1e-14);
  CHECK(std::abs(optimal_phase(phase * u, u) - phase) < 1e-14);
  CHECK(equal_up_to_phase(-u, u, 1e-12));
  CHECK_FALSE(equal_up_to_phase(u, identity(3), 1e-6));
  CHECK_THROWS_AS(phase_distance(u, identity(2)), Error);
  // distance of orthogonal unitaries: ||X - c Z||^2 = 4 for every phase
  CHECK(phase_distance(sigma_x(), sigma_z()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("canonical phase fixes the first largest entry") {
  const Matrix y = sigma_y();
  const Matrix c = canonical_phase(y);
  CHECK(std::abs(c(0, 1) - Complex(1.0, 0.0)) < 1e-15);
  CHECK((canonical_phase(std::polar(1.0, 2.0) * y) - c).norm() < 1e-14);
}

TEST_CASE("vec and unvec are inverse") {
  Rng rng(9);
  const Matrix m = random_hermitian(rng, 4);
  CHECK((unvec(vec(m), 4) - m).norm() == 0.0);
  CHECK(vec(m)(1) == m(1, 0));  // column-major
}

TEST_CASE("span basis and null space") {
  const Matrix ops[] = {identity(2), sigma_x(), identity(2) + sigma_x(), 2.0 * sigma_x()};
  const auto basis = span_basis(ops);
  REQUIRE(basis.size() == 2);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b)
      CHECK(std::abs(hs_inner(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)) < 1e-13);
  CHECK(distance_to_span(basis, 3.0 * identity(2) - sigma_x()) < 1e-13);
  CHECK(distance_to_span(basis, sigma_z()) == doctest::Approx(std::sqrt(2.0)));
  CHECK((project_onto(basis, sigma_z() + sigma_x()) - sigma_x()).norm() < 1e-13);

  Matrix a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  const Matrix n = null_space(a);
  CHECK(n.cols() == 2);
  CHECK((a * n).norm() < 1e-13);
}

TEST_CASE("partial trace over the environment") {
  Rng rng(4);
  const Vector s = random_state(rng, 2);
  const Vector e = random_state(rng, 3);
  const Matrix rho = kron(s * s.adjoint(), e * e.adjoint());
  CHECK((trace_out_env(rho, 3) - s * s.adjoint()).norm() < 1e-14);
}

TEST_CASE("random operators") {
  Rng rng(1);
  const Matrix h = random_traceless_hermitian(rng, 4);
  CHECK(std::abs(h.trace()) < 1e-13);
  CHECK(hermiticity_error(h) < 1e-14);
  CHECK(is_hermitian(h, 1e-12));
  CHECK(random_state(rng, 6).norm() == doctest::Approx(1.0));
  CHECK(commutator(sigma_x(), sigma_y()).isApprox(2.0 * kI * sigma_z()));
}
