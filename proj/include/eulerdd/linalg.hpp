#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace eulerdd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};

Matrix identity(Eigen::Index d);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

// Kronecker product; kron(A, B) acts on the A factor as the more significant index.
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(std::span<const Matrix> factors);

// One-qubit operator acting on qubit `site` (0-based, qubit 0 most significant) of `qubits`.
Matrix embed(const Matrix& op, int site, int qubits);

// Tensor product of Pauli letters, e.g. "XZI". Accepts I, X, Y, Z (case-insensitive).
Matrix pauli_string(std::string_view letters);

// Exchange gate and Heisenberg coupling sigma_k . sigma_l between qubits k and l (0-based).
Matrix swap_gate(int k, int l, int qubits);
Matrix heisenberg(int k, int l, int qubits);

double frobenius(const Matrix& m);
Complex hs_inner(const Matrix& a, const Matrix& b);  // tr(a^dagger b)

double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);
double unitarity_error(const Matrix& u);

// exp(-i h t) for Hermitian h, via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

/// Cached eigendecomposition of a Hermitian generator. Evaluating exp(-i h t)
/// for many t then costs two matrix products each.
class HermitianPropagator {
 public:
  HermitianPropagator() = default;
  explicit HermitianPropagator(const Matrix& h);
  Matrix at(double t) const;
  Eigen::Index dim() const { return vectors_.rows(); }

 private:
  Matrix vectors_;
  Eigen::VectorXd values_;
};

// Unit-modulus c minimising ||a - c b||_F.
Complex optimal_phase(const Matrix& a, const Matrix& b);
// min over global phases of ||a - c b||_F.
double phase_distance(const Matrix& a, const Matrix& b);

// Rescales m by the conjugate phase of its first entry (row-major) of largest
// modulus. Ties within `tie_tol` (relative) resolve to the earliest entry.
Matrix canonical_phase(const Matrix& m, double tie_tol = 1e-8);
bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol);

// Column-major vectorisation and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows);

// Orthonormal (Hilbert-Schmidt) basis of span(ops); singular values below
// tol * max(1, sigma_max) are discarded.
std::vector<Matrix> span_basis(std::span<const Matrix> ops, double tol = 1e-10);

// Orthonormal basis of the right null space of a, from its SVD.
Matrix null_space(const Matrix& a, double tol = 1e-10);

// Orthogonal projection of x onto span(basis); basis must be HS-orthonormal.
Matrix project_onto(std::span<const Matrix> basis, const Matrix& x);
double distance_to_span(std::span<const Matrix> basis, const Matrix& x);

Matrix commutator(const Matrix& a, const Matrix& b);

// Partial trace over the trailing factor of dimension env_dim.
Matrix trace_out_env(const Matrix& rho, Eigen::Index env_dim);

Matrix random_hermitian(Rng& rng, Eigen::Index d);
Matrix random_traceless_hermitian(Rng& rng, Eigen::Index d);
Vector random_state(Rng& rng, Eigen::Index d);

}  // namespace eulerdd
