#include "eulerdd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cctype>
#include <cmath>
#include <limits>

#include "eulerdd/error.hpp"

namespace eulerdd {

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = identity(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Matrix embed(const Matrix& op, int site, int qubits) {
  if (site < 0 || site >= qubits) throw Error(ErrorCode::ShapeError, "shape error: qubit index out of range");
  std::vector<Matrix> factors(static_cast<std::size_t>(qubits), identity(2));
  factors[static_cast<std::size_t>(site)] = op;
  return kron_all(factors);
}

Matrix pauli_string(std::string_view letters) {
  if (letters.empty()) throw Error(ErrorCode::ShapeError, "shape error: empty Pauli string");
  std::vector<Matrix> factors;
  for (char c : letters) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'I': factors.push_back(identity(2)); break;
      case 'X': factors.push_back(sigma_x()); break;
      case 'Y': factors.push_back(sigma_y()); break;
      case 'Z': factors.push_back(sigma_z()); break;
      default:
        throw Error(ErrorCode::ShapeError, std::string("shape error: bad Pauli letter '") + c + "'");
    }
  }
  return kron_all(factors);
}

Matrix swap_gate(int k, int l, int qubits) {
  if (k < 0 || l < 0 || k >= qubits || l >= qubits) {
    throw Error(ErrorCode::ShapeError, "shape error: qubit index out of range");
  }
  const Eigen::Index d = Eigen::Index{1} << qubits;
  Matrix out = Matrix::Zero(d, d);
  const int bk = qubits - 1 - k;
  const int bl = qubits - 1 - l;
  for (Eigen::Index s = 0; s < d; ++s) {
    const auto vk = (s >> bk) & 1;
    const auto vl = (s >> bl) & 1;
    Eigen::Index t = s & ~((Eigen::Index{1} << bk) | (Eigen::Index{1} << bl));
    t |= (vk << bl) | (vl << bk);
    out(t, s) = 1.0;
  }
  return out;
}

Matrix heisenberg(int k, int l, int qubits) {
  return embed(sigma_x(), k, qubits) * embed(sigma_x(), l, qubits) +
         embed(sigma_y(), k, qubits) * embed(sigma_y(), l, qubits) +
         embed(sigma_z(), k, qubits) * embed(sigma_z(), l, qubits);
}

double frobenius(const Matrix& m) { return m.norm(); }

Complex hs_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace(); }

double hermiticity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

bool is_hermitian(const Matrix& m, double tol) {
  return hermiticity_error(m) <= tol * std::max(1.0, m.norm());
}

double unitarity_error(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - identity(u.rows())).norm();
}

HermitianPropagator::HermitianPropagator(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

Matrix HermitianPropagator::at(double t) const {
  Vector phases(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) phases(k) = std::exp(-kI * (values_(k) * t));
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Matrix expm_hermitian(const Matrix& h, double t) { return HermitianPropagator(h).at(t); }

Complex optimal_phase(const Matrix& a, const Matrix& b) {
  const Complex overlap = hs_inner(b, a);  // tr(b^dagger a)
  const double mag = std::abs(overlap);
  if (mag == 0.0) return 1.0;
  return overlap / mag;
}

double phase_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeError, "shape error: phase distance between mismatched matrices");
  }
  return (a - optimal_phase(a, b) * b).norm();
}

Matrix canonical_phase(const Matrix& m, double tie_tol) {
  double largest = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) largest = std::max(largest, std::abs(m(i, j)));
  if (largest == 0.0) return m;
  const double threshold = largest * (1.0 - tie_tol);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double mod = std::abs(m(i, j));
      if (mod >= threshold) return m * (std::conj(m(i, j)) / mod);
    }
  }
  return m;
}

bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (canonical_phase(a) - canonical_phase(b)).norm() <= tol;
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

std::vector<Matrix> span_basis(std::span<const Matrix> ops, double tol) {
  std::vector<Matrix> out;
  if (ops.empty()) return out;
  const Eigen::Index rows = ops.front().rows();
  Matrix stacked(ops.front().size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].size() != ops.front().size()) throw Error(ErrorCode::ShapeError, "shape error: span of mismatched matrices");
    stacked.col(static_cast<Eigen::Index>(k)) = vec(ops[k]);
  }
  // JacobiSVD: BDCSVD in Eigen 3.4.0 returns NaNs on highly degenerate inputs.
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) out.push_back(canonical_phase(unvec(svd.matrixU().col(k), rows)));
  }
  return out;
}

Matrix null_space(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix project_onto(std::span<const Matrix> basis, const Matrix& x) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& b : basis) out += hs_inner(b, x) * b;
  return out;
}

double distance_to_span(std::span<const Matrix> basis, const Matrix& x) {
  return (x - project_onto(basis, x)).norm();
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix trace_out_env(const Matrix& rho, Eigen::Index env_dim) {
  const Eigen::Index d = rho.rows() / env_dim;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index e = 0; e < env_dim; ++e) out(i, j) += rho(i * env_dim + e, j * env_dim + e);
  return out;
}

Matrix random_hermitian(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return 0.5 * (g + g.adjoint());
}

Matrix random_traceless_hermitian(Rng& rng, Eigen::Index d) {
  Matrix h = random_hermitian(rng, d);
  h -= (h.trace() / static_cast<double>(d)) * identity(d);
  return h;
}

Vector random_state(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

}  // namespace eulerdd
