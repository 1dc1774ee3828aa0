#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eulerdd/linalg.hpp"

namespace eulerdd {

/// Finite group given by its multiplication table. Element 0 is the identity;
/// `mult_table[a][b]` is the index of g_a g_b.
struct Group {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> mult_table;
  std::vector<std::size_t> generators;

  std::size_t order() const { return elements.size(); }
  std::size_t multiply(std::size_t a, std::size_t b) const { return mult_table[a][b]; }
  std::size_t inverse(std::size_t a) const;
};

// Throws ErrorCode::InvalidGroup naming the first violated group axiom.
void validate_group(const Group& group);

// Closure of the generating set under the table, as a sorted index list.
std::vector<std::size_t> generated_subgroup(const Group& group, std::span<const std::size_t> generators);

/// Unitary representation up to phase: matrices[j] represents element j.
struct UnitaryRep {
  Eigen::Index dimension = 0;
  std::vector<Matrix> matrices;
  double phase_tolerance = 1e-10;

  std::size_t size() const { return matrices.size(); }
  const Matrix& operator[](std::size_t j) const { return matrices[j]; }
};

// Unitarity, projective homomorphism and faithfulness up to phase.
void validate_rep(const Group& group, const UnitaryRep& rep);

struct RepresentedGroup {
  Group group;
  UnitaryRep rep;

  std::size_t generator_count() const { return group.generators.size(); }
  const Matrix& generator_matrix(std::size_t lambda) const { return rep[group.generators.at(lambda)]; }
};

// Builds the abstract group generated by the matrices, identifying matrices
// that agree up to a global phase. Generator labels are g1, g2, ...; other
// elements are labelled by the word that first reached them.
RepresentedGroup close_group(std::span<const Matrix> generator_matrices, std::size_t max_order,
                        double phase_tolerance = 1e-10);

// Group-average projector onto the commutant: (1/|G|) sum_j g_j^dagger x g_j.
Matrix pi_G(const UnitaryRep& rep, const Matrix& x);

// Hilbert-Schmidt orthonormal bases.
std::vector<Matrix> algebra_basis(const UnitaryRep& rep);
std::vector<Matrix> commutant_basis(const UnitaryRep& rep);
std::vector<Matrix> center_basis(const UnitaryRep& rep);

bool is_abelian(const UnitaryRep& rep, double tol = 1e-10);

struct IrrepBlock {
  std::string label;
  Eigen::Index multiplicity = 0;  // n_J
  Eigen::Index dimension = 0;     // d_J
  // d x (n_J d_J) isometry; column a * d_J + i spans C_J (x) D_J in that order.
  Matrix basis;
};

/// Isotypic decomposition H_S = (+)_J C^{n_J} (x) C^{d_J}. In the rotated
/// basis the algebra acts as I_{n_J} (x) M and the commutant as N (x) I_{d_J}.
struct IrrepDecomposition {
  std::vector<IrrepBlock> blocks;
  Matrix basis_change;

  // basis_J^dagger x basis_J
  Matrix block(const Matrix& x, std::size_t j) const;
};

IrrepDecomposition decompose_irreps(const UnitaryRep& rep, double cluster_tol = 1e-8, std::uint64_t seed = 0);

/// Factor actions of an (n d) x (n d) block matrix.
struct FactorSplit {
  Matrix factor;     // N (commutant side) or M (algebra side)
  double deviation;  // ||block - N (x) I|| or ||block - I (x) M||
};
FactorSplit commutant_factor(const Matrix& block, Eigen::Index n, Eigen::Index d);
FactorSplit algebra_factor(const Matrix& block, Eigen::Index n, Eigen::Index d);

// Largest norm of an off-diagonal (J != J') piece of the rotated matrix.
double cross_block_norm(const IrrepDecomposition& decomposition, const Matrix& x);

// Compares pi_G(x) with the average over a transversal of G / G_0.
bool quotient_check(const Group& group, const UnitaryRep& rep, std::span<const std::size_t> normal_subgroup,
                    const Matrix& x, double tol = 1e-9);

}  // namespace eulerdd
