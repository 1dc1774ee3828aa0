#include "eulerdd/group.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "eulerdd/error.hpp"
#include "eulerdd/kernels.hpp"

namespace eulerdd {

namespace {

[[noreturn]] void invalid_group(const std::string& why) { throw Error(ErrorCode::InvalidGroup, "invalid group: " + why); }

[[noreturn]] void shape_error(const std::string& why) { throw Error(ErrorCode::ShapeError, "shape error: " + why); }

void check_square(const UnitaryRep& rep, const Matrix& x) {
  if (x.rows() != rep.dimension || x.cols() != rep.dimension) {
    std::ostringstream os;
    os << "operator is " << x.rows() << "x" << x.cols() << ", representation dimension is " << rep.dimension;
    shape_error(os.str());
  }
}

// Stacked commutator map X -> (g_j X - X g_j)_j acting on column-major vec(X).
Matrix commutator_map(const UnitaryRep& rep) {
  const Eigen::Index d = rep.dimension;
  const Eigen::Index d2 = d * d;
  Matrix stacked(d2 * static_cast<Eigen::Index>(rep.size()), d2);
  const Matrix id = identity(d);
  for (std::size_t j = 0; j < rep.size(); ++j) {
    stacked.middleRows(static_cast<Eigen::Index>(j) * d2, d2) = kron(id, rep[j]) - kron(rep[j].transpose(), id);
  }
  return stacked;
}

std::vector<Matrix> columns_as_matrices(const Matrix& cols, Eigen::Index d) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(cols.cols()));
  for (Eigen::Index k = 0; k < cols.cols(); ++k) out.push_back(canonical_phase(unvec(cols.col(k), d)));
  return out;
}

std::size_t find_up_to_phase(const std::vector<Matrix>& canon, const Matrix& m, double tol) {
  const Matrix c = canonical_phase(m);
  for (std::size_t k = 0; k < canon.size(); ++k) {
    if ((canon[k] - c).norm() <= tol) return k;
  }
  return canon.size();
}

}  // namespace

std::size_t Group::inverse(std::size_t a) const {
  for (std::size_t b = 0; b < order(); ++b) {
    if (mult_table[a][b] == 0) return b;
  }
  invalid_group("element " + elements[a] + " has no inverse");
}

void validate_group(const Group& group) {
  const std::size_t n = group.order();
  if (n == 0) invalid_group("empty element list");
  if (group.mult_table.size() != n) invalid_group("multiplication table has wrong number of rows");
  for (const auto& row : group.mult_table) {
    if (row.size() != n) invalid_group("multiplication table is not square");
    for (auto v : row)
      if (v >= n) invalid_group("multiplication table entry out of range");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (group.mult_table[0][a] != a || group.mult_table[a][0] != a) invalid_group("element 0 is not the identity");
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (std::size_t b = 0; b < n; ++b) {
      row_seen[group.mult_table[a][b]] = true;
      col_seen[group.mult_table[b][a]] = true;
    }
    if (std::find(row_seen.begin(), row_seen.end(), false) != row_seen.end() ||
        std::find(col_seen.begin(), col_seen.end(), false) != col_seen.end()) {
      invalid_group("row or column " + std::to_string(a) + " is not a permutation");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (group.mult_table[group.mult_table[a][b]][c] != group.mult_table[a][group.mult_table[b][c]]) {
          invalid_group("multiplication is not associative");
        }
      }
  if (group.generators.empty()) invalid_group("empty generating set");
  for (auto g : group.generators)
    if (g >= n) invalid_group("generator index out of range");
  if (generated_subgroup(group, group.generators).size() != n) invalid_group("generators do not generate the group");
}

std::vector<std::size_t> generated_subgroup(const Group& group, std::span<const std::size_t> generators) {
  std::vector<bool> seen(group.order(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const auto g = queue.front();
    queue.pop_front();
    for (auto gen : generators) {
      const auto next = group.multiply(gen, g);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (seen[k]) out.push_back(k);
  return out;
}

void validate_rep(const Group& group, const UnitaryRep& rep) {
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::InvalidRepresentation, "invalid representation: " + why);
  };
  if (rep.size() != group.order()) fail("matrix count differs from group order");
  const double tol = rep.phase_tolerance;
  for (std::size_t j = 0; j < rep.size(); ++j) {
    if (rep[j].rows() != rep.dimension || rep[j].cols() != rep.dimension) fail("matrix " + std::to_string(j) + " has wrong shape");
    if (unitarity_error(rep[j]) > tol) fail("matrix " + std::to_string(j) + " is not unitary");
  }
  if (phase_distance(rep[0], identity(rep.dimension)) > tol) fail("element 0 is not represented by the identity");
  for (std::size_t a = 0; a < rep.size(); ++a) {
    for (std::size_t b = 0; b < rep.size(); ++b) {
      if (phase_distance(rep[a] * rep[b], rep[group.multiply(a, b)]) > tol) {
        fail("product of elements " + std::to_string(a) + " and " + std::to_string(b) + " disagrees with the table");
      }
    }
  }
  for (std::size_t a = 0; a < rep.size(); ++a)
    for (std::size_t b = a + 1; b < rep.size(); ++b)
      if (phase_distance(rep[a], rep[b]) <= tol) fail("not faithful up to phase");
}

RepresentedGroup close_group(std::span<const Matrix> generator_matrices, std::size_t max_order, double phase_tolerance) {
  if (generator_matrices.empty()) throw Error(ErrorCode::InvalidGenerator, "invalid generator: empty generating set");
  const Eigen::Index d = generator_matrices.front().rows();
  for (const auto& g : generator_matrices) {
    if (g.rows() != d || g.cols() != d || unitarity_error(g) > phase_tolerance) {
      throw Error(ErrorCode::InvalidGenerator, "invalid generator: matrix is not a unitary of the common dimension");
    }
  }

  std::vector<Matrix> matrices{identity(d)};
  std::vector<Matrix> canon{canonical_phase(identity(d))};
  std::vector<std::string> labels{"e"};
  const auto too_large = [] { return Error(ErrorCode::GroupNotClosed, "group too large or not closed"); };

  // Breadth-first closure under left multiplication by generators.
  for (std::size_t head = 0; head < matrices.size(); ++head) {
    for (std::size_t lambda = 0; lambda < generator_matrices.size(); ++lambda) {
      Matrix next = generator_matrices[lambda] * matrices[head];
      if (find_up_to_phase(canon, next, phase_tolerance) == canon.size()) {
        if (matrices.size() >= max_order) throw too_large();
        const std::string gen = "g" + std::to_string(lambda + 1);
        labels.push_back(head == 0 ? gen : gen + "*" + labels[head]);
        canon.push_back(canonical_phase(next));
        matrices.push_back(std::move(next));
      }
    }
  }

  Group group;
  group.elements = labels;
  const std::size_t n = matrices.size();
  group.mult_table.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto k = find_up_to_phase(canon, matrices[a] * matrices[b], phase_tolerance);
      if (k == n) throw too_large();
      group.mult_table[a][b] = k;
    }
  }
  for (const auto& g : generator_matrices) group.generators.push_back(find_up_to_phase(canon, g, phase_tolerance));

  UnitaryRep rep{d, std::move(matrices), phase_tolerance};
  validate_group(group);
  return {std::move(group), std::move(rep)};
}

Matrix pi_G(const UnitaryRep& rep, const Matrix& x) {
  check_square(rep, x);
  return kernels::group_average(rep.matrices, x);
}

std::vector<Matrix> algebra_basis(const UnitaryRep& rep) { return span_basis(rep.matrices, 1e-10); }

std::vector<Matrix> commutant_basis(const UnitaryRep& rep) {
  return columns_as_matrices(null_space(commutator_map(rep), 1e-10), rep.dimension);
}

std::vector<Matrix> center_basis(const UnitaryRep& rep) {
  const auto algebra = algebra_basis(rep);
  const Eigen::Index d = rep.dimension;
  Matrix coords(d * d, static_cast<Eigen::Index>(algebra.size()));
  for (std::size_t k = 0; k < algebra.size(); ++k) coords.col(static_cast<Eigen::Index>(k)) = vec(algebra[k]);
  const Matrix restricted = commutator_map(rep) * coords;
  const Matrix null = null_space(restricted, 1e-10);
  return columns_as_matrices(coords * null, d);
}

bool is_abelian(const UnitaryRep& rep, double tol) {
  for (std::size_t a = 0; a < rep.size(); ++a)
    for (std::size_t b = a + 1; b < rep.size(); ++b)
      if (commutator(rep[a], rep[b]).norm() > tol) return false;
  return true;
}

Matrix IrrepDecomposition::block(const Matrix& x, std::size_t j) const {
  const auto& b = blocks.at(j).basis;
  return b.adjoint() * x * b;
}

FactorSplit commutant_factor(const Matrix& block, Eigen::Index n, Eigen::Index d) {
  Matrix factor(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) factor(a, b) = block.block(a * d, b * d, d, d).trace() / static_cast<double>(d);
  return {factor, (block - kron(factor, identity(d))).norm()};
}

FactorSplit algebra_factor(const Matrix& block, Eigen::Index n, Eigen::Index d) {
  Matrix factor = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < n; ++a) factor += block.block(a * d, a * d, d, d);
  factor /= static_cast<double>(n);
  return {factor, (block - kron(identity(n), factor)).norm()};
}

double cross_block_norm(const IrrepDecomposition& decomposition, const Matrix& x) {
  double worst = 0.0;
  const auto& blocks = decomposition.blocks;
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (a != b) worst = std::max(worst, (blocks[a].basis.adjoint() * x * blocks[b].basis).norm());
  return worst;
}

namespace {

struct Attempt {
  bool ok = false;
  std::vector<IrrepBlock> blocks;
};

Attempt try_decompose(const UnitaryRep& rep, const std::vector<Matrix>& commutant, const std::vector<Matrix>& algebra,
                      double cluster_tol, std::uint64_t seed) {
  const Eigen::Index d = rep.dimension;
  Rng rng(seed);
  std::normal_distribution<double> normal;

  Matrix hermitian = Matrix::Zero(d, d);
  Matrix coupler = Matrix::Zero(d, d);
  for (const auto& c : commutant) {
    hermitian += normal(rng) * 0.5 * (c + c.adjoint());
    hermitian += normal(rng) * 0.5 * kI * (c - c.adjoint());
    coupler += Complex(normal(rng), normal(rng)) * c;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  const Eigen::VectorXd& values = es.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());

  // Split the sorted spectrum at gaps above tolerance; gaps that are neither
  // clearly degenerate nor clearly separated make the attempt ambiguous.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index k = 1; k <= values.size(); ++k) {
    if (k < values.size()) {
      const double gap = values(k) - values(k - 1);
      if (gap > cluster_tol * scale && gap <= 1e3 * cluster_tol * scale) return {};
      if (gap <= cluster_tol * scale) continue;
    }
    clusters.emplace_back(begin, k);
    begin = k;
  }

  std::vector<Matrix> spaces;
  for (auto [b, e] : clusters) spaces.push_back(es.eigenvectors().middleCols(b, e - b));

  // Eigenspaces belong to the same isotypic block iff the commutant connects them.
  std::vector<std::size_t> parent(spaces.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const double coupler_scale = std::max(1e-300, coupler.norm());
  for (std::size_t a = 0; a < spaces.size(); ++a)
    for (std::size_t b = a + 1; b < spaces.size(); ++b)
      if ((spaces[b].adjoint() * coupler * spaces[a]).norm() > 1e-6 * coupler_scale) parent[find(b)] = find(a);

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of(spaces.size(), spaces.size());
  for (std::size_t a = 0; a < spaces.size(); ++a) {
    const auto root = find(a);
    if (group_of[root] == spaces.size()) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(a);
  }

  Attempt out;
  Eigen::Index commutant_dim = 0, algebra_dim = 0;
  for (const auto& members : groups) {
    const Matrix& first = spaces[members.front()];
    const Eigen::Index dj = first.cols();
    const auto nj = static_cast<Eigen::Index>(members.size());
    Matrix basis(d, nj * dj);
    basis.leftCols(dj) = first;
    for (Eigen::Index a = 1; a < nj; ++a) {
      const Matrix& space = spaces[members[static_cast<std::size_t>(a)]];
      if (space.cols() != dj) return {};
      const Matrix link = space.adjoint() * coupler * first;
      const double s = link.norm() / std::sqrt(static_cast<double>(dj));
      if (s <= 1e-6 * coupler_scale) return {};
      basis.middleCols(a * dj, dj) = space * link / s;
    }
    out.blocks.push_back({"", nj, dj, std::move(basis)});
    commutant_dim += nj * nj;
    algebra_dim += dj * dj;
  }
  if (commutant_dim != static_cast<Eigen::Index>(commutant.size()) ||
      algebra_dim != static_cast<Eigen::Index>(algebra.size())) {
    return {};
  }
  out.ok = true;
  return out;
}

}  // namespace

IrrepDecomposition decompose_irreps(const UnitaryRep& rep, double cluster_tol, std::uint64_t seed) {
  const auto commutant = commutant_basis(rep);
  const auto algebra = algebra_basis(rep);
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    auto result = try_decompose(rep, commutant, algebra, cluster_tol, seed + static_cast<std::uint64_t>(attempt));
    if (!result.ok) continue;

    std::stable_sort(result.blocks.begin(), result.blocks.end(), [](const IrrepBlock& a, const IrrepBlock& b) {
      if (a.dimension != b.dimension) return a.dimension > b.dimension;
      return a.multiplicity > b.multiplicity;
    });
    IrrepDecomposition out;
    Eigen::Index col = 0;
    out.basis_change.resize(rep.dimension, rep.dimension);
    for (std::size_t k = 0; k < result.blocks.size(); ++k) {
      auto& b = result.blocks[k];
      b.label = "J" + std::to_string(k + 1);
      out.basis_change.middleCols(col, b.basis.cols()) = b.basis;
      col += b.basis.cols();
    }
    out.blocks = std::move(result.blocks);

    // Structural check on every basis element; a failure means an accidental
    // degeneracy slipped through clustering, so reseed.
    bool ok = unitarity_error(out.basis_change) <= 1e-8;
    for (std::size_t j = 0; ok && j < out.blocks.size(); ++j) {
      const auto& b = out.blocks[j];
      for (const auto& a : algebra) ok = ok && algebra_factor(out.block(a, j), b.multiplicity, b.dimension).deviation <= 1e-8;
      for (const auto& c : commutant)
        ok = ok && commutant_factor(out.block(c, j), b.multiplicity, b.dimension).deviation <= 1e-8;
    }
    for (const auto& a : algebra) ok = ok && cross_block_norm(out, a) <= 1e-8;
    if (ok) return out;
  }
  throw Error(ErrorCode::DegenerateDecomposition, "degenerate decomposition; tighten tolerance or reseed");
}

bool quotient_check(const Group& group, const UnitaryRep& rep, std::span<const std::size_t> normal_subgroup,
                    const Matrix& x, double tol) {
  check_square(rep, x);
  const std::size_t n = group.order();
  std::vector<bool> member(n, false);
  for (auto h : normal_subgroup) {
    if (h >= n) throw Error(ErrorCode::NotNormalSubgroup, "not a normal subgroup: index out of range");
    member[h] = true;
  }
  if (!member[0]) throw Error(ErrorCode::NotNormalSubgroup, "not a normal subgroup: identity missing");
  for (std::size_t a = 0; a < n; ++a) {
    if (!member[a]) continue;
    for (std::size_t b = 0; b < n; ++b)
      if (member[b] && !member[group.multiply(a, b)]) throw Error(ErrorCode::NotNormalSubgroup, "not a normal subgroup: not closed");
    for (std::size_t g = 0; g < n; ++g) {
      if (!member[group.multiply(group.multiply(g, a), group.inverse(g))]) {
        throw Error(ErrorCode::NotNormalSubgroup, "not a normal subgroup");
      }
    }
  }
  const double scale = std::max(1.0, x.norm());
  for (std::size_t h = 0; h < n; ++h) {
    if (member[h] && commutator(x, rep[h]).norm() > tol * scale) {
      throw Error(ErrorCode::PreconditionViolation, "precondition violation: operator is not invariant under the subgroup");
    }
  }

  // Left cosets g G_0; the first element met in index order represents each.
  std::vector<bool> covered(n, false);
  std::vector<Matrix> transversal;
  for (std::size_t g = 0; g < n; ++g) {
    if (covered[g]) continue;
    transversal.push_back(rep[g]);
    for (std::size_t h = 0; h < n; ++h)
      if (member[h]) covered[group.multiply(g, h)] = true;
  }
  const Matrix reduced = kernels::group_average(transversal, x);
  return (reduced - pi_G(rep, x)).norm() <= tol * scale;
}

}  // namespace eulerdd
