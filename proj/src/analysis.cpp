#include "eulerdd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "eulerdd/error.hpp"
#include "eulerdd/kernels.hpp"

namespace eulerdd {

namespace {

std::vector<Matrix> random_hermitians(std::size_t count, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_hermitian(rng, d));
  return out;
}

double commutant_defect(const UnitaryRep& rep, const Matrix& x) {
  double worst = 0.0;
  for (const auto& g : rep.matrices) worst = std::max(worst, commutator(x, g).norm());
  return worst;
}

double fault_norm(const FaultModel& fault) {
  double best = 0.0;
  for (const auto& f : fault.per_generator)
    for (const auto& s : f.segments) best = std::max(best, s.hamiltonian.norm());
  return best;
}

Matrix mixed_env_state(const Vector& psi, Eigen::Index env_dim) {
  const Matrix rho_s = psi * psi.adjoint();
  return kron(rho_s, identity(env_dim) / static_cast<double>(env_dim));
}

double state_fidelity_error(const Matrix& u, const Vector& psi, Eigen::Index env_dim) {
  const Matrix rho = u * mixed_env_state(psi, env_dim) * u.adjoint();
  const Matrix rho_s = trace_out_env(rho, env_dim);
  return std::max(0.0, 1.0 - (psi.adjoint() * rho_s * psi)(0, 0).real());
}

}  // namespace

std::string to_string(FaultCase c) {
  switch (c) {
    case FaultCase::PrimaryInAlgebra: return "in algebra, primary representation";
    case FaultCase::NonPrimaryInAlgebra: return "in algebra, non-primary representation";
    case FaultCase::Arbitrary: return "arbitrary";
  }
  return "unknown";
}

std::string to_string(BlockClass c) {
  switch (c) {
    case BlockClass::NoiselessFactor: return "noiseless D_J factor";
    case BlockClass::ProtectedFactor: return "protected C_J factor";
    case BlockClass::ProtectedSubspace: return "protected H_J subspace";
    case BlockClass::Unprotected: return "unprotected";
  }
  return "unknown";
}

TheoremReport verify_theorem(const Scenario& scenario, std::size_t trials, double tol, std::uint64_t seed,
                             std::size_t quad_points) {
  TheoremReport report;
  report.tolerance = tol;
  report.trials = trials;
  if (!scenario.controls_in_algebra()) {
    report.skipped = true;
    report.notice = "hypothesis fails: a control profile lies outside the group algebra";
  }
  const auto xs = random_hermitians(trials, scenario.group.rep.dimension, seed);
  const auto deviations = kernels::parallel_map<double>(trials, [&](std::size_t k) {
    const Matrix f = f_map(scenario.profiles, xs[k], quad_points, kernels::Exec::Serial);
    return (pi_G(scenario.group.rep, f) - pi_G(scenario.group.rep, xs[k])).norm();
  });
  for (double d : deviations) report.max_deviation = std::max(report.max_deviation, d);
  report.passed = !report.skipped && report.max_deviation <= tol;
  return report;
}

ProjectorReport projector_properties(const Scenario& scenario, std::size_t trials, double tol, std::uint64_t seed,
                                     std::size_t quad_points) {
  const auto& rep = scenario.group.rep;
  const auto xs = random_hermitians(trials, rep.dimension, seed);
  struct Row {
    double pi_idem, q_idem, defect;
  };
  const auto rows = kernels::parallel_map<Row>(trials, [&](std::size_t k) {
    const Matrix p = pi_G(rep, xs[k]);
    const Matrix q = pi_G(rep, f_map(scenario.profiles, xs[k], quad_points, kernels::Exec::Serial));
    const Matrix qq = pi_G(rep, f_map(scenario.profiles, q, quad_points, kernels::Exec::Serial));
    return Row{(pi_G(rep, p) - p).norm(), (qq - q).norm(), std::max(commutant_defect(rep, p), commutant_defect(rep, q))};
  });
  ProjectorReport report;
  for (const auto& r : rows) {
    report.pi_idempotence = std::max(report.pi_idempotence, r.pi_idem);
    report.q_idempotence = std::max(report.q_idempotence, r.q_idem);
    report.commutant_defect = std::max(report.commutant_defect, r.defect);
  }
  report.passed = report.pi_idempotence <= tol && report.q_idempotence <= tol && report.commutant_defect <= tol;
  return report;
}

SubsystemReport robustness_report(const Scenario& scenario, const FaultModel& fault, std::size_t quad_points) {
  const auto& rep = scenario.group.rep;
  SubsystemReport report;
  report.residual = residual_error(rep, scenario.profiles, fault, quad_points);
  report.residual_norm = report.residual.norm();
  const auto commutant = commutant_basis(rep);
  const auto center = center_basis(rep);
  report.commutant_distance = distance_to_span(commutant, report.residual);
  report.center_distance = distance_to_span(center, report.residual);

  const bool primary = center.size() == 1;
  if (fault.in_algebra && scenario.controls_in_algebra()) {
    report.fault_case = primary ? FaultCase::PrimaryInAlgebra : FaultCase::NonPrimaryInAlgebra;
  } else {
    report.fault_case = FaultCase::Arbitrary;
  }

  const double thr = kProtectionThreshold * std::max(1.0, fault_norm(fault));
  const auto decomposition = decompose_irreps(rep);
  report.cross_block = cross_block_norm(decomposition, report.residual);
  bool all_scalar = true;
  bool dj_safe = true;
  for (std::size_t j = 0; j < decomposition.blocks.size(); ++j) {
    const auto& b = decomposition.blocks[j];
    BlockReport br;
    br.label = b.label;
    br.multiplicity = b.multiplicity;
    br.dimension = b.dimension;
    const Matrix block = decomposition.block(report.residual, j);
    const Eigen::Index size = block.rows();
    br.block_norm = block.norm();
    br.scalar_deviation = (block - (block.trace() / static_cast<double>(size)) * identity(size)).norm();
    br.factor_deviation = commutant_factor(block, b.multiplicity, b.dimension).deviation;
    if (br.scalar_deviation <= thr) {
      br.classification = BlockClass::ProtectedSubspace;
    } else if (b.dimension > 1 && br.factor_deviation <= thr) {
      br.classification = BlockClass::NoiselessFactor;
    } else if (b.multiplicity > 1 && algebra_factor(block, b.multiplicity, b.dimension).deviation <= thr) {
      br.classification = BlockClass::ProtectedFactor;
    } else {
      br.classification = BlockClass::Unprotected;
    }
    all_scalar = all_scalar && br.classification == BlockClass::ProtectedSubspace;
    dj_safe = dj_safe && (b.dimension == 1 || br.classification == BlockClass::ProtectedSubspace ||
                          br.classification == BlockClass::NoiselessFactor);
    report.blocks.push_back(br);
  }

  const bool block_diagonal = report.cross_block <= thr && report.commutant_distance <= thr;
  switch (report.fault_case) {
    case FaultCase::PrimaryInAlgebra:
      report.consistent = block_diagonal && all_scalar && report.center_distance <= thr;
      break;
    case FaultCase::NonPrimaryInAlgebra:
      report.consistent = block_diagonal && all_scalar && report.center_distance <= thr;
      break;
    case FaultCase::Arbitrary:
      report.consistent = block_diagonal && dj_safe;
      break;
  }
  return report;
}

NoiseReport noise_suppression_check(const Scenario& scenario) { return noise_suppression_check(scenario, scenario.noise); }

NoiseReport noise_suppression_check(const Scenario& scenario, const std::vector<Matrix>& noise) {
  const auto& rep = scenario.group.rep;
  const auto center = center_basis(rep);
  const auto decomposition = decompose_irreps(rep);
  NoiseReport report;
  report.full = true;
  report.central = true;
  for (const auto& s : noise) {
    if (s.rows() != rep.dimension || !is_hermitian(s, 1e-12)) {
      throw Error(ErrorCode::InvalidDrift, "invalid drift: noise operators must be Hermitian of the system dimension");
    }
    const double thr = kProtectionThreshold * std::max(1.0, s.norm());
    const Matrix p = pi_G(rep, s);
    NoiseTerm term;
    term.projected_norm = p.norm();
    term.center_distance = distance_to_span(center, p);
    for (std::size_t j = 0; j < decomposition.blocks.size(); ++j) {
      const auto& b = decomposition.blocks[j];
      const Matrix block = decomposition.block(p, j);
      term.block_norms.push_back(block.norm());
      term.factor_deviations.push_back(commutant_factor(block, b.multiplicity, b.dimension).deviation);
    }
    report.full = report.full && term.projected_norm <= thr;
    report.central = report.central && term.center_distance <= thr;
    report.terms.push_back(std::move(term));
  }
  const bool has_factor = std::any_of(decomposition.blocks.begin(), decomposition.blocks.end(),
                                      [](const IrrepBlock& b) { return b.dimension > 1; });
  report.dj_only = !report.full && !report.central && has_factor;
  return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::PreconditionViolation, "precondition violation: slope needs two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingTable scaling_study(const Scenario& scenario, const std::vector<double>& delta_ts, std::size_t cycles,
                           std::size_t slices, std::size_t quad_points, ScheduleKind kind, const DriftModel* drift) {
  if (delta_ts.empty()) throw Error(ErrorCode::PreconditionViolation, "precondition violation: empty delta_t list");
  for (double dt : delta_ts)
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  const DriftModel& h0 = drift != nullptr ? *drift : scenario.drift;

  ScalingTable table;
  table.rows = kernels::parallel_map<ScalingRow>(delta_ts.size(), [&](std::size_t k) {
    const double dt = delta_ts[k];
    const ControlSchedule schedule =
        kind == ScheduleKind::Eulerian ? eulerian_schedule(scenario.path, scenario.profiles, dt) : bangbang_schedule(scenario.group, dt);
    const auto d = decoupling_distance(h0, schedule, cycles, slices, quad_points);
    return ScalingRow{dt, schedule.cycle_time, cycles, d.distance, d.quad_error};
  });

  std::vector<std::size_t> order(table.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return table.rows[a].cycle_time < table.rows[b].cycle_time; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (table.rows[order[k]].distance < table.rows[order[k - 1]].distance) table.monotonic = false;
  }
  if (!table.monotonic) table.notices.push_back("non-monotonic distances: quadrature or slicing too coarse");

  const double largest = std::max_element(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
                           return a.distance < b.distance;
                         })->distance;
  if (table.rows.size() < 2) {
    table.notices.push_back("single point: slope omitted");
    return table;
  }
  if (largest < 1e-12) {
    table.notices.push_back("distances at round-off level (zero drift?): slope undefined");
    return table;
  }
  std::vector<double> x, y;
  for (const auto& r : table.rows) {
    if (r.distance <= 0.0) continue;
    x.push_back(r.cycle_time);
    y.push_back(r.distance / static_cast<double>(r.cycles));
  }
  if (x.size() < 2) {
    table.notices.push_back("fewer than two nonzero distances: slope undefined");
    return table;
  }
  table.slope = loglog_slope(x, y);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (table.rows.size() < 3) table.notices.push_back("fewer than 3 points");
  if (*hi / *lo < 10.0 - 1e-9) table.notices.push_back("sweep spans less than a decade of T_c");
  return table;
}

double block_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t block, EncodingFactor factor,
                            std::size_t cycles, std::size_t states, std::uint64_t seed, std::size_t slices) {
  const auto decomposition = decompose_irreps(scenario.group.rep);
  if (block >= decomposition.blocks.size()) throw Error(ErrorCode::PreconditionViolation, "precondition violation: no such block");
  const auto& b = decomposition.blocks[block];
  ControlSchedule schedule = scenario.schedule();
  if (fault != nullptr) schedule = apply_fault(schedule, *fault);
  const Matrix u = simulate_cycles(scenario.drift, schedule, cycles, slices).unitary;
  const Eigen::Index env = scenario.drift.env_dim;
  const Eigen::Index n = b.multiplicity;
  const Eigen::Index d = b.dimension;

  Rng rng(seed);
  double total = 0.0;
  for (std::size_t k = 0; k < states; ++k) {
    const Vector phi = random_state(rng, factor == EncodingFactor::D ? d : n);
    Vector coeffs = Vector::Zero(n * d);
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
      if (factor == EncodingFactor::D) coeffs(i) = phi(i);  // a = 0
      else coeffs(i * d) = phi(i);                          // i = 0
    }
    const Vector psi = b.basis * coeffs;
    const Matrix rho = u * mixed_env_state(psi, env) * u.adjoint();
    const Matrix rho_j = b.basis.adjoint() * trace_out_env(rho, env) * b.basis;
    Matrix reduced = Matrix::Zero(phi.size(), phi.size());
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index a2 = 0; a2 < n; ++a2)
          for (Eigen::Index i2 = 0; i2 < d; ++i2) {
            const Complex v = rho_j(a * d + i, a2 * d + i2);
            if (factor == EncodingFactor::D && a == a2) reduced(i, i2) += v;
            if (factor == EncodingFactor::C && i == i2) reduced(a, a2) += v;
          }
    total += std::max(0.0, 1.0 - (phi.adjoint() * reduced * phi)(0, 0).real());
  }
  return total / static_cast<double>(states);
}

double undecoupled_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t cycles,
                                  std::size_t states, std::uint64_t seed) {
  const auto& drift = scenario.drift;
  validate_drift(drift);
  Matrix h = drift.total();
  if (fault != nullptr) {
    // Time-average of the fault over one cycle of the same path.
    Matrix avg = Matrix::Zero(drift.system_dim, drift.system_dim);
    for (auto c : scenario.path.colors) {
      const auto* f = fault->find(c);
      if (f == nullptr) continue;
      for (const auto& s : f->segments) avg += s.fraction * s.hamiltonian;
    }
    h += kron(avg / static_cast<double>(scenario.path.length()), identity(drift.env_dim));
  }
  const double t = static_cast<double>(cycles * scenario.path.length()) * scenario.delta_t;
  const Matrix u = expm_hermitian(h, t);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t k = 0; k < states; ++k) total += state_fidelity_error(u, random_state(rng, drift.system_dim), drift.env_dim);
  return total / static_cast<double>(states);
}

double decoupled_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t cycles,
                                std::size_t states, std::uint64_t seed, std::size_t slices) {
  ControlSchedule schedule = scenario.schedule();
  if (fault != nullptr) schedule = apply_fault(schedule, *fault);
  const Matrix u = simulate_cycles(scenario.drift, schedule, cycles, slices).unitary;
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t k = 0; k < states; ++k) {
    total += state_fidelity_error(u, random_state(rng, scenario.drift.system_dim), scenario.drift.env_dim);
  }
  return total / static_cast<double>(states);
}

void label_symmetric_blocks(IrrepDecomposition& decomposition, const Matrix& transposition, int n) {
  for (std::size_t j = 0; j < decomposition.blocks.size(); ++j) {
    auto& b = decomposition.blocks[j];
    const Matrix block = decomposition.block(transposition, j);
    const double chi = algebra_factor(block, b.multiplicity, b.dimension).factor.trace().real();
    if (b.dimension == 1) {
      b.label = chi > 0 ? "[" + std::to_string(n) + "]" : "[1^" + std::to_string(n) + "]";
      if (chi < 0 && n == 3) b.label = "[1 1 1]";
    } else if (b.dimension == n - 1) {
      b.label = "[" + std::to_string(n - 1) + " 1]";
    }
  }
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_checks(const Scenario& scenario, const VerifyOptions& options) {
  VerifyReport report;
  report.scenario = scenario.name;
  const auto& rep = scenario.group.rep;
  const auto residual = [&](std::size_t k) {
    if (k >= scenario.faults.size()) throw Error(ErrorCode::ConfigError, "config error: check refers to a missing fault");
    return residual_error(rep, scenario.profiles, scenario.faults[k], options.quad_points);
  };

  for (const auto& check : scenario.checks) {
    CheckResult r;
    r.name = check.name;
    r.tolerance = check.tolerance;
    switch (check.kind) {
      case CheckKind::CycleLength: {
        r.value = static_cast<double>(scenario.path.length());
        r.passed = r.value == check.expected;
        r.tolerance = check.expected;
        break;
      }
      case CheckKind::PathValid: {
        const auto result = validate_path(build_cayley(scenario.group.group), scenario.path.colors);
        r.passed = result.valid;
        r.value = result.valid ? 1.0 : 0.0;
        r.notice = result.diagnostic;
        break;
      }
      case CheckKind::Theorem: {
        const auto t = verify_theorem(scenario, options.trials, check.tolerance, options.seed, options.quad_points);
        r.value = t.max_deviation;
        r.passed = t.passed || t.skipped;
        r.notice = t.skipped ? t.notice + "; check skipped" : "";
        break;
      }
      case CheckKind::Projector: {
        const auto p = projector_properties(scenario, options.trials, check.tolerance, options.seed + 1, options.quad_points);
        r.value = std::max({p.pi_idempotence, p.q_idempotence, p.commutant_defect});
        r.passed = p.passed;
        break;
      }
      case CheckKind::ResidualBelow: {
        r.value = residual(check.index).norm();
        r.passed = r.value <= check.tolerance;
        break;
      }
      case CheckKind::ResidualCentral: {
        const Matrix res = residual(check.index);
        r.value = distance_to_span(center_basis(rep), res);
        r.passed = r.value <= check.tolerance * std::max(1.0, res.norm());
        break;
      }
      case CheckKind::ResidualEquals: {
        r.value = (residual(check.index) - check.target).norm();
        r.passed = r.value <= check.tolerance;
        break;
      }
      case CheckKind::NoiseSuppressed: {
        const auto n = noise_suppression_check(scenario);
        for (const auto& t : n.terms) r.value = std::max(r.value, t.projected_norm);
        r.passed = r.value <= check.tolerance;
        break;
      }
      case CheckKind::Abelian: {
        r.passed = is_abelian(rep, check.tolerance);
        r.value = r.passed ? 1.0 : 0.0;
        break;
      }
      case CheckKind::NoiselessFactor: {
        auto decomposition = decompose_irreps(rep, 1e-8, options.seed);
        const auto it = std::find_if(decomposition.blocks.begin(), decomposition.blocks.end(), [&](const IrrepBlock& b) {
          return static_cast<double>(b.dimension) == check.expected;
        });
        if (it == decomposition.blocks.end()) {
          r.passed = false;
          r.notice = "no block of the expected dimension";
          break;
        }
        const auto j = static_cast<std::size_t>(it - decomposition.blocks.begin());
        Rng rng(options.seed + 2);
        std::normal_distribution<double> normal;
        for (std::size_t t = 0; t < options.trials; ++t) {
          Matrix s = Matrix::Zero(rep.dimension, rep.dimension);
          for (const auto& term : scenario.noise) s += normal(rng) * term;
          const Matrix block = decomposition.block(pi_G(rep, s), j);
          r.value = std::max(r.value, commutant_factor(block, it->multiplicity, it->dimension).deviation / std::max(1.0, s.norm()));
        }
        r.passed = r.value <= check.tolerance;
        r.notice = "block " + it->label;
        break;
      }
    }
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace eulerdd
