#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "eulerdd/analysis.hpp"
#include "eulerdd/error.hpp"

namespace eulerdd {

namespace {

constexpr double kPi = std::numbers::pi;

double spectral_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

RepresentedGroup close_or_throw(const std::vector<Matrix>& generators, std::size_t max_order) {
  auto g = close_group(generators, max_order);
  validate_group(g.group);
  validate_rep(g.group, g.rep);
  return g;
}

std::vector<Matrix> all_local_paulis(int qubits) {
  std::vector<Matrix> out;
  for (int k = 0; k < qubits; ++k) {
    out.push_back(embed(sigma_x(), k, qubits));
    out.push_back(embed(sigma_y(), k, qubits));
    out.push_back(embed(sigma_z(), k, qubits));
  }
  return out;
}

Matrix scaled_traceless(Rng& rng, Eigen::Index d, double norm) {
  Matrix m = random_traceless_hermitian(rng, d);
  return m * (norm / m.norm());
}

// Random traceless constant fault on every generator.
FaultModel random_fault(const std::string& name, const RepresentedGroup& g, Rng& rng, double norm) {
  std::vector<Matrix> per;
  for (std::size_t k = 0; k < g.generator_count(); ++k) per.push_back(scaled_traceless(rng, g.rep.dimension, norm));
  return constant_fault(name, per, g.rep);
}

void add_common_checks(Scenario& s) {
  const double expected_length = static_cast<double>(s.group.group.order() * s.group.generator_count());
  s.checks.push_back({"cycle length", CheckKind::CycleLength, 0.0, 0, expected_length, {}});
  s.checks.push_back({"path is Eulerian", CheckKind::PathValid, 0.0, 0, 0.0, {}});
  s.checks.push_back({"Q equals Pi on random X", CheckKind::Theorem, 1e-8, 0, 0.0, {}});
  s.checks.push_back({"projector properties", CheckKind::Projector, 1e-9, 0, 0.0, {}});
}

std::size_t qubits_or(const ScenarioOptions& o, std::size_t fallback) { return o.qubits == 0 ? fallback : o.qubits; }

// Reference path for the Klein-four groups (Pauli, collective flips), 0-based colours.
const std::vector<std::size_t> kKleinPath{0, 1, 0, 1, 1, 0, 1, 0};
const std::vector<std::size_t> kS3Path{1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0};

}  // namespace

bool Scenario::controls_in_algebra() const {
  return std::all_of(profiles.begin(), profiles.end(), [](const PulseProfile& p) { return p.in_algebra; });
}

DriftModel generic_drift(Eigen::Index d, Eigen::Index env_dim, std::uint64_t seed, std::size_t couplings) {
  Rng rng(seed);
  DriftModel drift;
  drift.system_dim = d;
  drift.env_dim = env_dim;
  drift.h_system = random_hermitian(rng, d);
  drift.h_env = random_hermitian(rng, env_dim);
  for (std::size_t k = 0; k < couplings; ++k) drift.couplings.push_back({random_traceless_hermitian(rng, d), random_hermitian(rng, env_dim)});
  const double scale = 1.0 / spectral_norm(drift.total());
  drift.h_system *= scale;
  drift.h_env *= scale;
  for (auto& c : drift.couplings) c.env *= scale;
  return drift;
}

std::vector<CatalogEntry> scenario_catalog() {
  return {
      {"carr-purcell", "Z2 = {I, X} on one qubit, constant sigma_x pulse, L = 2"},
      {"pauli", "Pauli group on n <= 3 qubits, generators X_k and Z_k, L = n 2^(2n+1)"},
      {"spin-flip", "collective X and Z on n qubits (default 2), L = 8"},
      {"symmetric-s3", "S3 permuting three qubits via Heisenberg pulses, L = 12"},
  };
}

Scenario make_scenario(const std::string& name, const ScenarioOptions& options) {
  if (name == "carr-purcell") return carr_purcell_scenario(options);
  if (name == "pauli") return pauli_scenario(options);
  if (name == "spin-flip") return spin_flip_scenario(options);
  if (name == "symmetric-s3") return symmetric_s3_scenario(options);
  throw Error(ErrorCode::ConfigError, "config error: unknown scenario '" + name + "'");
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (const auto& e : scenario_catalog()) out.push_back(make_scenario(e.name));
  return out;
}

Scenario carr_purcell_scenario(const ScenarioOptions& o) {
  Scenario s;
  s.name = "carr-purcell";
  s.description = scenario_catalog()[0].description;
  s.delta_t = o.delta_t;
  s.group = close_or_throw({sigma_x()}, 2);
  s.profiles.push_back(constant_profile(0, s.group, o.delta_t, sigma_x()));
  s.path = {{0, 0}, 0};

  // Pure dephasing: sigma_z coupled to a two-level environment.
  Rng rng(o.seed);
  s.drift.system_dim = 2;
  s.drift.env_dim = 2;
  s.drift.h_system = Matrix::Zero(2, 2);
  s.drift.h_env = random_hermitian(rng, 2);
  s.drift.couplings.push_back({sigma_z(), random_hermitian(rng, 2)});
  const double scale = 1.0 / spectral_norm(s.drift.total());
  s.drift.h_env *= scale;
  s.drift.couplings.front().env *= scale;
  s.noise = {sigma_z()};

  const double eps = 0.1 * o.fault_scale / o.delta_t;
  s.faults.push_back(constant_fault("sigma-x", {eps * sigma_x()}, s.group.rep));
  s.faults.push_back(constant_fault("sigma-y", {eps * sigma_y()}, s.group.rep));
  s.faults.push_back(constant_fault("sigma-z", {eps * sigma_z()}, s.group.rep));

  add_common_checks(s);
  s.checks.push_back({"sigma-x fault residual is eps sigma_x", CheckKind::ResidualEquals, 1e-9, 0, 0.0, eps * sigma_x()});
  s.checks.push_back({"sigma-x fault residual is central", CheckKind::ResidualCentral, 1e-9, 0, 0.0, {}});
  s.checks.push_back({"sigma-y fault has no effect", CheckKind::ResidualBelow, 1e-9, 1, 0.0, {}});
  s.checks.push_back({"sigma-z fault has no effect", CheckKind::ResidualBelow, 1e-9, 2, 0.0, {}});
  s.checks.push_back({"sigma_z noise averaged out", CheckKind::NoiseSuppressed, 1e-12, 0, 0.0, {}});
  return s;
}

Scenario pauli_scenario(const ScenarioOptions& o) {
  const std::size_t n = qubits_or(o, 1);
  if (n < 1 || n > kMaxPauliQubits) {
    throw Error(ErrorCode::PreconditionViolation,
                "precondition violation: pauli scenario supports 1 to 3 qubits (L = n 2^(2n+1) grows too fast)");
  }
  const int q = static_cast<int>(n);
  Scenario s;
  s.name = "pauli";
  s.description = scenario_catalog()[1].description;
  s.delta_t = o.delta_t;
  std::vector<Matrix> gens;
  for (int k = 0; k < q; ++k) {
    gens.push_back(embed(sigma_x(), k, q));
    gens.push_back(embed(sigma_z(), k, q));
  }
  s.group = close_or_throw(gens, std::size_t{1} << (2 * n));
  for (std::size_t k = 0; k < gens.size(); ++k) s.profiles.push_back(constant_profile(k, s.group, o.delta_t, gens[k]));
  s.path = n == 1 ? EulerPath{kKleinPath, 0} : eulerian_cycle(build_cayley(s.group.group));
  s.drift = generic_drift(s.group.rep.dimension, 2, o.seed);
  s.noise = all_local_paulis(q);

  Rng rng(o.seed + 1000);
  for (int k = 0; k < 3; ++k) s.faults.push_back(random_fault("random-" + std::to_string(k + 1), s.group, rng, o.fault_scale));

  add_common_checks(s);
  for (std::size_t k = 0; k < s.faults.size(); ++k) {
    s.checks.push_back({s.faults[k].name + " fault eliminated", CheckKind::ResidualBelow, 1e-8, k, 0.0, {}});
  }
  s.checks.push_back({"local Pauli noise averaged out", CheckKind::NoiseSuppressed, 1e-12, 0, 0.0, {}});
  return s;
}

Scenario spin_flip_scenario(const ScenarioOptions& o, bool in_algebra_controls) {
  const std::size_t n = qubits_or(o, 2);
  if (n < 1 || n > kMaxSpinFlipQubits) {
    throw Error(ErrorCode::PreconditionViolation, "precondition violation: spin-flip scenario supports 1 to 4 qubits");
  }
  const int q = static_cast<int>(n);
  Scenario s;
  s.name = "spin-flip";
  s.description = scenario_catalog()[2].description;
  s.delta_t = o.delta_t;
  const Matrix x = pauli_string(std::string(n, 'X'));
  const Matrix z = pauli_string(std::string(n, 'Z'));
  s.group = close_or_throw({x, z}, 4);
  if (in_algebra_controls) {
    s.profiles.push_back(constant_profile(0, s.group, o.delta_t, x));
    s.profiles.push_back(constant_profile(1, s.group, o.delta_t, z));
  } else {
    Matrix sx = Matrix::Zero(x.rows(), x.cols());
    Matrix sz = sx;
    for (int k = 0; k < q; ++k) {
      sx += embed(sigma_x(), k, q);
      sz += embed(sigma_z(), k, q);
    }
    s.profiles.push_back(constant_profile(0, s.group, o.delta_t, sx));
    s.profiles.push_back(constant_profile(1, s.group, o.delta_t, sz));
    s.description += " (local-field controls, outside the algebra)";
  }
  s.path = {kKleinPath, 0};
  s.drift = generic_drift(s.group.rep.dimension, 2, o.seed);
  s.noise = all_local_paulis(q);

  const double eps = 0.1 * o.fault_scale;
  s.faults.push_back(constant_fault("in-algebra", {eps * x, eps * z}, s.group.rep));
  Rng rng(o.seed + 1000);
  s.faults.push_back(random_fault("arbitrary", s.group, rng, o.fault_scale));

  add_common_checks(s);
  s.checks.push_back({"linear noise averaged out", CheckKind::NoiseSuppressed, 1e-12, 0, 0.0, {}});
  s.checks.push_back({"in-algebra fault residual is central", CheckKind::ResidualCentral, 1e-9, 0, 0.0, {}});
  if (n % 2 == 0) s.checks.push_back({"group algebra is abelian", CheckKind::Abelian, 1e-12, 0, 0.0, {}});
  return s;
}

Scenario symmetric_s3_scenario(const ScenarioOptions& o) {
  Scenario s;
  s.name = "symmetric-s3";
  s.description = scenario_catalog()[3].description;
  s.delta_t = o.delta_t;
  const Matrix swap12 = swap_gate(0, 1, 3);
  const Matrix swap23 = swap_gate(1, 2, 3);
  s.group = close_or_throw({swap12, swap12 * swap23}, 6);

  const double a1 = kPi / (4.0 * o.delta_t);
  const double a2 = kPi / (2.0 * o.delta_t);
  const Matrix h12 = heisenberg(0, 1, 3);
  const Matrix h23 = heisenberg(1, 2, 3);
  s.profiles.push_back(piecewise_profile(0, s.group, {{1.0, h12, a1}}, o.delta_t));
  s.profiles.push_back(piecewise_profile(1, s.group, {{0.5, h23, a2}, {0.5, h12, a2}}, o.delta_t));
  s.path = {kS3Path, 0};
  s.drift = generic_drift(8, 2, o.seed);
  s.noise = all_local_paulis(3);

  const double eps = 0.1 * o.fault_scale;
  s.faults.push_back(make_fault_model("in-algebra", {{0, {{1.0, eps * h12}}}, {1, {{0.5, eps * h23}, {0.5, eps * h12}}}},
                                      s.group.rep));
  Rng rng(o.seed + 1000);
  s.faults.push_back(random_fault("arbitrary", s.group, rng, o.fault_scale));

  add_common_checks(s);
  s.checks.push_back({"noiseless two-dimensional factor", CheckKind::NoiselessFactor, 1e-8, 0, 2.0, {}});
  s.checks.push_back({"in-algebra fault residual is central", CheckKind::ResidualCentral, 1e-9, 0, 0.0, {}});
  return s;
}

}  // namespace eulerdd
