#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eulerdd/cayley.hpp"
#include "eulerdd/dynamics.hpp"
#include "eulerdd/group.hpp"
#include "eulerdd/pulses.hpp"

namespace eulerdd {

inline constexpr double kProtectionThreshold = 1e-8;  // relative to the input norm
inline constexpr std::size_t kMaxPauliQubits = 3;
inline constexpr std::size_t kMaxSpinFlipQubits = 4;

enum class CheckKind {
  CycleLength,      // expected = L
  PathValid,
  Theorem,          // q_map vs pi_G on random X
  Projector,        // idempotence and commutant membership
  ResidualBelow,    // ||residual(fault index)|| <= tolerance
  ResidualCentral,  // residual(fault index) in the center, nonzero allowed
  ResidualEquals,   // residual(fault index) equals `target` within tolerance
  NoiseSuppressed,  // pi_G(S_alpha) = 0 for every alpha
  Abelian,
  NoiselessFactor,  // a block with d_J = expected exists and symmetrized noise is scalar on it
};

struct ExpectedCheck {
  std::string name;
  CheckKind kind = CheckKind::Theorem;
  double tolerance = 1e-9;
  std::size_t index = 0;
  double expected = 0.0;
  Matrix target;
};

/// A fully built verification scenario at a fixed sub-interval length.
struct Scenario {
  std::string name;
  std::string description;
  RepresentedGroup group;
  std::vector<PulseProfile> profiles;  // indexed by generator
  EulerPath path;
  DriftModel drift;
  std::vector<FaultModel> faults;
  std::vector<Matrix> noise;  // system operators S_alpha
  std::vector<ExpectedCheck> checks;
  double delta_t = 0.01;

  bool controls_in_algebra() const;
  ControlSchedule schedule() const { return eulerian_schedule(path, profiles, delta_t); }
};

struct ScenarioOptions {
  std::size_t qubits = 0;  // 0 = scenario default
  double delta_t = 0.01;
  double fault_scale = 1.0;
  std::uint64_t seed = 1;
};

struct CatalogEntry {
  std::string name;
  std::string description;
};

std::vector<CatalogEntry> scenario_catalog();
Scenario make_scenario(const std::string& name, const ScenarioOptions& options = {});
// The four built-in scenarios with default parameters.
std::vector<Scenario> builtin_scenarios();

Scenario carr_purcell_scenario(const ScenarioOptions& options);
Scenario pauli_scenario(const ScenarioOptions& options);
// in_algebra_controls = false drives each collective flip with sum_k sigma^{(k)},
// which realises the same generators but lies outside the group algebra.
Scenario spin_flip_scenario(const ScenarioOptions& options, bool in_algebra_controls = true);
Scenario symmetric_s3_scenario(const ScenarioOptions& options);

// Random drift on C^d (x) C^env_dim with traceless couplings, scaled to unit
// operator norm.
DriftModel generic_drift(Eigen::Index d, Eigen::Index env_dim, std::uint64_t seed, std::size_t couplings = 3);

struct TheoremReport {
  bool skipped = false;
  std::string notice;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 0;
  bool passed = false;
};

TheoremReport verify_theorem(const Scenario& scenario, std::size_t trials, double tol, std::uint64_t seed,
                             std::size_t quad_points = kDefaultQuadPoints);

struct ProjectorReport {
  double pi_idempotence = 0.0;
  double q_idempotence = 0.0;
  double commutant_defect = 0.0;  // largest ||[map(X), g_j]||
  bool passed = false;
};

ProjectorReport projector_properties(const Scenario& scenario, std::size_t trials, double tol, std::uint64_t seed,
                                     std::size_t quad_points = kDefaultQuadPoints);

enum class FaultCase { PrimaryInAlgebra, NonPrimaryInAlgebra, Arbitrary };
std::string to_string(FaultCase c);

enum class BlockClass { NoiselessFactor, ProtectedFactor, ProtectedSubspace, Unprotected };
std::string to_string(BlockClass c);

struct BlockReport {
  std::string label;
  Eigen::Index multiplicity = 0;
  Eigen::Index dimension = 0;
  double block_norm = 0.0;        // ||P_J r P_J||
  double scalar_deviation = 0.0;  // distance of the block from a multiple of its identity
  double factor_deviation = 0.0;  // ||block - N (x) I||
  BlockClass classification = BlockClass::Unprotected;
};

struct SubsystemReport {
  Matrix residual;
  double residual_norm = 0.0;
  double commutant_distance = 0.0;
  double center_distance = 0.0;
  double cross_block = 0.0;
  FaultCase fault_case = FaultCase::Arbitrary;
  std::vector<BlockReport> blocks;
  bool consistent = false;  // classification agrees with the fault case
};

SubsystemReport robustness_report(const Scenario& scenario, const FaultModel& fault,
                                  std::size_t quad_points = kDefaultQuadPoints);

struct NoiseTerm {
  double projected_norm = 0.0;  // ||pi_G(S_alpha)||
  double center_distance = 0.0;
  std::vector<double> block_norms;
  std::vector<double> factor_deviations;  // ||block - N (x) I|| per block
};

struct NoiseReport {
  std::vector<NoiseTerm> terms;
  bool full = false;     // every pi_G(S_alpha) vanishes
  bool central = false;  // every pi_G(S_alpha) lies in the center
  bool dj_only = false;  // only the D_J factors (d_J > 1) are protected
};

NoiseReport noise_suppression_check(const Scenario& scenario);
NoiseReport noise_suppression_check(const Scenario& scenario, const std::vector<Matrix>& noise);

struct ScalingRow {
  double delta_t = 0.0;
  double cycle_time = 0.0;
  std::size_t cycles = 0;
  double distance = 0.0;
  double quad_error = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::optional<double> slope;  // d log(distance / M) / d log(T_c)
  bool monotonic = true;
  std::vector<std::string> notices;
};

ScalingTable scaling_study(const Scenario& scenario, const std::vector<double>& delta_ts, std::size_t cycles,
                           std::size_t slices = kDefaultSlices, std::size_t quad_points = kDefaultQuadPoints,
                           ScheduleKind kind = ScheduleKind::Eulerian, const DriftModel* drift = nullptr);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Stroboscopic fidelity error of a block encoding under a faulty Eulerian
// schedule, environment maximally mixed. Factor selects where the random pure
// state lives: the D_J factor (C_J fixed to its first basis vector) or the
// C_J factor (D_J fixed). Averaged over `states` random states.
enum class EncodingFactor { D, C };
double block_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t block, EncodingFactor factor,
                            std::size_t cycles, std::size_t states, std::uint64_t seed,
                            std::size_t slices = kDefaultSlices);

// Same quantity on the whole system with no control at all: evolution under
// H_0 plus the generator-averaged fault for M cycle times.
double undecoupled_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t cycles,
                                  std::size_t states, std::uint64_t seed);
// Decoupled counterpart on the whole system.
double decoupled_fidelity_error(const Scenario& scenario, const FaultModel* fault, std::size_t cycles,
                                std::size_t states, std::uint64_t seed, std::size_t slices = kDefaultSlices);

// Partition labels for S_n blocks: [n], [1^n] or [n-1 1] by dimension and the
// character of the representing transposition.
void label_symmetric_blocks(IrrepDecomposition& decomposition, const Matrix& transposition, int n);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string notice;
};

struct VerifyOptions {
  std::size_t trials = 100;
  std::size_t quad_points = kDefaultQuadPoints;
  std::uint64_t seed = 1;
};

struct VerifyReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_checks(const Scenario& scenario, const VerifyOptions& options);

}  // namespace eulerdd
