#pragma once

#include <cstddef>
#include <vector>

#include "eulerdd/group.hpp"
#include "eulerdd/kernels.hpp"
#include "eulerdd/pulses.hpp"

namespace eulerdd {

inline constexpr std::size_t kDefaultQuadPoints = 64;
inline constexpr std::size_t kDefaultSlices = 256;

struct Coupling {
  Matrix system;  // S_alpha, traceless
  Matrix env;     // E_alpha
};

/// H_0 = H_S (x) I + I (x) H_E + sum_alpha S_alpha (x) E_alpha. env_dim = 1 is a closed system.
struct DriftModel {
  Eigen::Index system_dim = 0;
  Eigen::Index env_dim = 1;
  Matrix h_system;
  Matrix h_env;
  std::vector<Coupling> couplings;

  Matrix total() const;
};

// Throws InvalidDrift on non-Hermitian parts, non-traceless S_alpha or shape mismatch.
void validate_drift(const DriftModel& drift);

struct PropagatorResult {
  Matrix unitary;
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t slices = 0;
  double truncation_error = 0.0;  // unitarity defect of the accumulated product
};

struct TimelinePiece {
  double start = 0.0;
  double duration = 0.0;
  Matrix hamiltonian;
};
using Timeline = std::vector<TimelinePiece>;

// Ideal-plus-fault control Hamiltonian of an Eulerian schedule over one cycle.
Timeline control_timeline(const ControlSchedule& schedule);

PropagatorResult time_ordered_exp(const Timeline& timeline, double t0, double t1, std::size_t slices_per_segment = 1);

// Ideal control propagator U_c(t); t is reduced modulo the cycle time.
Matrix control_propagator(const ControlSchedule& schedule, double t);

struct AverageResult {
  Matrix value;
  double quad_error = 0.0;  // Richardson estimate from the half-resolution grid
};

// (1/T_c) int_0^{T_c} U_c^dagger (H_0 + Delta H_c) U_c dt with U_c acting as
// U_c (x) I on S (x) E; composite Simpson per timeline segment.
AverageResult average_hamiltonian(const ControlSchedule& schedule, const Matrix& h0,
                                  std::size_t quad_points = kDefaultQuadPoints,
                                  kernels::Exec exec = kernels::Exec::Parallel);

// (1/|Gamma|) sum_lambda (1/dt) int u_lambda^dagger x u_lambda ds
Matrix f_map(const std::vector<PulseProfile>& profiles, const Matrix& x, std::size_t quad_points = kDefaultQuadPoints,
             kernels::Exec exec = kernels::Exec::Parallel);

Matrix q_map(const UnitaryRep& rep, const std::vector<PulseProfile>& profiles, const Matrix& x,
             std::size_t quad_points = kDefaultQuadPoints);

// First-order control-error operator: the q_map average with x replaced by
// the fault history delta h_lambda(s).
Matrix residual_error(const UnitaryRep& rep, const std::vector<PulseProfile>& profiles, const FaultModel& fault,
                      std::size_t quad_points = kDefaultQuadPoints);

// Propagator of H_0 + H_c(t) (x) I over M cycles.
PropagatorResult simulate_cycles(const DriftModel& drift, const ControlSchedule& schedule, std::size_t cycles,
                                 std::size_t slices = kDefaultSlices);

struct DistanceResult {
  double distance = 0.0;
  double quad_error = 0.0;
};

// Phase-aligned distance between the simulated stroboscopic propagator and
// exp(-i H_bar M T_c).
DistanceResult decoupling_distance(const DriftModel& drift, const ControlSchedule& schedule, std::size_t cycles,
                                   std::size_t slices = kDefaultSlices, std::size_t quad_points = kDefaultQuadPoints);

}  // namespace eulerdd
