#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eulerdd/cayley.hpp"
#include "eulerdd/group.hpp"

namespace eulerdd {

inline constexpr double kRealizationTol = 1e-9;
inline constexpr double kAlgebraResidualTol = 1e-10;

/// One piecewise-constant piece of a generator pulse: h = amplitude * axis on
/// a `fraction` of the sub-interval.
struct PulseSegment {
  double fraction = 1.0;
  Matrix axis;
  double amplitude = 0.0;  // angular frequency, hbar = 1

  Matrix hamiltonian() const { return amplitude * axis; }
};

/// Control Hamiltonian h_lambda(t) on [0, delta_t] whose time-ordered
/// exponential realises generator lambda up to phase.
struct PulseProfile {
  std::size_t generator = 0;
  double delta_t = 1.0;
  std::vector<PulseSegment> segments;
  bool in_algebra = false;        // computed from the segments
  double realization_error = 0.0;  // phase-aligned distance to the target

  // u(s) = T exp(-i int_0^s h), s in [0, delta_t].
  Matrix propagator(double s) const;
  Matrix realized() const { return propagator(delta_t); }
  // Same rotation angles over a different sub-interval length.
  PulseProfile rescaled(double new_delta_t) const;
  double max_norm() const;  // largest operator norm over segments
};

// Projection residual test against an HS-orthonormal algebra basis.
bool in_span(const std::vector<Matrix>& basis, const Matrix& h, double rel_tol = kAlgebraResidualTol);

PulseProfile constant_profile(std::size_t generator, const RepresentedGroup& g, double delta_t, const Matrix& axis);

// Segments carry (fraction, axis, amplitude); throws ProfileMismatch when the
// product does not realise the generator.
PulseProfile piecewise_profile(std::size_t generator, const RepresentedGroup& g, std::vector<PulseSegment> segments,
                               double delta_t);

struct FaultSegment {
  double fraction = 1.0;
  Matrix hamiltonian;
};

struct GeneratorFault {
  std::size_t generator = 0;
  std::vector<FaultSegment> segments;
};

/// Systematic control error: every time generator lambda plays, delta h_lambda(s)
/// is added at the same offset s within the sub-interval.
struct FaultModel {
  std::string name;
  std::vector<GeneratorFault> per_generator;
  bool in_algebra = false;

  const GeneratorFault* find(std::size_t generator) const;
  // delta h_lambda(s); zero when the generator carries no fault.
  Matrix at(std::size_t generator, double fraction, Eigen::Index dim) const;
};

FaultModel make_fault_model(std::string name, std::vector<GeneratorFault> per_generator, const UnitaryRep& rep);
// Constant delta h per generator, one entry per generator.
FaultModel constant_fault(std::string name, const std::vector<Matrix>& per_generator, const UnitaryRep& rep);

enum class ScheduleKind { Eulerian, BangBang };

/// A piece of the control timeline on which both the ideal control and the
/// fault are constant.
struct ControlSegment {
  double start = 0.0;
  double duration = 0.0;
  std::size_t interval = 0;  // 0-based sub-interval
  std::size_t color = 0;
  Matrix control;
  Matrix fault;
};

struct ControlSchedule {
  ScheduleKind kind = ScheduleKind::Eulerian;
  double delta_t = 0.0;
  double cycle_time = 0.0;
  // Eulerian: path colours. Bang-bang: group element visited on each sub-interval.
  std::vector<std::size_t> sequence;
  std::vector<PulseProfile> profiles;  // Eulerian, indexed by colour
  // Control frame at each sub-interval boundary, frames[l] = U_c(l delta_t),
  // l = 0..intervals(); the last entry is the closing frame.
  std::vector<Matrix> frames;
  std::vector<Matrix> kicks;  // Bang-bang kicks p_l = g_l g_{l-1}^dagger, closing kick last
  std::optional<FaultModel> fault;

  std::size_t intervals() const { return sequence.size(); }
  Eigen::Index dimension() const { return frames.empty() ? 0 : frames.front().rows(); }
  // Eulerian only: piecewise-constant timeline over one cycle on the merged
  // profile/fault grid.
  std::vector<ControlSegment> timeline() const;
  double max_control_norm() const;
};

ControlSchedule eulerian_schedule(const EulerPath& path, const std::vector<PulseProfile>& profiles, double delta_t);
ControlSchedule bangbang_schedule(const RepresentedGroup& g, double delta_t);
ControlSchedule apply_fault(const ControlSchedule& schedule, const FaultModel& fault);

// Cumulative breakpoints of a fraction list, starting at 0 and ending at 1.
std::vector<double> breakpoints(const std::vector<double>& fractions);

}  // namespace eulerdd
