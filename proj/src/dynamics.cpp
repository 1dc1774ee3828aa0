#include "eulerdd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eulerdd/error.hpp"

namespace eulerdd {

namespace {

constexpr double kUnitarityFlag = 1e-8;

[[noreturn]] void invalid_drift(const std::string& why) { throw Error(ErrorCode::InvalidDrift, "invalid drift: " + why); }

void check_quad_points(std::size_t quad_points) {
  if (quad_points < 2) throw Error(ErrorCode::PreconditionViolation, "precondition violation: quad_points must be at least 2");
}

std::size_t simpson_intervals(std::size_t quad_points) {
  const std::size_t n = std::max<std::size_t>(2, quad_points);
  return n + (n % 2);
}

/// Interval [s0, s0 + length] on which the frame is u(s) = exp(-i h (s - s0)) * prefix
/// and the averaged operator is constant.
struct Piece {
  double length = 0.0;
  HermitianPropagator step;
  Matrix prefix;
  Matrix op;
};

// sum over pieces of int (u (x) I)^dagger op (u (x) I) ds, composite Simpson with n intervals per piece.
Matrix integrate_pieces(const std::vector<Piece>& pieces, std::size_t n, Eigen::Index env_dim, kernels::Exec exec) {
  if (pieces.empty()) return {};
  const Eigen::Index rows = pieces.front().op.rows();
  const std::size_t nodes = n + 1;
  const Matrix env_id = identity(env_dim);
  return kernels::sum(exec, pieces.size() * nodes, rows, [&](std::size_t idx) -> Matrix {
    const auto& p = pieces[idx / nodes];
    const std::size_t k = idx % nodes;
    const double h = p.length / static_cast<double>(n);
    const double w = (k == 0 || k == n) ? h / 3.0 : (k % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    const Matrix u = p.step.at(h * static_cast<double>(k)) * p.prefix;
    if (env_dim == 1) return w * (u.adjoint() * p.op * u);
    const Matrix full = kron(u, env_id);
    return w * (full.adjoint() * p.op * full);
  });
}

struct Integral {
  Matrix value;
  double error = 0.0;
};

Integral integrate_with_estimate(const std::vector<Piece>& pieces, std::size_t quad_points, Eigen::Index env_dim,
                                 kernels::Exec exec) {
  const std::size_t n = simpson_intervals(quad_points);
  Integral out;
  out.value = integrate_pieces(pieces, n, env_dim, exec);
  const std::size_t coarse = simpson_intervals(n / 2);
  if (coarse < n) out.error = (out.value - integrate_pieces(pieces, coarse, env_dim, exec)).norm() / 15.0;
  return out;
}

// Pieces of one profile on its grid merged with an optional fault grid; op_at
// gives the operator for a piece midpoint (fraction of the sub-interval).
template <class OpAt>
std::vector<Piece> profile_pieces(const PulseProfile& profile, const std::vector<double>& grid, OpAt&& op_at) {
  std::vector<Piece> pieces;
  const auto pgrid = breakpoints([&] {
    std::vector<double> f;
    for (const auto& s : profile.segments) f.push_back(s.fraction);
    return f;
  }());
  const Eigen::Index d = profile.segments.front().axis.rows();
  Matrix u = identity(d);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double mid = 0.5 * (grid[k] + grid[k + 1]);
    std::size_t seg = 0;
    while (seg + 2 < pgrid.size() && mid >= pgrid[seg + 1]) ++seg;
    const Matrix h = profile.segments[seg].hamiltonian();
    Piece p;
    p.length = (grid[k + 1] - grid[k]) * profile.delta_t;
    p.step = HermitianPropagator(h);
    p.prefix = u;
    p.op = op_at(mid);
    u = p.step.at(p.length) * u;
    pieces.push_back(std::move(p));
  }
  return pieces;
}

std::vector<double> profile_grid(const PulseProfile& profile) {
  std::vector<double> f;
  for (const auto& s : profile.segments) f.push_back(s.fraction);
  return breakpoints(f);
}

std::vector<double> merged_grid(const PulseProfile& profile, const GeneratorFault* fault) {
  auto grid = profile_grid(profile);
  if (fault != nullptr) {
    std::vector<double> f;
    for (const auto& s : fault->segments) f.push_back(s.fraction);
    const auto fg = breakpoints(f);
    grid.insert(grid.end(), fg.begin(), fg.end());
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    for (double x : grid)
      if (out.empty() || x - out.back() > 1e-11) out.push_back(x);
    out.back() = 1.0;
    grid = std::move(out);
  }
  return grid;
}

void check_profiles(const std::vector<PulseProfile>& profiles, Eigen::Index d) {
  if (profiles.empty()) throw Error(ErrorCode::IncompleteProfiles, "incomplete profile set: no profiles");
  for (const auto& p : profiles) {
    if (p.segments.empty() || p.segments.front().axis.rows() != d) {
      throw Error(ErrorCode::ShapeError, "shape error: profile and operator dimensions differ");
    }
  }
}

Eigen::Index env_dim_for(const ControlSchedule& schedule, const Matrix& h0) {
  const Eigen::Index d = schedule.dimension();
  if (d == 0 || h0.rows() != h0.cols() || h0.rows() % d != 0) {
    throw Error(ErrorCode::ShapeError, "shape error: drift dimension is not a multiple of the control dimension");
  }
  return h0.rows() / d;
}

Matrix power(const Matrix& u, std::size_t m) {
  Matrix out = identity(u.rows());
  for (std::size_t k = 0; k < m; ++k) out = u * out;
  return out;
}

// exp(-i h duration) as `slices` repeated identical steps.
Matrix sliced_exp(const Matrix& h, double duration, std::size_t slices) {
  return power(expm_hermitian(h, duration / static_cast<double>(slices)), slices);
}

}  // namespace

Matrix DriftModel::total() const {
  Matrix h = kron(h_system, identity(env_dim)) + kron(identity(system_dim), h_env);
  for (const auto& c : couplings) h += kron(c.system, c.env);
  return h;
}

void validate_drift(const DriftModel& drift) {
  if (drift.system_dim < 1 || drift.env_dim < 1) invalid_drift("dimensions must be positive");
  if (drift.h_system.rows() != drift.system_dim || drift.h_system.cols() != drift.system_dim) invalid_drift("H_S has the wrong shape");
  if (drift.h_env.rows() != drift.env_dim || drift.h_env.cols() != drift.env_dim) invalid_drift("H_E has the wrong shape");
  if (!is_hermitian(drift.h_system, 1e-12)) invalid_drift("H_S is not Hermitian");
  if (!is_hermitian(drift.h_env, 1e-12)) invalid_drift("H_E is not Hermitian");
  for (std::size_t k = 0; k < drift.couplings.size(); ++k) {
    const auto& c = drift.couplings[k];
    const std::string name = "coupling " + std::to_string(k + 1);
    if (c.system.rows() != drift.system_dim || c.system.cols() != drift.system_dim) invalid_drift(name + " S has the wrong shape");
    if (c.env.rows() != drift.env_dim || c.env.cols() != drift.env_dim) invalid_drift(name + " E has the wrong shape");
    if (!is_hermitian(c.system, 1e-12) || !is_hermitian(c.env, 1e-12)) invalid_drift(name + " is not Hermitian");
    if (std::abs(c.system.trace()) > 1e-10 * std::max(1.0, c.system.norm())) invalid_drift(name + " S is not traceless");
  }
}

Timeline control_timeline(const ControlSchedule& schedule) {
  Timeline out;
  for (const auto& seg : schedule.timeline()) out.push_back({seg.start, seg.duration, seg.control + seg.fault});
  return out;
}

PropagatorResult time_ordered_exp(const Timeline& timeline, double t0, double t1, std::size_t slices_per_segment) {
  if (timeline.empty()) throw Error(ErrorCode::TimeOutOfRange, "time out of range: empty timeline");
  const double begin = timeline.front().start;
  const double end = timeline.back().start + timeline.back().duration;
  const double slack = 1e-12 * std::max(1.0, std::abs(end));
  if (!(t0 <= t1) || t0 < begin - slack || t1 > end + slack) throw Error(ErrorCode::TimeOutOfRange, "time out of range");
  slices_per_segment = std::max<std::size_t>(1, slices_per_segment);

  const Eigen::Index d = timeline.front().hamiltonian.rows();
  PropagatorResult out{identity(d), t0, t1, 0, 0.0};
  for (const auto& piece : timeline) {
    const double lo = std::max(t0, piece.start);
    const double hi = std::min(t1, piece.start + piece.duration);
    if (hi <= lo) continue;
    out.unitary = sliced_exp(piece.hamiltonian, hi - lo, slices_per_segment) * out.unitary;
    out.slices += slices_per_segment;
  }
  out.truncation_error = unitarity_error(out.unitary);
  return out;
}

Matrix control_propagator(const ControlSchedule& schedule, double t) {
  if (t < 0.0) throw Error(ErrorCode::TimeOutOfRange, "time out of range: negative time");
  if (schedule.cycle_time <= 0.0) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: zero cycle time");
  const double reduced = std::fmod(t, schedule.cycle_time);
  const auto l = std::min(static_cast<std::size_t>(reduced / schedule.delta_t), schedule.intervals() - 1);
  if (schedule.kind == ScheduleKind::BangBang) return schedule.frames[l];
  const double s = std::max(0.0, reduced - static_cast<double>(l) * schedule.delta_t);
  return schedule.profiles[schedule.sequence[l]].propagator(s) * schedule.frames[l];
}

AverageResult average_hamiltonian(const ControlSchedule& schedule, const Matrix& h0, std::size_t quad_points,
                                  kernels::Exec exec) {
  if (!is_hermitian(h0, 1e-12)) invalid_drift("drift Hamiltonian is not Hermitian");
  check_quad_points(quad_points);
  const Eigen::Index env = env_dim_for(schedule, h0);

  if (schedule.kind == ScheduleKind::BangBang) {
    const Matrix env_id = identity(env);
    std::vector<Matrix> frames;
    for (std::size_t l = 0; l < schedule.intervals(); ++l) frames.push_back(kron(schedule.frames[l], env_id));
    return {kernels::group_average(frames, h0), 0.0};
  }

  const Matrix env_id = identity(env);
  std::vector<Piece> pieces;
  for (std::size_t l = 0; l < schedule.intervals(); ++l) {
    const auto color = schedule.sequence[l];
    const auto& profile = schedule.profiles[color];
    const GeneratorFault* f = schedule.fault ? schedule.fault->find(color) : nullptr;
    auto local = profile_pieces(profile, merged_grid(profile, f), [&](double mid) -> Matrix {
      if (f == nullptr) return h0;
      return h0 + kron(schedule.fault->at(color, mid, schedule.dimension()), env_id);
    });
    for (auto& p : local) {
      p.prefix = p.prefix * schedule.frames[l];
      pieces.push_back(std::move(p));
    }
  }
  auto integral = integrate_with_estimate(pieces, quad_points, env, exec);
  const double tc = schedule.cycle_time;
  return {integral.value / tc, integral.error / tc};
}

Matrix f_map(const std::vector<PulseProfile>& profiles, const Matrix& x, std::size_t quad_points, kernels::Exec exec) {
  check_quad_points(quad_points);
  check_profiles(profiles, x.rows());
  if (x.rows() != x.cols()) throw Error(ErrorCode::ShapeError, "shape error: operator must be square");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& p : profiles) {
    const auto pieces = profile_pieces(p, profile_grid(p), [&](double) { return x; });
    out += integrate_pieces(pieces, simpson_intervals(quad_points), 1, exec) / p.delta_t;
  }
  return out / static_cast<double>(profiles.size());
}

Matrix q_map(const UnitaryRep& rep, const std::vector<PulseProfile>& profiles, const Matrix& x, std::size_t quad_points) {
  return pi_G(rep, f_map(profiles, x, quad_points));
}

Matrix residual_error(const UnitaryRep& rep, const std::vector<PulseProfile>& profiles, const FaultModel& fault,
                      std::size_t quad_points) {
  check_quad_points(quad_points);
  const Eigen::Index d = rep.dimension;
  check_profiles(profiles, d);
  for (const auto& f : fault.per_generator) {
    if (std::none_of(profiles.begin(), profiles.end(), [&](const PulseProfile& p) { return p.generator == f.generator; })) {
      throw Error(ErrorCode::IncompatibleFaultGrid, "incompatible fault grid: fault on a generator without profile");
    }
  }
  Matrix out = Matrix::Zero(d, d);
  for (const auto& p : profiles) {
    const GeneratorFault* f = fault.find(p.generator);
    if (f == nullptr) continue;
    const auto pieces = profile_pieces(p, merged_grid(p, f), [&](double mid) { return fault.at(p.generator, mid, d); });
    out += integrate_pieces(pieces, simpson_intervals(quad_points), 1, kernels::Exec::Parallel) / p.delta_t;
  }
  return pi_G(rep, out / static_cast<double>(profiles.size()));
}

PropagatorResult simulate_cycles(const DriftModel& drift, const ControlSchedule& schedule, std::size_t cycles,
                                 std::size_t slices) {
  validate_drift(drift);
  if (cycles < 1) throw Error(ErrorCode::PreconditionViolation, "precondition violation: at least one cycle");
  if (drift.system_dim != schedule.dimension()) throw Error(ErrorCode::ShapeError, "shape error: drift and schedule dimensions differ");
  slices = std::max<std::size_t>(1, slices);
  const Matrix h0 = drift.total();
  const Matrix env_id = identity(drift.env_dim);

  Matrix cycle = identity(h0.rows());
  std::size_t used = 0;
  if (schedule.kind == ScheduleKind::BangBang) {
    // Toggling frame: the control frame is back at the identity after each cycle.
    for (std::size_t l = 0; l < schedule.intervals(); ++l) {
      const Matrix frame = kron(schedule.frames[l], env_id);
      cycle = sliced_exp(frame.adjoint() * h0 * frame, schedule.delta_t, slices) * cycle;
      used += slices;
    }
  } else {
    for (const auto& seg : schedule.timeline()) {
      const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(slices) * seg.duration / schedule.delta_t)));
      cycle = sliced_exp(h0 + kron(seg.control + seg.fault, env_id), seg.duration, n) * cycle;
      used += n;
    }
  }

  PropagatorResult out;
  out.unitary = power(cycle, cycles);
  out.t0 = 0.0;
  out.t1 = static_cast<double>(cycles) * schedule.cycle_time;
  out.slices = used * cycles;
  out.truncation_error = unitarity_error(out.unitary);
  if (out.truncation_error > kUnitarityFlag) {
    std::ostringstream os;
    os << "unitarity drift " << out.truncation_error << " exceeds " << kUnitarityFlag << "; slices too coarse";
    throw Error(ErrorCode::UnitarityDrift, os.str());
  }
  return out;
}

DistanceResult decoupling_distance(const DriftModel& drift, const ControlSchedule& schedule, std::size_t cycles,
                                   std::size_t slices, std::size_t quad_points) {
  const auto sim = simulate_cycles(drift, schedule, cycles, slices);
  const auto avg = average_hamiltonian(schedule, drift.total(), quad_points);
  const Matrix target = expm_hermitian(avg.value, sim.t1);
  return {phase_distance(sim.unitary, target), avg.quad_error};
}

}  // namespace eulerdd
