#include "eulerdd/pulses.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "eulerdd/error.hpp"

namespace eulerdd {

namespace {

constexpr double kGridTol = 1e-12;

double operator_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void check_fractions(const std::vector<double>& fractions, ErrorCode code, const std::string& what) {
  if (fractions.empty()) throw Error(code, what + ": no segments");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw Error(code, what + ": segment fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > kGridTol * 10) throw Error(code, what + ": segment fractions must sum to 1");
}

std::vector<double> profile_fractions(const PulseProfile& p) {
  std::vector<double> out;
  for (const auto& s : p.segments) out.push_back(s.fraction);
  return out;
}

std::vector<double> fault_fractions(const GeneratorFault& f) {
  std::vector<double> out;
  for (const auto& s : f.segments) out.push_back(s.fraction);
  return out;
}

bool is_subset(const std::vector<double>& small, const std::vector<double>& large) {
  return std::all_of(small.begin(), small.end(), [&](double x) {
    return std::any_of(large.begin(), large.end(), [&](double y) { return std::abs(x - y) <= kGridTol * 10; });
  });
}

std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > kGridTol * 10) out.push_back(x);
  out.back() = 1.0;
  return out;
}

// Index of the segment covering `fraction` (cumulative grid).
std::size_t covering_segment(const std::vector<double>& grid, double fraction) {
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (fraction < grid[k + 1]) return k;
  return grid.size() - 2;
}

void finish_profile(PulseProfile& profile, const RepresentedGroup& g) {
  const Matrix& target = g.generator_matrix(profile.generator);
  profile.realization_error = phase_distance(profile.realized(), target);
  const auto basis = algebra_basis(g.rep);
  profile.in_algebra = std::all_of(profile.segments.begin(), profile.segments.end(),
                                   [&](const PulseSegment& s) { return in_span(basis, s.hamiltonian()); });
}

}  // namespace

std::vector<double> breakpoints(const std::vector<double>& fractions) {
  std::vector<double> out{0.0};
  for (double f : fractions) out.push_back(out.back() + f);
  out.back() = 1.0;
  return out;
}

Matrix PulseProfile::propagator(double s) const {
  const Eigen::Index d = segments.empty() ? 0 : segments.front().axis.rows();
  Matrix u = identity(d);
  double elapsed = 0.0;
  for (const auto& seg : segments) {
    if (s <= elapsed) break;
    const double length = seg.fraction * delta_t;
    const double tau = std::min(length, s - elapsed);
    u = expm_hermitian(seg.hamiltonian(), tau) * u;
    elapsed += length;
  }
  return u;
}

PulseProfile PulseProfile::rescaled(double new_delta_t) const {
  if (!(new_delta_t > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  PulseProfile out = *this;
  for (auto& s : out.segments) s.amplitude *= delta_t / new_delta_t;
  out.delta_t = new_delta_t;
  return out;
}

double PulseProfile::max_norm() const {
  double best = 0.0;
  for (const auto& s : segments) best = std::max(best, operator_norm(s.hamiltonian()));
  return best;
}

bool in_span(const std::vector<Matrix>& basis, const Matrix& h, double rel_tol) {
  return distance_to_span(basis, h) <= rel_tol * std::max(1.0, h.norm());
}

PulseProfile constant_profile(std::size_t generator, const RepresentedGroup& g, double delta_t, const Matrix& axis) {
  if (!(delta_t > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  if (generator >= g.generator_count()) throw Error(ErrorCode::ProfileMismatch, "profile does not implement generator: index out of range");
  if (axis.rows() != g.rep.dimension || !is_hermitian(axis, 1e-12)) {
    throw Error(ErrorCode::UnreachableGenerator, "unreachable generator along axis: axis must be Hermitian of the representation dimension");
  }
  const Matrix& target = g.generator_matrix(generator);

  double theta = 0.0;
  if (phase_distance(identity(g.rep.dimension), target) > kRealizationTol) {
    // exp(-i theta axis) is diagonal in the axis eigenbasis, so the target must
    // be too; the phase ratio between two eigenvalues fixes theta modulo the
    // period of their gap.
    Eigen::SelfAdjointEigenSolver<Matrix> es(axis);
    const Matrix& v = es.eigenvectors();
    const Eigen::VectorXd& e = es.eigenvalues();
    const Matrix rotated = v.adjoint() * target * v;
    const Matrix off = rotated - Matrix(rotated.diagonal().asDiagonal());
    const auto unreachable = [] { return Error(ErrorCode::UnreachableGenerator, "unreachable generator along axis"); };
    if (off.norm() > 1e-8) throw unreachable();

    Eigen::Index k = 1;
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    while (k < e.size() && std::abs(e(k) - e(0)) <= 1e-12 * scale) ++k;
    if (k == e.size()) throw unreachable();
    const double gap = e(k) - e(0);
    const double phase = -std::arg(rotated(k, k) * std::conj(rotated(0, 0)));

    std::vector<double> candidates;
    constexpr int kWindings = 256;
    for (int m = -kWindings; m <= kWindings; ++m) {
      const double t = (phase + 2.0 * std::numbers::pi * m) / gap;
      if (t > 1e-12) candidates.push_back(t);
    }
    std::sort(candidates.begin(), candidates.end());
    theta = std::numeric_limits<double>::quiet_NaN();
    for (double t : candidates) {
      if (phase_distance(expm_hermitian(axis, t), target) <= kRealizationTol) {
        theta = t;
        break;
      }
    }
    if (std::isnan(theta)) throw unreachable();
  }

  PulseProfile profile;
  profile.generator = generator;
  profile.delta_t = delta_t;
  profile.segments.push_back({1.0, axis, theta / delta_t});
  finish_profile(profile, g);
  return profile;
}

PulseProfile piecewise_profile(std::size_t generator, const RepresentedGroup& g, std::vector<PulseSegment> segments,
                               double delta_t) {
  if (!(delta_t > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  if (generator >= g.generator_count()) throw Error(ErrorCode::ProfileMismatch, "profile does not implement generator: index out of range");
  std::vector<double> fractions;
  for (const auto& s : segments) {
    if (s.axis.rows() != g.rep.dimension || s.axis.cols() != g.rep.dimension || !is_hermitian(s.axis, 1e-12)) {
      throw Error(ErrorCode::ProfileMismatch, "profile does not implement generator: segment axis must be Hermitian of the representation dimension");
    }
    fractions.push_back(s.fraction);
  }
  check_fractions(fractions, ErrorCode::ProfileMismatch, "malformed profile");

  PulseProfile profile;
  profile.generator = generator;
  profile.delta_t = delta_t;
  profile.segments = std::move(segments);
  finish_profile(profile, g);
  if (profile.realization_error > kRealizationTol) {
    std::ostringstream os;
    os << "profile does not implement generator (achieved-vs-target distance " << profile.realization_error << ")";
    throw Error(ErrorCode::ProfileMismatch, os.str());
  }
  return profile;
}

const GeneratorFault* FaultModel::find(std::size_t generator) const {
  for (const auto& f : per_generator)
    if (f.generator == generator) return &f;
  return nullptr;
}

Matrix FaultModel::at(std::size_t generator, double fraction, Eigen::Index dim) const {
  const auto* f = find(generator);
  if (f == nullptr) return Matrix::Zero(dim, dim);
  const auto grid = breakpoints(fault_fractions(*f));
  return f->segments[covering_segment(grid, fraction)].hamiltonian;
}

FaultModel make_fault_model(std::string name, std::vector<GeneratorFault> per_generator, const UnitaryRep& rep) {
  FaultModel model;
  model.name = std::move(name);
  const auto basis = algebra_basis(rep);
  model.in_algebra = true;
  for (const auto& f : per_generator) {
    check_fractions(fault_fractions(f), ErrorCode::IncompatibleFaultGrid, "incompatible fault grid");
    for (const auto& s : f.segments) {
      if (s.hamiltonian.rows() != rep.dimension || !is_hermitian(s.hamiltonian, 1e-12)) {
        throw Error(ErrorCode::ShapeError, "shape error: fault Hamiltonian must be Hermitian of the representation dimension");
      }
      model.in_algebra = model.in_algebra && in_span(basis, s.hamiltonian);
    }
  }
  model.per_generator = std::move(per_generator);
  return model;
}

FaultModel constant_fault(std::string name, const std::vector<Matrix>& per_generator, const UnitaryRep& rep) {
  std::vector<GeneratorFault> faults;
  for (std::size_t k = 0; k < per_generator.size(); ++k) faults.push_back({k, {{1.0, per_generator[k]}}});
  return make_fault_model(std::move(name), std::move(faults), rep);
}

std::vector<ControlSegment> ControlSchedule::timeline() const {
  if (kind != ScheduleKind::Eulerian) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: timeline is defined for Eulerian schedules");
  const Eigen::Index d = dimension();
  std::vector<ControlSegment> out;
  for (std::size_t l = 0; l < sequence.size(); ++l) {
    const auto& profile = profiles[sequence[l]];
    const auto pgrid = breakpoints(profile_fractions(profile));
    std::vector<double> grid = pgrid;
    const GeneratorFault* f = fault ? fault->find(sequence[l]) : nullptr;
    if (f != nullptr) grid = merge_grids(pgrid, breakpoints(fault_fractions(*f)));
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const double mid = 0.5 * (grid[k] + grid[k + 1]);
      ControlSegment seg;
      seg.start = (static_cast<double>(l) + grid[k]) * delta_t;
      seg.duration = (grid[k + 1] - grid[k]) * delta_t;
      seg.interval = l;
      seg.color = sequence[l];
      seg.control = profile.segments[covering_segment(pgrid, mid)].hamiltonian();
      seg.fault = fault ? fault->at(sequence[l], mid, d) : Matrix::Zero(d, d);
      out.push_back(std::move(seg));
    }
  }
  return out;
}

double ControlSchedule::max_control_norm() const {
  if (kind == ScheduleKind::BangBang) return std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (const auto& seg : timeline()) best = std::max(best, operator_norm(seg.control + seg.fault));
  return best;
}

ControlSchedule eulerian_schedule(const EulerPath& path, const std::vector<PulseProfile>& profiles, double delta_t) {
  if (!(delta_t > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  if (path.colors.empty()) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: empty path gives zero cycle time");

  const std::size_t colors = *std::max_element(path.colors.begin(), path.colors.end()) + 1;
  ControlSchedule schedule;
  schedule.kind = ScheduleKind::Eulerian;
  schedule.delta_t = delta_t;
  schedule.sequence = path.colors;
  schedule.cycle_time = static_cast<double>(path.length()) * delta_t;
  schedule.profiles.resize(colors);
  std::vector<bool> have(colors, false);
  for (const auto& p : profiles) {
    if (p.generator < colors) {
      schedule.profiles[p.generator] = p.rescaled(delta_t);
      have[p.generator] = true;
    }
  }
  for (std::size_t c = 0; c < colors; ++c) {
    if (!have[c]) throw Error(ErrorCode::IncompleteProfiles, "incomplete profile set: no profile for generator " + std::to_string(c + 1));
    if (schedule.profiles[c].realization_error > kRealizationTol) {
      throw Error(ErrorCode::ProfileMismatch, "profile does not implement generator " + std::to_string(c + 1));
    }
  }

  const Eigen::Index d = schedule.profiles[path.colors.front()].segments.front().axis.rows();
  std::vector<Matrix> kick(colors);
  for (std::size_t c = 0; c < colors; ++c) kick[c] = schedule.profiles[c].realized();
  schedule.frames.push_back(identity(d));
  for (auto c : path.colors) schedule.frames.push_back(kick[c] * schedule.frames.back());

  const double closure = phase_distance(schedule.frames.back(), identity(d));
  if (closure > 10.0 * kRealizationTol * static_cast<double>(path.length())) {
    std::ostringstream os;
    os << "invalid schedule: control propagator does not close (distance " << closure << ")";
    throw Error(ErrorCode::InvalidSchedule, os.str());
  }
  return schedule;
}

ControlSchedule bangbang_schedule(const RepresentedGroup& g, double delta_t) {
  if (!(delta_t > 0.0)) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: delta_t must be positive");
  validate_group(g.group);
  const std::size_t n = g.group.order();
  if (n < 2) throw Error(ErrorCode::InvalidSchedule, "invalid schedule: bang-bang decoupling needs |G| > 1");
  ControlSchedule schedule;
  schedule.kind = ScheduleKind::BangBang;
  schedule.delta_t = delta_t;
  schedule.cycle_time = static_cast<double>(n) * delta_t;
  for (std::size_t j = 0; j < n; ++j) {
    schedule.sequence.push_back(j);
    schedule.frames.push_back(g.rep[j]);
  }
  schedule.frames.push_back(g.rep[0]);
  for (std::size_t l = 1; l <= n; ++l) schedule.kicks.push_back(schedule.frames[l] * schedule.frames[l - 1].adjoint());
  return schedule;
}

ControlSchedule apply_fault(const ControlSchedule& schedule, const FaultModel& fault) {
  if (schedule.kind != ScheduleKind::Eulerian) {
    throw Error(ErrorCode::InvalidSchedule, "invalid schedule: faults are defined for Eulerian schedules only");
  }
  for (const auto& f : fault.per_generator) {
    if (f.generator >= schedule.profiles.size()) {
      throw Error(ErrorCode::IncompatibleFaultGrid, "incompatible fault grid: generator " + std::to_string(f.generator + 1) + " is not played");
    }
    const auto pgrid = breakpoints(profile_fractions(schedule.profiles[f.generator]));
    const auto fgrid = breakpoints(fault_fractions(f));
    if (!is_subset(pgrid, fgrid) && !is_subset(fgrid, pgrid)) throw Error(ErrorCode::IncompatibleFaultGrid, "incompatible fault grid");
    for (const auto& s : f.segments) {
      if (s.hamiltonian.rows() != schedule.dimension()) throw Error(ErrorCode::ShapeError, "shape error: fault dimension");
    }
  }
  ControlSchedule out = schedule;
  out.fault = fault;
  return out;
}

}  // namespace eulerdd
