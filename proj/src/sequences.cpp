#include "qsp/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_unitary(const CMat& u, double tol) {
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

// Representative pi rotation for the operator table (phase 0, targets as given,
// smallest embedding dimension covering the targets).
CMat pi_pulse_representative(const std::vector<int>& targets) {
  int n = 1;
  for (int q : targets) n = std::max(n, q);
  return collective_rotation(kPi, 0.0, targets, n);
}

}  // namespace

PulseSchedule::PulseSchedule(double duration, std::vector<PulseEvent> evts,
                             std::map<std::string, CMat> table)
    : cycle_duration(duration), events(std::move(evts)), operator_table(std::move(table)) {
  if (duration <= 0) throw std::invalid_argument("PulseSchedule: nonpositive duration");
  for (size_t i = 0; i < events.size(); ++i) {
    const PulseEvent& e = events[i];
    if (e.time < -1e-15 || e.time > cycle_duration + 1e-15)
      throw std::invalid_argument("PulseSchedule: event time outside cycle");
    if (i > 0 && e.time < events[i - 1].time)
      throw std::invalid_argument("PulseSchedule: events not time-ordered");
    if (!operator_table.count(e.label))
      throw std::invalid_argument("PulseSchedule: unresolvable label " + e.label);
  }
  for (const auto& [label, op] : operator_table)
    if (!is_unitary(op, kConstructTol))
      throw std::invalid_argument("PulseSchedule: non-unitary operator " + label);
}

SubspaceSpec::SubspaceSpec(int n, std::vector<CVec> kets) : n_qubits(n), basis(std::move(kets)) {
  if (basis.empty()) throw std::invalid_argument("SubspaceSpec: empty basis");
  const Eigen::Index d = Eigen::Index{1} << n;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != d) throw std::invalid_argument("SubspaceSpec: ket dimension mismatch");
    for (size_t j = 0; j <= i; ++j) {
      const complexd ip = basis[j].dot(basis[i]);
      const complexd want = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - want) > kConstructTol)
        throw std::invalid_argument("SubspaceSpec: basis not orthonormal");
    }
  }
}

CMat SubspaceSpec::projector() const {
  const Eigen::Index d = basis.front().size();
  CMat p = CMat::Zero(d, d);
  for (const CVec& v : basis) p += v * v.adjoint();
  return p;
}

std::vector<double> udd_times(int n_pulses, double total_t) {
  if (n_pulses < 1) throw std::invalid_argument("udd_times: need at least one pulse");
  if (total_t <= 0) throw std::invalid_argument("udd_times: nonpositive duration");
  std::vector<double> times(n_pulses);
  for (int j = 1; j <= n_pulses; ++j) {
    const double s = std::sin(j * kPi / (2.0 * n_pulses + 2.0));
    times[j - 1] = total_t * s * s;
  }
  return times;
}

PulseSchedule cpmg_schedule(int n_pulses, double tau, double axis_phase,
                            std::vector<int> targets) {
  if (n_pulses < 1) throw std::invalid_argument("cpmg_schedule: need at least one pulse");
  if (tau <= 0) throw std::invalid_argument("cpmg_schedule: nonpositive tau");
  std::vector<PulseEvent> events;
  events.reserve(n_pulses);
  for (int k = 0; k < n_pulses; ++k)
    events.push_back({(2 * k + 1) * tau / 2.0, "pi", axis_phase, targets});
  return PulseSchedule(n_pulses * tau, std::move(events),
                       {{"pi", pi_pulse_representative(targets)}});
}

CMat build_J(const SubspaceSpec& subspace) {
  const CMat p = subspace.projector();
  return CMat::Identity(p.rows(), p.cols()) - 2.0 * p;
}

PulseSchedule super_zeno_schedule(const SubspaceSpec& subspace, double t) {
  if (t <= 0) throw std::invalid_argument("super_zeno_schedule: nonpositive duration");
  const double beta = (3.0 - std::sqrt(5.0)) / 8.0;
  const double x[5] = {beta, 0.25, 0.5 - 2 * beta, 0.25, beta};
  std::vector<PulseEvent> events;
  double at = 0;
  for (int i = 0; i < 4; ++i) {
    at += x[i] * t;
    events.push_back({at, "J", 0.0, {}});
  }
  return PulseSchedule(t, std::move(events), {{"J", build_J(subspace)}});
}

PulseSchedule super_zeno_recursive(const SubspaceSpec& subspace, int m, double t) {
  if (m < 0) throw std::invalid_argument("super_zeno_recursive: negative order");
  if (t <= 0) throw std::invalid_argument("super_zeno_recursive: nonpositive duration");
  // Build the symbol string: true = J kick, false = one base free interval.
  std::vector<bool> symbols = {false};  // U_0
  for (int level = 0; level < m; ++level) {
    std::vector<bool> next = symbols;
    if (level % 2 == 0) next.push_back(true);  // even m: U J U
    next.insert(next.end(), symbols.begin(), symbols.end());
    symbols = std::move(next);
  }
  const double base = t / std::pow(2.0, m);
  std::vector<PulseEvent> events;
  double at = 0;
  for (bool is_kick : symbols) {
    if (is_kick)
      events.push_back({at, "J", 0.0, {}});
    else
      at += base;
  }
  return PulseSchedule(t, std::move(events), {{"J", build_J(subspace)}});
}

const std::vector<int>& nudd_interval_multiples() {
  static const std::vector<int> multiples = {1, 2, 1, 2, 4, 2, 1, 2, 1, 2, 4, 2, 4, 8,
                                             4, 2, 4, 2, 1, 2, 1, 2, 4, 2, 1, 2, 1};
  return multiples;
}

PulseSchedule nudd_schedule(double t) {
  if (t <= 0) throw std::invalid_argument("nudd_schedule: nonpositive duration");
  static const char* kOrder[26] = {
      "X0", "X0", "X1", "X0", "X0", "X1", "X0", "X0", "Xphi",
      "X0", "X0", "X1", "X0", "X0", "X1", "X0", "X0", "Xphi",
      "X0", "X0", "X1", "X0", "X0", "X1", "X0", "X0"};
  const std::vector<int>& mult = nudd_interval_multiples();
  const double beta = 1.0 / 64.0;

  const CVec k01 = basis_ket("01"), k10 = basis_ket("10");
  const CMat id4 = CMat::Identity(4, 4);
  const CMat x0 = id4 - 2.0 * (k01 * k01.adjoint());
  const CMat x1 = id4 - 2.0 * (k10 * k10.adjoint());
  const CVec plus = (k01 + k10) / std::sqrt(2.0);
  const CMat xphi = id4 - 2.0 * (plus * plus.adjoint());

  std::vector<PulseEvent> events;
  double at = 0;
  for (int i = 0; i < 26; ++i) {
    at += mult[i] * beta * t;
    events.push_back({at, kOrder[i], 0.0, {1, 2}});
  }
  return PulseSchedule(t, std::move(events), {{"X0", x0}, {"X1", x1}, {"Xphi", xphi}});
}

NuddTimes nudd_times_nested(int n, double total_t) {
  if (n < 1) throw std::invalid_argument("nudd_times_nested: order must be >= 1");
  if (total_t <= 0) throw std::invalid_argument("nudd_times_nested: nonpositive duration");
  auto s2 = [n](int idx) {
    const double s = std::sin(idx * kPi / (2.0 * n + 2.0));
    return s * s;
  };
  NuddTimes out;
  out.outer = udd_times(n, total_t);

  // Interval edges T_0 = 0, ..., T_{N+1} = T.
  std::vector<double> edges(n + 2);
  edges[0] = 0;
  for (int j = 1; j <= n; ++j) edges[j] = out.outer[j - 1];
  edges[n + 1] = total_t;

  out.middle.resize(n + 1);
  out.inner.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    out.middle[j].resize(n);
    for (int k = 1; k <= n; ++k)
      out.middle[j][k - 1] = edges[j] + (edges[j + 1] - edges[j]) * s2(k);

    // Middle-layer edges within [T_j, T_{j+1}].
    std::vector<double> medges(n + 2);
    medges[0] = edges[j];
    for (int k = 1; k <= n; ++k) medges[k] = out.middle[j][k - 1];
    medges[n + 1] = edges[j + 1];

    out.inner[j].resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      out.inner[j][k].resize(n);
      for (int l = 1; l <= n; ++l)
        out.inner[j][k][l - 1] = medges[k] + (medges[k + 1] - medges[k]) * s2(l);
    }
  }
  return out;
}

PulseSchedule xy_schedule(XYVariant variant, double tau, std::vector<int> targets) {
  if (tau <= 0) throw std::invalid_argument("xy_schedule: nonpositive tau");
  const double x = 0.0, y = kPi / 2;
  std::vector<double> phases = {x, y, x, y};
  if (variant != XYVariant::XY4S) {
    // XY8(s): append the time-reversed copy.
    std::vector<double> rev(phases.rbegin(), phases.rend());
    phases.insert(phases.end(), rev.begin(), rev.end());
  }
  if (variant == XYVariant::XY16S) {
    // XY16(s): append the pi-phase-shifted copy.
    const size_t m = phases.size();
    for (size_t i = 0; i < m; ++i) phases.push_back(phases[i] + kPi);
  }
  std::vector<PulseEvent> events;
  for (size_t k = 0; k < phases.size(); ++k)
    events.push_back({(k + 0.5) * tau, "pi", phases[k], targets});
  return PulseSchedule(phases.size() * tau, std::move(events),
                       {{"pi", pi_pulse_representative(targets)}});
}

PulseSchedule kdd_schedule(double tau_k, std::vector<int> targets) {
  if (tau_k <= 0) throw std::invalid_argument("kdd_schedule: nonpositive tau");
  const double d30 = kPi / 6, d90 = kPi / 2;
  const std::vector<double> block = {d30, 0.0, d90, 0.0, d30};
  std::vector<double> phases;
  for (int rep = 0; rep < 2; ++rep) {     // [KDD_0 - KDD_{pi/2}] twice
    for (double p : block) phases.push_back(p);
    for (double p : block) phases.push_back(p + d90);
  }
  std::vector<PulseEvent> events;
  for (size_t k = 0; k < phases.size(); ++k)
    events.push_back({(k + 0.5) * tau_k, "pi", phases[k], targets});
  return PulseSchedule(phases.size() * tau_k, std::move(events),
                       {{"pi", pi_pulse_representative(targets)}});
}

SegmentEvolver evolver_from_hamiltonian(const Hamiltonian& h) {
  return [h](const DensityMatrix& rho, double dt) { return unitary_evolve(rho, h, dt); };
}

SegmentEvolver evolver_from_channel_factory(std::function<KrausChannel(double)> factory) {
  return [factory = std::move(factory)](const DensityMatrix& rho, double dt) {
    return apply_channel(factory(dt), rho);
  };
}

SegmentEvolver evolver_from_lindblad(const LindbladModel& model, double dt) {
  return [model, dt](const DensityMatrix& rho, double gap) {
    return lindblad_evolve(model, rho, gap, dt);
  };
}

SegmentEvolver evolver_from_hamiltonian_and_channel(
    const Hamiltonian& h, std::function<KrausChannel(double)> factory) {
  return [h, factory = std::move(factory)](const DensityMatrix& rho, double dt) {
    return apply_channel(factory(dt), unitary_evolve(rho, h, dt));
  };
}

std::vector<DensityMatrix> simulate_protected(const PulseSchedule& schedule,
                                              const DensityMatrix& rho0,
                                              const SegmentEvolver& evolve,
                                              int n_cycles, double flip_angle_error) {
  if (n_cycles < 1) throw std::invalid_argument("simulate_protected: n_cycles must be >= 1");
  const int n = rho0.n_qubits;

  // Resolve each event to a concrete unitary in the state's dimension.
  std::vector<CMat> pulse_ops;
  pulse_ops.reserve(schedule.events.size());
  for (const PulseEvent& e : schedule.events) {
    if (e.label == "pi") {
      pulse_ops.push_back(
          collective_rotation(kPi * (1.0 + flip_angle_error), e.phase, e.targets, n));
    } else {
      const CMat& op = schedule.operator_table.at(e.label);
      if (op.rows() != rho0.dim())
        throw std::invalid_argument("simulate_protected: operator dimension mismatch");
      pulse_ops.push_back(op);
    }
  }

  std::vector<DensityMatrix> out;
  out.reserve(n_cycles);
  DensityMatrix rho = rho0;
  for (int cycle = 0; cycle < n_cycles; ++cycle) {
    double at = 0;
    for (size_t i = 0; i < schedule.events.size(); ++i) {
      const double gap = schedule.events[i].time - at;
      if (gap > 1e-15) rho = evolve(rho, gap);
      const CMat& u = pulse_ops[i];
      CMat m = u * rho.mat * u.adjoint();
      m = 0.5 * (m + m.adjoint().eval());
      rho = DensityMatrix(n, std::move(m));
      at = schedule.events[i].time;
    }
    const double tail = schedule.cycle_duration - at;
    if (tail > 1e-15) rho = evolve(rho, tail);
    out.push_back(rho);
  }
  return out;
}

double leakage_fraction(const DensityMatrix& rho, const SubspaceSpec& subspace_q) {
  if (subspace_q.n_qubits != rho.n_qubits)
    throw std::invalid_argument("leakage_fraction: dimension mismatch");
  return (subspace_q.projector() * rho.mat).trace().real();
}

std::string serialize_schedule(const PulseSchedule& schedule) {
  std::ostringstream os;
  os.precision(12);
  os << "# cycle_duration_s\t" << schedule.cycle_duration << "\n";
  for (const PulseEvent& e : schedule.events) {
    os << e.time << "\t" << e.label << "\t" << e.phase << "\t";
    for (size_t i = 0; i < e.targets.size(); ++i) {
      if (i) os << ",";
      os << e.targets[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qsp
