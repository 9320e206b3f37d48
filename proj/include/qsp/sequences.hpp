// Dynamical-decoupling pulse schedules (CPMG, UDD, super-Zeno, NUDD, XY family,
// KDD) and simulation of protected evolution: instantaneous pulses interleaved
// with noisy free evolution.
#pragma once

#include "qsp/channels.hpp"
#include "qsp/dynamics.hpp"
#include "qsp/qcore.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qsp {

struct PulseEvent {
  double time = 0;  // seconds, offset within one cycle
  std::string label;
  double phase = 0;  // radians (meaningful for "pi" rotation pulses)
  std::vector<int> targets;
};

struct PulseSchedule {
  double cycle_duration = 0;
  std::vector<PulseEvent> events;  // sorted nondecreasing by time
  // label -> unitary. "pi" rotation pulses are built per-event from phase and
  // targets at simulation time; the table entry is the phase-0 representative.
  std::map<std::string, CMat> operator_table;

  // Validates ordering, label resolvability, and unitarity (1e-12).
  PulseSchedule(double duration, std::vector<PulseEvent> evts,
                std::map<std::string, CMat> table);
};

struct SubspaceSpec {
  int n_qubits = 0;
  std::vector<CVec> basis;  // orthonormal kets spanning the protected subspace P

  SubspaceSpec(int n, std::vector<CVec> kets);  // validates orthonormality (1e-12)
  CMat projector() const;                       // P
};

// T_j = T sin^2(j pi / (2N+2)), j = 1..N.
std::vector<double> udd_times(int n_pulses, double total_t);

// pi pulses at (2k+1) tau/2, k = 0..n-1; cycle duration n tau.
PulseSchedule cpmg_schedule(int n_pulses, double tau, double axis_phase,
                            std::vector<int> targets = {1});

// J = Q - P = I - 2P: the super-Zeno unitary kick.
CMat build_J(const SubspaceSpec& subspace);

// Four J kicks with intervals {beta, 1/4, 1/2 - 2 beta, 1/4, beta} t,
// beta = (3 - sqrt 5)/8.
PulseSchedule super_zeno_schedule(const SubspaceSpec& subspace, double t);

// Order-raising recursion U_{m+1}(t) = U_m(t/2) J U_m(t/2) (m even) or
// U_m(t/2) U_m(t/2) (m odd); used in tests of the order property.
PulseSchedule super_zeno_recursive(const SubspaceSpec& subspace, int m, double t);

// The 27-interval nested-UDD sequence protecting the subspace {|01>, |10>}:
// 26 pulses (18 X0, 6 X1, 2 Xphi), interval coefficients integer multiples of
// beta = 1/64 summing to exactly 1.
PulseSchedule nudd_schedule(double t);

// Exact interval coefficients as integer multiples of beta = 1/64.
const std::vector<int>& nudd_interval_multiples();

struct NuddTimes {
  std::vector<double> outer;                            // T_j
  std::vector<std::vector<double>> middle;              // T_{j,k}, j = 0..N
  std::vector<std::vector<std::vector<double>>> inner;  // T_{j,k,l}
};

// Nested-sine timing recursions for NUDD of order n.
NuddTimes nudd_times_nested(int n, double total_t);

enum class XYVariant { XY4S, XY8S, XY16S };

// Time-symmetric XY sequences; pulses centered in equal slots of length tau.
// XY8(s) = XY4(s) + time-reversed copy; XY16(s) = XY8(s) + pi-phase-shifted copy.
PulseSchedule xy_schedule(XYVariant variant, double tau, std::vector<int> targets = {1});

// [KDD_0 - KDD_{pi/2}]^2: 20 pi pulses; composite block phases
// {30, 0, 90, 0, 30} degrees, second block shifted by 90 degrees.
PulseSchedule kdd_schedule(double tau_k, std::vector<int> targets = {1});

// Evolves a state across one inter-pulse gap of the given duration.
using SegmentEvolver = std::function<DensityMatrix(const DensityMatrix&, double)>;

SegmentEvolver evolver_from_hamiltonian(const Hamiltonian& h);
SegmentEvolver evolver_from_channel_factory(std::function<KrausChannel(double)> factory);
SegmentEvolver evolver_from_lindblad(const LindbladModel& model, double dt = kDefaultDt);
// Coherent evolution under h composed with the channel for each gap.
SegmentEvolver evolver_from_hamiltonian_and_channel(
    const Hamiltonian& h, std::function<KrausChannel(double)> factory);

// Alternates noisy free evolution over each inter-pulse gap with pulse
// unitaries; returns the state after each full cycle.  flip_angle_error eps
// turns each "pi" pulse into a rotation by pi (1 + eps); table-resolved
// operators (J, X0, X1, Xphi, ...) are applied exactly.
std::vector<DensityMatrix> simulate_protected(const PulseSchedule& schedule,
                                              const DensityMatrix& rho0,
                                              const SegmentEvolver& evolve,
                                              int n_cycles,
                                              double flip_angle_error = 0.0);

// delta = Tr(P_Q rho): population found in the orthogonal subspace Q.
double leakage_fraction(const DensityMatrix& rho, const SubspaceSpec& subspace_q);

// Plain-text schedule format: header with cycle_duration, then one event per
// line `time_s<TAB>label<TAB>phase_rad<TAB>targets`.
std::string serialize_schedule(const PulseSchedule& schedule);

}  // namespace qsp
