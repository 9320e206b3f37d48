#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsp/channels.hpp"
#include "qsp/qcore.hpp"
#include "qsp/sequences.hpp"

#include <cmath>
#include <string>

using namespace qsp;

namespace {
double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

SubspaceSpec plus_subspace() {
  return SubspaceSpec(1, {(basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)});
}
}  // namespace

TEST_CASE("udd pulse times") {
  // N = 1 reduces to a single centered pulse (Hahn echo).
  const auto t1 = udd_times(1, 2.0);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0] == doctest::Approx(1.0));
  // N = 2: T sin^2(pi/6) = T/4, T sin^2(pi/3) = 3T/4.
  const auto t2 = udd_times(2, 1.0);
  CHECK(t2[0] == doctest::Approx(0.25));
  CHECK(t2[1] == doctest::Approx(0.75));
  // Monotone, inside (0, T).
  const auto t5 = udd_times(5, 0.7);
  for (size_t i = 0; i < t5.size(); ++i) {
    CHECK(t5[i] > 0);
    CHECK(t5[i] < 0.7);
    if (i) CHECK(t5[i] > t5[i - 1]);
  }
  CHECK_THROWS(udd_times(0, 1.0));
}

TEST_CASE("cpmg schedule") {
  const PulseSchedule s = cpmg_schedule(4, 0.01, 0.0);
  CHECK(s.cycle_duration == doctest::Approx(0.04));
  REQUIRE(s.events.size() == 4);
  CHECK(s.events[0].time == doctest::Approx(0.005));
  CHECK(s.events[3].time == doctest::Approx(0.035));
  for (const auto& e : s.events) CHECK(e.label == "pi");
}

TEST_CASE("cpmg refocuses a static detuning") {
  // H = delta Z / 2: free evolution dephases |+>, CPMG restores it each cycle.
  const double delta = 80.0, tau = 1e-3;
  const Hamiltonian h(1, 0.5 * delta * pauli_z());
  const DensityMatrix plus = DensityMatrix::pure(
      PureState(1, (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)));
  const PulseSchedule s = cpmg_schedule(2, tau, 0.0);
  const auto states = simulate_protected(s, plus, evolver_from_hamiltonian(h), 3);
  for (const auto& rho : states)
    CHECK(std::real((plus.mat * rho.mat).trace()) == doctest::Approx(1.0));
  // Without pulses the same duration dephases measurably.
  const DensityMatrix free_rho = unitary_evolve(plus, h, 3 * s.cycle_duration);
  CHECK(std::real((plus.mat * free_rho.mat).trace()) < 0.999);
}

TEST_CASE("imperfect pi pulses degrade the echo") {
  // y-phase pulses: |+> is not on the rotation axis, so a flip-angle error
  // actually moves the state (x-phase pulses would mask the error).
  const double delta = 80.0, tau = 1e-3;
  const Hamiltonian h(1, 0.5 * delta * pauli_z());
  const DensityMatrix plus = DensityMatrix::pure(
      PureState(1, (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)));
  const PulseSchedule s = cpmg_schedule(2, tau, M_PI / 2);
  const auto exact = simulate_protected(s, plus, evolver_from_hamiltonian(h), 20, 0.0);
  const auto flawed = simulate_protected(s, plus, evolver_from_hamiltonian(h), 20, 0.2);
  const double f_exact = std::real((plus.mat * exact.back().mat).trace());
  const double f_flawed = std::real((plus.mat * flawed.back().mat).trace());
  CHECK(f_exact == doctest::Approx(1.0));
  CHECK(f_flawed < f_exact - 1e-4);
}

TEST_CASE("super-zeno kick and intervals") {
  const SubspaceSpec sub = plus_subspace();
  const CMat j = build_J(sub);
  CHECK(max_abs(j * j - CMat::Identity(2, 2)) < 1e-14);  // involution
  CHECK(max_abs(j - (j.adjoint().eval())) < 1e-14);

  const double t = 0.4;
  const PulseSchedule s = super_zeno_schedule(sub, t);
  REQUIRE(s.events.size() == 4);
  const double beta = (3.0 - std::sqrt(5.0)) / 8.0;
  CHECK(s.events[0].time == doctest::Approx(beta * t));
  CHECK(s.events[1].time == doctest::Approx((beta + 0.25) * t));
  CHECK(s.events[2].time == doctest::Approx((0.75 - beta) * t));
  CHECK(s.events[3].time == doctest::Approx((1 - beta) * t));
}

TEST_CASE("super-zeno recursion structure") {
  const SubspaceSpec sub = plus_subspace();
  // U_1 = U_0(t/2) J U_0(t/2): one kick at t/2.
  const PulseSchedule u1 = super_zeno_recursive(sub, 1, 1.0);
  REQUIRE(u1.events.size() == 1);
  CHECK(u1.events[0].time == doctest::Approx(0.5));
  // U_2 = U_1(t/2) U_1(t/2): kicks at t/4 and 3t/4.
  const PulseSchedule u2 = super_zeno_recursive(sub, 2, 1.0);
  REQUIRE(u2.events.size() == 2);
  CHECK(u2.events[0].time == doctest::Approx(0.25));
  CHECK(u2.events[1].time == doctest::Approx(0.75));
  // U_3 = U_2(t/2) J U_2(t/2): five kicks.
  const PulseSchedule u3 = super_zeno_recursive(sub, 3, 1.0);
  CHECK(u3.events.size() == 5);
}

TEST_CASE("nudd intervals and pulse counts") {
  const auto& mult = nudd_interval_multiples();
  REQUIRE(mult.size() == 27);
  int sum = 0;
  for (int m : mult) sum += m;
  CHECK(sum == 64);  // exact unit total with beta = 1/64

  const PulseSchedule s = nudd_schedule(1.0);
  REQUIRE(s.events.size() == 26);
  int n_x0 = 0, n_x1 = 0, n_xphi = 0;
  for (const auto& e : s.events) {
    if (e.label == "X0") ++n_x0;
    else if (e.label == "X1") ++n_x1;
    else if (e.label == "Xphi") ++n_xphi;
  }
  CHECK(n_x0 == 18);
  CHECK(n_x1 == 6);
  CHECK(n_xphi == 2);
  // Last pulse one beta before the cycle end.
  CHECK(s.events.back().time == doctest::Approx(63.0 / 64.0));
  // All three operators are Hermitian involutions.
  for (const char* lbl : {"X0", "X1", "Xphi"}) {
    const CMat& op = s.operator_table.at(lbl);
    CHECK(max_abs(op * op - CMat::Identity(4, 4)) < 1e-14);
  }
  // Xphi flips |01> <-> |10>.
  CHECK(max_abs(s.operator_table.at("Xphi") * basis_ket("01") + basis_ket("10")) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("nested nudd times interleave correctly") {
  const NuddTimes nt = nudd_times_nested(3, 1.0);
  CHECK(nt.outer.size() == 3);
  REQUIRE(nt.middle.size() == 4);
  REQUIRE(nt.inner.size() == 4);
  // Middle times of segment j live strictly inside (T_j, T_{j+1}).
  std::vector<double> edges = {0.0, nt.outer[0], nt.outer[1], nt.outer[2], 1.0};
  for (int j = 0; j <= 3; ++j)
    for (double tm : nt.middle[j]) {
      CHECK(tm > edges[j]);
      CHECK(tm < edges[j + 1]);
    }
  // Inner times nest one level further.
  for (int j = 0; j <= 3; ++j)
    for (int k = 0; k <= 3; ++k)
      for (double ti : nt.inner[j][k]) {
        CHECK(ti > edges[j]);
        CHECK(ti < edges[j + 1]);
      }
}

TEST_CASE("xy and kdd schedules") {
  const double tau = 2e-3;
  const PulseSchedule xy4 = xy_schedule(XYVariant::XY4S, tau);
  REQUIRE(xy4.events.size() == 4);
  CHECK(xy4.cycle_duration == doctest::Approx(4 * tau));
  CHECK(xy4.events[0].phase == doctest::Approx(0.0));
  CHECK(xy4.events[1].phase == doctest::Approx(M_PI / 2));
  CHECK(xy4.events[0].time == doctest::Approx(0.5 * tau));  // centered slots

  const PulseSchedule xy8 = xy_schedule(XYVariant::XY8S, tau);
  REQUIRE(xy8.events.size() == 8);
  // Time-symmetric: phase sequence is a palindrome.
  for (int i = 0; i < 4; ++i)
    CHECK(xy8.events[i].phase == doctest::Approx(xy8.events[7 - i].phase));

  const PulseSchedule xy16 = xy_schedule(XYVariant::XY16S, tau);
  REQUIRE(xy16.events.size() == 16);
  for (int i = 0; i < 8; ++i)
    CHECK(xy16.events[8 + i].phase == doctest::Approx(xy16.events[i].phase + M_PI));

  const PulseSchedule kdd = kdd_schedule(tau);
  REQUIRE(kdd.events.size() == 20);
  CHECK(kdd.events[0].phase == doctest::Approx(M_PI / 6));   // 30 degrees
  CHECK(kdd.events[2].phase == doctest::Approx(M_PI / 2));
  CHECK(kdd.events[5].phase == doctest::Approx(M_PI / 6 + M_PI / 2));
}

TEST_CASE("xy4 refocuses both x and z static fields") {
  const Hamiltonian h(1, 30.0 * pauli_z() + 20.0 * pauli_x());
  const DensityMatrix zero = DensityMatrix::pure(PureState(1, basis_ket("0")));
  // Small tau: decoupling should nearly freeze the state.
  const PulseSchedule s = xy_schedule(XYVariant::XY4S, 2e-4);
  const auto states = simulate_protected(s, zero, evolver_from_hamiltonian(h), 50);
  const double f_dd = std::real(states.back().mat(0, 0));
  const DensityMatrix free_rho = unitary_evolve(zero, h, 50 * s.cycle_duration);
  const double f_free = std::real(free_rho.mat(0, 0));
  CHECK(f_dd > 0.999);
  CHECK(f_free < 0.9);
}

TEST_CASE("protected evolution with a channel evolver") {
  // Dephasing channel gaps: CPMG cannot refocus Markovian noise; coherence
  // still decays at the free rate.
  const double gamma = 5.0;
  const DensityMatrix plus = DensityMatrix::pure(
      PureState(1, (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)));
  const PulseSchedule s = cpmg_schedule(2, 0.01, 0.0);
  auto factory = [gamma](double dt) { return phase_damping_1q(gamma, dt); };
  const auto states =
      simulate_protected(s, plus, evolver_from_channel_factory(factory), 5);
  const double t_total = 5 * s.cycle_duration;
  CHECK(std::abs(states.back().mat(0, 1)) ==
        doctest::Approx(0.5 * std::exp(-gamma * t_total)).epsilon(1e-9));
}

TEST_CASE("leakage fraction") {
  const SubspaceSpec q(1, {(basis_ket("0") - basis_ket("1")) / std::sqrt(2.0)});
  const DensityMatrix plus = DensityMatrix::pure(
      PureState(1, (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)));
  CHECK(leakage_fraction(plus, q) == doctest::Approx(0.0).epsilon(1e-12));
  const DensityMatrix zero = DensityMatrix::pure(PureState(1, basis_ket("0")));
  CHECK(leakage_fraction(zero, q) == doctest::Approx(0.5));
}

TEST_CASE("schedule serialization") {
  const PulseSchedule s = cpmg_schedule(2, 0.01, 0.0, {1, 2});
  const std::string text = serialize_schedule(s);
  CHECK(text.find("# cycle_duration_s\t0.02") == 0);
  CHECK(text.find("0.005\tpi\t0\t1,2") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("schedule validation") {
  CHECK_THROWS(PulseSchedule(1.0, {{0.5, "missing", 0.0, {}}}, {}));
  CHECK_THROWS(PulseSchedule(1.0, {{0.7, "J", 0.0, {}}, {0.3, "J", 0.0, {}}},
                             {{"J", CMat::Identity(2, 2)}}));
  CHECK_THROWS(PulseSchedule(1.0, {{0.5, "J", 0.0, {}}},
                             {{"J", 0.5 * CMat::Identity(2, 2)}}));
}
