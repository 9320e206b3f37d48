#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsp/channels.hpp"
#include "qsp/qcore.hpp"

#include <cmath>

using namespace qsp;

namespace {
double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix plus_state() {
  return DensityMatrix::pure(
      PureState(1, (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0)));
}
}  // namespace

TEST_CASE("kraus completeness is enforced") {
  CHECK_NOTHROW(KrausChannel(1, {pauli_x()}, "x"));
  CHECK_THROWS(KrausChannel(1, {0.9 * pauli_x()}, "bad"));
}

TEST_CASE("bd coefficients and state") {
  const BDCoefficients c(1.0, 0.68, -0.68);
  const auto lam = c.eigenvalues();
  // (Psi+, Psi-, Phi+, Phi-) = ((1+c1+c2-c3)/4, (1-c1-c2-c3)/4,
  //                             (1+c1-c2+c3)/4, (1-c1+c2+c3)/4).
  CHECK(lam[0] == doctest::Approx((1 + 1.0 + 0.68 + 0.68) / 4));
  CHECK(lam[1] == doctest::Approx((1 - 1.0 - 0.68 + 0.68) / 4));
  CHECK(lam[2] == doctest::Approx((1 + 1.0 - 0.68 - 0.68) / 4));
  CHECK(lam[3] == doctest::Approx((1 - 1.0 + 0.68 - 0.68) / 4));
  CHECK(lam[0] + lam[1] + lam[2] + lam[3] == doctest::Approx(1.0));
  CHECK_THROWS(BDCoefficients(1.0, 1.0, 1.0));  // not a state

  const DensityMatrix rho = bd_state(c);
  CHECK(rho.min_eigenvalue() >= -1e-12);
  const BDCoefficients back = bd_extract(rho);
  CHECK(back.c1 == doctest::Approx(c.c1));
  CHECK(back.c2 == doctest::Approx(c.c2));
  CHECK(back.c3 == doctest::Approx(c.c3));
}

TEST_CASE("single-qubit phase damping") {
  const double lambda = 1.3, t = 0.21;
  const KrausChannel pd = phase_damping_1q(lambda, t);
  const DensityMatrix out = apply_channel(pd, plus_state());
  CHECK(std::real(out.mat(0, 1)) == doctest::Approx(0.5 * std::exp(-lambda * t)));
  CHECK(std::real(out.mat(0, 0)) == doctest::Approx(0.5));

  // Semigroup: PD(t1) then PD(t2) equals PD(t1 + t2).
  const DensityMatrix two_step =
      apply_channel(phase_damping_1q(lambda, 0.13), apply_channel(pd, plus_state()));
  const DensityMatrix one_step =
      apply_channel(phase_damping_1q(lambda, t + 0.13), plus_state());
  CHECK(max_abs(two_step.mat - one_step.mat) < 1e-14);
}

TEST_CASE("two-qubit phase damping equals independent tensor construction") {
  const double g1 = 3.605, g2 = 2.31, t = 0.07;
  const KrausChannel pd2 = phase_damping_2q(g1, g2, t);
  CHECK(pd2.operators.size() == 4);
  const KrausChannel tensor =
      compose_independent({phase_damping_1q(g1, t), phase_damping_1q(g2, t)});
  CHECK(max_abs(choi_matrix(pd2) - choi_matrix(tensor)) < 1e-12);
}

TEST_CASE("generalized amplitude damping") {
  const double gamma = 2.0, t = 0.4;
  const KrausChannel gad = generalized_amplitude_damping(gamma, t);
  // Coherences scale by e^{-gamma t / 2}.
  const DensityMatrix out = apply_channel(gad, plus_state());
  CHECK(std::real(out.mat(0, 1)) == doctest::Approx(0.5 * std::exp(-gamma * t / 2)));
  // Populations relax toward (p, 1-p) = (1/2, 1/2).
  const DensityMatrix excited =
      apply_channel(gad, DensityMatrix::pure(PureState(1, basis_ket("1"))));
  const double a = 1 - std::exp(-gamma * t);
  CHECK(std::real(excited.mat(0, 0)) == doctest::Approx(0.5 * a));
  // Long-time fixed point at p = 0.3: diag(0.3, 0.7).
  const DensityMatrix fp =
      apply_channel(generalized_amplitude_damping(gamma, 100.0, 0.3), plus_state());
  CHECK(std::real(fp.mat(0, 0)) == doctest::Approx(0.3));
  CHECK(std::real(fp.mat(1, 1)) == doctest::Approx(0.7));
}

TEST_CASE("depolarizing channel") {
  const double d = 0.9, t = 0.5;
  const double p = 1 - std::exp(-d * t);
  const double lambda = 4 * p / 3;
  const KrausChannel dep = depolarizing(d, t);
  const DensityMatrix rho0 = plus_state();
  const DensityMatrix out = apply_channel(dep, rho0);
  const CMat expected =
      lambda * 0.5 * CMat::Identity(2, 2) + (1 - lambda) * rho0.mat;
  CHECK(max_abs(out.mat - expected) < 1e-14);
  // p > 3/4 would need lambda > 1: rejected.
  CHECK_THROWS(depolarizing(100.0, 1.0));
}

TEST_CASE("closed-form BD dephasing matches the Kraus channel") {
  const BDCoefficients c0(1.0, 0.68, -0.68);
  const double g1 = 3.605, g2 = 3.605;
  for (double t : {0.0, 0.01, 0.0535, 0.2}) {
    const BDCoefficients ct = bd_evolve_closed_form(c0, g1, g2, t);
    CHECK(ct.c1 == doctest::Approx(1.0 * std::exp(-(g1 + g2) * t)));
    CHECK(ct.c2 == doctest::Approx(0.68 * std::exp(-(g1 + g2) * t)));
    CHECK(ct.c3 == doctest::Approx(-0.68));
    const DensityMatrix via_kraus =
        apply_channel(phase_damping_2q(g1, g2, t), bd_state(c0));
    CHECK(max_abs(via_kraus.mat - bd_state(ct).mat) < 1e-12);
  }
}

TEST_CASE("choi matrix distinguishes channels and ignores Kraus gauge") {
  const KrausChannel a = phase_damping_1q(1.0, 0.3);
  const KrausChannel b = phase_damping_1q(1.0, 0.31);
  CHECK(max_abs(choi_matrix(a) - choi_matrix(b)) > 1e-4);
  // Identity channel written with a phase on its single operator.
  const KrausChannel id = identity_channel(1);
  const KrausChannel id_phase(1, {complexd(0, 1) * CMat::Identity(2, 2)}, "id_i");
  CHECK(max_abs(choi_matrix(id) - choi_matrix(id_phase)) < 1e-14);
}
