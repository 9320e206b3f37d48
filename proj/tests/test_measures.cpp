#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsp/channels.hpp"
#include "qsp/measures.hpp"
#include "qsp/qcore.hpp"

#include <cmath>

using namespace qsp;

TEST_CASE("von neumann entropy") {
  const DensityMatrix mixed(1, CMat::Identity(2, 2) / 2.0);
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(1.0));
  const DensityMatrix pure0 = DensityMatrix::pure(PureState(1, basis_ket("0")));
  CHECK(von_neumann_entropy(pure0) == doctest::Approx(0.0));
  // Binary-entropy check on diag(0.84, 0.16).
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 0.84;
  d(1, 1) = 0.16;
  const double h = -0.84 * std::log2(0.84) - 0.16 * std::log2(0.16);
  CHECK(von_neumann_entropy(DensityMatrix(1, d)) == doctest::Approx(h));
  // Indefinite input is rejected.
  CMat indef = CMat::Zero(2, 2);
  indef(0, 0) = 1.2;
  indef(1, 1) = -0.2;
  CHECK_THROWS(von_neumann_entropy(DensityMatrix(1, indef)));
}

TEST_CASE("mutual information") {
  const DensityMatrix bell = DensityMatrix::pure(standard_state("BELL_PHI_PLUS"));
  CHECK(mutual_information(bell) == doctest::Approx(2.0));
  const DensityMatrix prod = DensityMatrix::pure(PureState(2, basis_ket("01")));
  CHECK(mutual_information(prod) == doctest::Approx(0.0));
  const DensityMatrix mixed(2, CMat::Identity(4, 4) / 4.0);
  CHECK(mutual_information(mixed) == doctest::Approx(0.0));
}

TEST_CASE("bell-diagonal correlation split") {
  const CorrelationTriple c = bd_correlations(BDCoefficients(1.0, 0.68, -0.68));
  // Eigenvalues (0.84, 0, 0.16, 0): total = 2 - H(0.16).
  const double h = -0.84 * std::log2(0.84) - 0.16 * std::log2(0.16);
  CHECK(c.total == doctest::Approx(2.0 - h).epsilon(1e-12));
  CHECK(c.classical == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.discord == doctest::Approx(c.total - c.classical).epsilon(1e-12));
  CHECK(c.discord == doctest::Approx(0.3657).epsilon(1e-3));

  // Separable diagonal example: chi = c3, zero discord.
  const CorrelationTriple s = bd_correlations(BDCoefficients(0.0, 0.0, 0.5));
  CHECK(s.discord == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.total == doctest::Approx(s.classical).epsilon(1e-12));

  // Consistency with the generic entropic definitions.
  const BDCoefficients mixed_c(0.3, 0.2, -0.1);
  const CorrelationTriple m = bd_correlations(mixed_c);
  CHECK(m.total == doctest::Approx(mutual_information(bd_state(mixed_c))).epsilon(1e-10));
  CHECK(m.discord >= -1e-12);
  CHECK(m.classical >= -1e-12);
}

TEST_CASE("discord transition time") {
  const BDCoefficients c0(1.0, 0.68, -0.68);
  const double t_bar = discord_transition_time(c0, 7.21);
  CHECK(t_bar == doctest::Approx(std::log(1.0 / 0.68) / 7.21).epsilon(1e-12));
  CHECK(t_bar == doctest::Approx(0.0535).epsilon(0.01));
  // |c1| already below |c3|: no transition.
  CHECK(discord_transition_time(BDCoefficients(0.3, 0.2, -0.5), 7.21) == 0.0);

  // The crossing is where the evolved |c1(t)| meets the static |c3|.
  const BDCoefficients at_tbar = bd_evolve_closed_form(c0, 3.605, 3.605, t_bar);
  CHECK(std::abs(at_tbar.c1) == doctest::Approx(std::abs(at_tbar.c3)).epsilon(1e-10));
}

TEST_CASE("entanglement eta") {
  const DensityMatrix singlet = DensityMatrix::pure(standard_state("SINGLET"));
  CHECK(entanglement_eta(singlet) == doctest::Approx(0.5));
  const DensityMatrix prod = DensityMatrix::pure(PureState(2, basis_ket("10")));
  CHECK(entanglement_eta(prod) == doctest::Approx(0.0));
  // Werner state boundary: separable at p = 1/3.
  const DensityMatrix bell = DensityMatrix::pure(standard_state("BELL_PHI_PLUS"));
  auto werner = [&](double p) {
    return DensityMatrix(2, p * bell.mat + (1 - p) * CMat::Identity(4, 4) / 4.0);
  };
  CHECK(entanglement_eta(werner(1.0 / 3.0)) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(entanglement_eta(werner(0.5)) > 0.0);
  CHECK(entanglement_eta(werner(0.2)) == doctest::Approx(0.0));
}

TEST_CASE("tripartite negativity reference values") {
  const DensityMatrix ghz = DensityMatrix::pure(standard_state("GHZ_MINUS"));
  const DensityMatrix w = DensityMatrix::pure(standard_state("W"));
  const DensityMatrix wwbar = DensityMatrix::pure(standard_state("WWBAR"));
  CHECK(tripartite_negativity(ghz) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tripartite_negativity(w) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));
  const double n_wwbar = tripartite_negativity(wwbar);
  CHECK(n_wwbar == doctest::Approx(0.74).epsilon(0.01));
  // Parts: GHZ is symmetric, all three N_i equal 1.
  const auto parts = tripartite_negativity_parts(ghz);
  for (double p : parts) CHECK(p == doctest::Approx(1.0).epsilon(1e-10));
  // Fully separable 3-qubit state has zero negativity.
  const DensityMatrix prod = DensityMatrix::pure(PureState(3, basis_ket("010")));
  CHECK(tripartite_negativity(prod) == doctest::Approx(0.0));
}
