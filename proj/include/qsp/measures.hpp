// Entanglement and correlation quantifiers: entropy, mutual information,
// Bell-diagonal classical correlations and discord, discord transition time,
// the entanglement parameter eta, and tripartite negativity.
//
// All entropies are in bits (log base 2).
#pragma once

#include "qsp/channels.hpp"
#include "qsp/qcore.hpp"

#include <array>

namespace qsp {

struct CorrelationTriple {
  double total = 0;      // bits
  double classical = 0;  // bits
  double discord = 0;    // total - classical
};

// -sum lambda log2 lambda; eigenvalues clipped at 0, values below -1e-10 error.
double von_neumann_entropy(const DensityMatrix& rho);

// S(rho_A) + S(rho_B) - S(rho_AB) for a 2-qubit state.
double mutual_information(const DensityMatrix& rho);

// Closed forms for BD states: total = 2 + sum lambda_l log2 lambda_l;
// classical from the chi = max |c_i| binary-entropy form; discord = difference.
CorrelationTriple bd_correlations(const BDCoefficients& c);

// t_bar = ln|c1(0)/c3(0)| / gamma_sum: crossing time of |c1(t)| with |c3| under
// the dephasing closed form.  Returns 0 when |c1| <= |c3| (no transition).
double discord_transition_time(const BDCoefficients& c0, double gamma_sum);

// eta = max(0, -lambda_min(rho^PT)) for a 2-qubit state.
double entanglement_eta(const DensityMatrix& rho);

// N_i = max(0, -2 lambda_min(rho^{T_i})); returns the geometric mean over the
// three single-qubit partial transposes.  (The factor 2 reproduces the
// reference values 1.00 / 0.94 / 0.74 for GHZ / W / WWbar.)
double tripartite_negativity(const DensityMatrix& rho);
// The individual N_i values.
std::array<double, 3> tripartite_negativity_parts(const DensityMatrix& rho);

}  // namespace qsp
