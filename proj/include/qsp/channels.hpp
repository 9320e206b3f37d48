// Kraus-operator noise channels and the closed-form Bell-diagonal evolution
// under independent dephasing.
//
// Channel duration is baked into the Kraus set at construction; time stepping
// composes channels (semigroup property, asserted in tests for PD and GAD).
#pragma once

#include "qsp/qcore.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace qsp {

struct KrausChannel {
  int n_qubits = 0;
  std::vector<CMat> operators;
  std::string label;
  std::map<std::string, double> params;

  // Validates completeness: ||sum E_k^dag E_k - I||_max <= 1e-10.
  KrausChannel(int n, std::vector<CMat> ops, std::string lbl,
               std::map<std::string, double> p = {});
  int dim() const { return 1 << n_qubits; }
};

// Two-qubit Bell-diagonal state coefficients: rho = 1/4 (I + sum c_i s_i x s_i).
struct BDCoefficients {
  double c1 = 0, c2 = 0, c3 = 0;

  // Validates all four eigenvalues (1 +- c1 +- c2 +- c3)/4 >= -1e-12.
  BDCoefficients(double a, double b, double c);
  // The four eigenvalues, ordered (Psi+, Psi-, Phi+, Phi-).
  std::array<double, 4> eigenvalues() const;
};

DensityMatrix bd_state(const BDCoefficients& c);

KrausChannel identity_channel(int n_qubits);

// Single-qubit phase damping: off-diagonals scale by e^{-lambda t}.
// Internal mixing probability p = (1 + e^{-lambda t})/2 so the operators
// sqrt(p) I, sqrt(1-p) sigma_z realize exactly that superoperator.
KrausChannel phase_damping_1q(double lambda_rate, double t);

// Two-qubit independent phase damping, four operators with the
// [(1 +- e^{-gamma_i t})/2]^{1/2} scalar prefactors on {I, sigma_z} x {I, sigma_z}.
KrausChannel phase_damping_2q(double gamma1, double gamma2, double t);

// Generalized amplitude damping: populations relax toward (p, 1-p),
// coherences scale by e^{-gamma t/2}; a = 1 - e^{-gamma t}.
// Default p = 1/2 (high-temperature approximation).
KrausChannel generalized_amplitude_damping(double gamma, double t, double p = 0.5);

// Depolarizing: weights sqrt(1-p) on I and sqrt(p/3) on X, Y, Z with
// p = 1 - e^{-d t}; equivalent map (lambda/2) I + (1-lambda) rho, lambda = 4p/3.
// Requires lambda <= 1.
KrausChannel depolarizing(double d_rate, double t);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

// Tensor-product Kraus set (all cross terms), one 1-qubit channel per qubit.
KrausChannel compose_independent(const std::vector<KrausChannel>& per_qubit);

// c_i = Tr(rho sigma_i x sigma_i); exact for BD inputs, defined for any rho.
BDCoefficients bd_extract(const DensityMatrix& rho);

// c1, c2 scale by e^{-(gamma1+gamma2) t}; c3 unchanged.
BDCoefficients bd_evolve_closed_form(const BDCoefficients& c0, double gamma1,
                                     double gamma2, double t);

// Choi-style matrix sum_k vec(E_k) vec(E_k)^dag (column-major vec); equal
// superoperators give equal matrices, so this is the channel-equivalence metric.
CMat choi_matrix(const KrausChannel& ch);

}  // namespace qsp
