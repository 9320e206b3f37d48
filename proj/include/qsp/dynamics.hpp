// Lindblad master-equation integration (fixed-step RK4) and exact closed-form
// decay of 3-qubit states under the NMR noise model, plus exponential fitting.
#pragma once

#include "qsp/qcore.hpp"

#include <utility>
#include <vector>

namespace qsp {

struct LindbladModel {
  Hamiltonian h;
  // (operator A, rate kappa); combined as L = sqrt(kappa) A.
  std::vector<std::pair<CMat, double>> lindblad_ops;

  LindbladModel(Hamiltonian ham, std::vector<std::pair<CMat, double>> ops);
};

struct RelaxationParams {
  std::vector<double> t1;  // seconds, per qubit
  std::vector<double> t2;

  // Validates positivity and t2 <= 2 t1 per qubit.
  RelaxationParams(std::vector<double> t1_in, std::vector<double> t2_in);
  int n_qubits() const { return static_cast<int>(t1.size()); }
  double kappa_x(int qubit) const { return 1.0 / t1[qubit - 1]; }  // 1-based
  double kappa_z(int qubit) const { return 1.0 / t2[qubit - 1]; }
};

inline constexpr double kDefaultDt = 1e-4;  // seconds

// Fixed-step RK4 for drho/dt = -i[H,rho] + sum(L rho L^dag - 1/2 {L^dag L, rho}).
// Output is re-Hermitized ((rho + rho^dag)/2).
DensityMatrix lindblad_evolve(const LindbladModel& model, const DensityMatrix& rho0,
                              double t, double dt = kDefaultDt);

// Single RHS evaluation (exposed for convention checks in tests).
CMat lindblad_rhs(const LindbladModel& model, const CMat& rho);

// H = 0 (rotating frame, on resonance); 2n operators sqrt(kappa/2) sigma_{x,z}^(i)
// with kappa_{i,x} = 1/T1_i and kappa_{i,z} = 1/T2_i.
LindbladModel nmr_noise_model(const RelaxationParams& params);

// Exact solution of the NMR noise model: with H = 0 and single-qubit
// sigma_x / sigma_z dissipators every n-qubit Pauli product is an eigenmode,
// decaying at the sum of per-qubit rates r(I)=0, r(X)=kappa_z, r(Y)=kappa_x+kappa_z,
// r(Z)=kappa_x.
DensityMatrix pauli_mode_evolve(const DensityMatrix& rho0, const RelaxationParams& params,
                                double t);

// Closed-form decayed GHZ / W / WWbar states under the NMR noise model.
DensityMatrix ghz_analytic(const RelaxationParams& params, double t);
DensityMatrix w_analytic(const RelaxationParams& params, double t);
DensityMatrix wwbar_analytic(const RelaxationParams& params, double t);

// M_z(t) = M_0 (1 - 2 e^{-t/T1})
double t1_inversion_recovery(double m0, double t1, double t);

struct ExpFit {
  double amplitude = 0;
  double rate = 0;      // s^-1
  double residual = 0;  // RMS in log space
};

// Least-squares fit of y = A e^{-r t} via linear regression on log y.
ExpFit fit_exponential_decay(const std::vector<std::pair<double, double>>& samples);

}  // namespace qsp
