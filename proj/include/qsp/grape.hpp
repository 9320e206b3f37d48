// Gradient-ascent pulse engineering: piecewise-constant control amplitudes
// realizing a target unitary, optimized by first-order gradient ascent with a
// backtracking line search.
#pragma once

#include "qsp/qcore.hpp"

#include <cstdint>
#include <vector>

namespace qsp {

struct ControlProblem {
  Hamiltonian h0;                     // drift
  std::vector<Hamiltonian> controls;  // H_k
  int n_steps = 0;                    // N
  double dt = 0;                      // seconds
  CMat target;                        // U_tgt

  // Validates Hermiticity of Hamiltonians, unitarity of the target (1e-10),
  // N >= 1 and dt > 0.
  ControlProblem(Hamiltonian drift, std::vector<Hamiltonian> ctrl, int n, double step,
                 CMat tgt);
  int dim() const { return 1 << h0.n_qubits; }
  int n_controls() const { return static_cast<int>(controls.size()); }
};

struct ControlField {
  Eigen::MatrixXd amplitudes;  // N x m, rad/s
};

struct Propagation {
  CMat total;              // U_N ... U_1
  std::vector<CMat> step;  // U_1 .. U_N
};

// Step propagators U_j = exp(-i dt (H0 + sum u_k(j) H_k)) via Hermitian
// exponential; product right-to-left.
Propagation propagate(const ControlProblem& problem, const ControlField& field);

// Phi = |Tr(U_tgt^dag U_total)|^2 / d^2  (phase-insensitive, in [0,1]).
double grape_fidelity(const ControlProblem& problem, const ControlField& field);

// Exact gradient of the normalized Phi, with the step-propagator derivative
// taken through the spectral decomposition of the step Hamiltonian.  For
// small dt it reduces to the first-order rule
// dPhi/du_k(j) = (2 dt / d^2) Im{ Tr(U_tgt^dag U_N..U_{j+1} H_k U_j..U_1)
//                                 Tr(U_opt^dag U_tgt) }.
Eigen::MatrixXd grape_gradient(const ControlProblem& problem, const ControlField& field);

struct GrapeOptions {
  double step = 1.0;       // initial line-search step on the gradient
  int max_iter = 500;
  double tol = 1e-4;       // stop at fidelity >= 1 - tol
  double amplitude_bound = 0;  // box |u| <= bound when > 0
};

struct GrapeResult {
  ControlField field;
  std::vector<double> fidelity_trace;  // one entry per accepted iterate
  double final_fidelity = 0;
  int iterations = 0;
  bool converged = false;
};

// Gradient ascent with backtracking line search; fidelity trace is monotone
// non-decreasing.  Starts from `init`.
GrapeResult grape_optimize(const ControlProblem& problem, const ControlField& init,
                           const GrapeOptions& options = {});
// Seeded uniform random initialization in [-scale, scale].
ControlField random_field(const ControlProblem& problem, double scale, std::uint64_t seed);

// CSV serialization: `# dt_s` comment, then `step,u_1,...,u_m` rows.
std::string serialize_field(const ControlField& field, double dt);

}  // namespace qsp
