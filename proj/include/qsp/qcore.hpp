// Dense complex linear algebra over small (n <= 3 qubit) Hilbert spaces:
// standard gates and states, pseudopure construction, fidelity measures.
//
// Conventions fixed repo-wide:
//  - qubit 1 is the LEFTMOST tensor factor = most significant bit of |b1 b2 ... bn>
//  - hbar = 1; Hamiltonians carry angular frequency (rad/s)
//  - global phase is never normalized away; unitary comparisons use |Tr(U^dag V)|/d
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <set>
#include <string>
#include <vector>

namespace qsp {

using complexd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Construction invariants are checked at 1e-12, derived equalities at 1e-10.
inline constexpr double kConstructTol = 1e-12;
inline constexpr double kDerivedTol = 1e-10;

// ---- Pauli and identity matrices -------------------------------------------
CMat pauli_i();
CMat pauli_x();
CMat pauli_y();
CMat pauli_z();
// c in {'I','X','Y','Z'}
CMat pauli(char c);

// ---- Domain types ----------------------------------------------------------

struct PureState {
  int n_qubits = 0;
  CVec amplitudes;

  // Validates length 2^n and unit norm (1e-12).
  PureState(int n, CVec amps);
  int dim() const { return 1 << n_qubits; }
};

struct DensityMatrix {
  int n_qubits = 0;
  CMat mat;

  // Validates Hermiticity and unit trace (1e-12).  PSD is deliberately NOT an
  // invariant: linear-inversion tomography can produce indefinite matrices.
  DensityMatrix(int n, CMat m);
  // Additionally requires min eigenvalue >= -1e-10.
  static DensityMatrix checked(int n, CMat m);
  static DensityMatrix pure(const PureState& psi);

  int dim() const { return 1 << n_qubits; }
  double min_eigenvalue() const;
  double purity() const;  // Tr(rho^2)
};

struct Hamiltonian {
  int n_qubits = 0;
  CMat mat;  // Hermitian, angular frequency units (rad/s)

  Hamiltonian(int n, CMat m);  // validates Hermiticity (1e-12)
};

// ---- Core operations -------------------------------------------------------

// Kronecker product; qubit 1 is the leftmost factor.
CMat tensor_product(const CMat& a, const CMat& b);
CMat tensor_product(const std::vector<CMat>& factors);

// Reduced density matrix on the kept qubits (1-based indices).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<int>& keep);

// Transpose the indices of one qubit (1-based); Hermitian, possibly indefinite.
CMat partial_transpose(const DensityMatrix& rho, int qubit);

// exp(-i H t) for Hermitian h, via eigendecomposition.
CMat hermitian_exp(const CMat& h, double t);

// rho -> e^{-iHt} rho e^{+iHt}
DensityMatrix unitary_evolve(const DensityMatrix& rho, const Hamiltonian& h, double t);

// exp(-i theta (I_x cos phi + I_y sin phi)) on `qubit`, identity elsewhere;
// I_a = sigma_a / 2.
CMat rotation_pulse(double theta, double phi, int qubit, int n_qubits);
// Same rotation applied simultaneously to every qubit in `targets`.
CMat collective_rotation(double theta, double phi, const std::vector<int>& targets,
                         int n_qubits);

// Fixed gate library.  Simple names: H, X, Y, Z, SQRT_NOT, SWAP, CNOT.
CMat gate(const std::string& name);
CMat gate_phase(double phi);                                  // diag(1, e^{i phi})
CMat gate_cnot(int control, int target, int n_qubits = 2);
// Controlled rotation: applies the (theta)_phi rotation on `target` when
// `control` is |1>.
CMat gate_cr(double theta, double phi, int control, int target, int n_qubits = 2);

// (1-eps)/2^n I + eps |psi><psi|
DensityMatrix make_pseudopure(const PureState& psi, double epsilon);

// Named library states: BELL_PHI_PLUS, BELL_PHI_MINUS, BELL_PSI_PLUS,
// BELL_PSI_MINUS, SINGLET, GHZ_MINUS, W, W_I_PHASE, WWBAR.
PureState standard_state(const std::string& name);

// Computational basis ket from a bit string, e.g. "01" -> |01>.
CVec basis_ket(const std::string& bits);

// F1 = Tr(ab) / sqrt(Tr a^2 Tr b^2)
double fidelity_overlap(const DensityMatrix& a, const DensityMatrix& b);
// F2 = (Tr sqrt(sqrt(a) b sqrt(a)))^2 (Uhlmann-Jozsa); inputs must be PSD
// within -1e-10 (tiny negatives are clipped before the square roots).
double fidelity_uhlmann(const DensityMatrix& a, const DensityMatrix& b);

// PSD square root with eigenvalue clipping at 0; throws below -1e-10.
CMat psd_sqrt(const CMat& a);

}  // namespace qsp
