// Noisy expectation-value simulation, Pauli-basis linear inversion (QST) and
// maximum-likelihood state estimation via the lower-triangular T^dag T / Tr
// parametrization, minimized with Levenberg-Marquardt using analytic Jacobians.
#pragma once

#include "qsp/qcore.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qsp {

struct MeasurementRecord {
  int n_qubits = 0;
  // Pauli-product label (e.g. "XZ", "IY"; no all-identity label) -> (mean, sigma).
  std::map<std::string, std::pair<double, double>> values;
};

// All 4^n - 1 non-identity Pauli-product labels, in lexicographic I<X<Y<Z order.
std::vector<std::string> pauli_labels(int n_qubits);
// Tensor product of single-qubit Paulis from a label like "XIZ".
CMat pauli_product(const std::string& label);

// mean = Tr(rho P) + N(0, sigma^2) per non-identity label, seeded generator.
MeasurementRecord simulate_expectations(const DensityMatrix& rho, double sigma,
                                        std::uint64_t seed);

// Complex spectral peak pairs for both spins under one preparatory pulse.
struct NmrPeaks {
  std::string prep;                 // II, IX, IY or XX
  std::array<complexd, 2> spin1;    // (omega1 - pi J, omega1 + pi J) intensities
  std::array<complexd, 2> spin2;
};

// Peaks via the 1/2 [[1,1],[1,-1]] mixing of Tr{rho s~_1-} and
// Tr{rho s~_1- s~_2z} (and the spin-2 analogues), s~ = U_P^dag (s_x - i s_y) U_P;
// Gaussian noise of scale sigma added per real/imaginary component.
NmrPeaks simulate_nmr_peaks(const DensityMatrix& rho, const std::string& prep,
                            std::uint64_t seed, double sigma);

// Preparatory readout unitary for a label in {II, IX, IY, XX}.
CMat nmr_prep_unitary(const std::string& prep);

// Assemble a complete 2-qubit record from the peak sets of all four
// preparatory pulses by least-squares inversion of the peak functionals.
MeasurementRecord record_from_nmr_peaks(const std::vector<NmrPeaks>& peak_sets,
                                        double sigma);

// rho = 2^-n (I + sum mean_P P).  Hermitian and unit trace, NOT guaranteed PSD.
DensityMatrix qst_linear_inversion(const MeasurementRecord& rec);

struct TParams {
  Eigen::VectorXd t;  // length 4^n: d real diagonals, then (re, im) band pairs
};

// rho = T^dag T / Tr(T^dag T) with lower-triangular T assembled from t:
// diagonal first, then sub-diagonal bands ordered by band offset and row.
DensityMatrix rho_from_t(const TParams& params, int n_qubits);
CMat t_matrix_from_params(const TParams& params, int n_qubits);

// Bottom-anchored Cholesky-style factorization of rho (eigenvalues clipped at 0
// for near-physical input).  For indefinite input (raw QST output) the
// imaginary components of t are dropped, matching the MLE initial-guess recipe.
TParams t_from_rho(const DensityMatrix& rho);

// L = sum_P (Tr(rho(t) P) - mean_P)^2 / (2 sigma_P^2)
double likelihood(const TParams& params, const MeasurementRecord& rec);

struct MleOptions {
  int max_iter = 500;
  double tol = 1e-12;  // stop when |delta L| < tol
};

struct MleResult {
  DensityMatrix rho;
  double final_likelihood = 0;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt minimization of the likelihood over t, starting from
// t_from_rho(qst_linear_inversion(rec)).  Deterministic; the returned state is
// PSD with unit trace by construction.
MleResult mle_reconstruct(const MeasurementRecord& rec, const MleOptions& options = {});

// CSV with an `# n_qubits` header comment and `label,mean,sigma` rows.
std::string serialize_record(const MeasurementRecord& rec);
MeasurementRecord parse_record(const std::string& text);

}  // namespace qsp
