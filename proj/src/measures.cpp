#include "qsp/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace qsp {

namespace {

double xlog2x(double x) { return x > 0 ? x * std::log2(x) : 0.0; }

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam < -1e-10) throw std::invalid_argument("von_neumann_entropy: state not PSD");
    s -= xlog2x(std::max(lam, 0.0));
  }
  return std::max(s, 0.0);
}

double mutual_information(const DensityMatrix& rho) {
  if (rho.n_qubits != 2) throw std::invalid_argument("mutual_information: 2-qubit state required");
  return von_neumann_entropy(partial_trace(rho, {1})) +
         von_neumann_entropy(partial_trace(rho, {2})) - von_neumann_entropy(rho);
}

CorrelationTriple bd_correlations(const BDCoefficients& c) {
  CorrelationTriple out;
  out.total = 2.0;
  for (double lam : c.eigenvalues()) out.total += xlog2x(std::max(lam, 0.0));

  const double chi = std::max({std::abs(c.c1), std::abs(c.c2), std::abs(c.c3)});
  // sum_{j=1,2} (1 + (-1)^j chi)/2 * log2(1 + (-1)^j chi), with 0 log 0 = 0
  out.classical = std::max(0.0, 0.5 * (xlog2x(1 - chi) + xlog2x(1 + chi)));
  out.discord = std::max(out.total - out.classical, 0.0);
  return out;
}

double discord_transition_time(const BDCoefficients& c0, double gamma_sum) {
  if (gamma_sum <= 0) throw std::invalid_argument("discord_transition_time: gamma_sum <= 0");
  if (std::abs(c0.c3) == 0) throw std::invalid_argument("discord_transition_time: c3 = 0");
  if (std::abs(c0.c1) <= std::abs(c0.c3)) return 0.0;
  return std::log(std::abs(c0.c1 / c0.c3)) / gamma_sum;
}

double entanglement_eta(const DensityMatrix& rho) {
  if (rho.n_qubits != 2) throw std::invalid_argument("entanglement_eta: 2-qubit state required");
  Eigen::SelfAdjointEigenSolver<CMat> es(partial_transpose(rho, 2), Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

std::array<double, 3> tripartite_negativity_parts(const DensityMatrix& rho) {
  if (rho.n_qubits != 3)
    throw std::invalid_argument("tripartite_negativity: 3-qubit state required");
  std::array<double, 3> parts{};
  for (int q = 1; q <= 3; ++q) {
    Eigen::SelfAdjointEigenSolver<CMat> es(partial_transpose(rho, q), Eigen::EigenvaluesOnly);
    parts[q - 1] = std::max(0.0, -2.0 * es.eigenvalues().minCoeff());
  }
  return parts;
}

double tripartite_negativity(const DensityMatrix& rho) {
  const auto parts = tripartite_negativity_parts(rho);
  return std::cbrt(parts[0] * parts[1] * parts[2]);
}

}  // namespace qsp
