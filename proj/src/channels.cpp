#include "qsp/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace qsp {

KrausChannel::KrausChannel(int n, std::vector<CMat> ops, std::string lbl,
                           std::map<std::string, double> p)
    : n_qubits(n), operators(std::move(ops)), label(std::move(lbl)), params(std::move(p)) {
  if (n <= 0) throw std::invalid_argument("KrausChannel: n_qubits must be positive");
  if (operators.empty()) throw std::invalid_argument("KrausChannel: no operators");
  const Eigen::Index d = dim();
  CMat sum = CMat::Zero(d, d);
  for (const CMat& e : operators) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("KrausChannel: operator dimension mismatch");
    sum += e.adjoint() * e;
  }
  if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("KrausChannel: completeness relation violated");
}

BDCoefficients::BDCoefficients(double a, double b, double c) : c1(a), c2(b), c3(c) {
  for (double lam : eigenvalues())
    if (lam < -1e-12) throw std::invalid_argument("BDCoefficients: negative eigenvalue");
}

std::array<double, 4> BDCoefficients::eigenvalues() const {
  // Bell-basis eigenvalues of 1/4 (I + c1 XX + c2 YY + c3 ZZ).
  return {0.25 * (1 + c1 + c2 - c3),   // Psi+
          0.25 * (1 - c1 - c2 - c3),   // Psi-
          0.25 * (1 + c1 - c2 + c3),   // Phi+
          0.25 * (1 - c1 + c2 + c3)};  // Phi-
}

DensityMatrix bd_state(const BDCoefficients& c) {
  CMat m = 0.25 * (CMat::Identity(4, 4) +
                   c.c1 * tensor_product(pauli_x(), pauli_x()) +
                   c.c2 * tensor_product(pauli_y(), pauli_y()) +
                   c.c3 * tensor_product(pauli_z(), pauli_z()));
  return DensityMatrix(2, std::move(m));
}

KrausChannel identity_channel(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return KrausChannel(n_qubits, {CMat::Identity(d, d)}, "identity");
}

KrausChannel phase_damping_1q(double lambda_rate, double t) {
  if (lambda_rate < 0 || t < 0) throw std::invalid_argument("phase_damping_1q: negative input");
  const double decay = std::exp(-lambda_rate * t);
  const double p = 0.5 * (1.0 + decay);  // off-diagonal factor 2p-1 = e^{-lambda t}
  std::vector<CMat> ops = {std::sqrt(p) * pauli_i(), std::sqrt(1.0 - p) * pauli_z()};
  return KrausChannel(1, std::move(ops), "phase_damping_1q",
                      {{"lambda", lambda_rate}, {"t", t}, {"p", p}});
}

KrausChannel phase_damping_2q(double gamma1, double gamma2, double t) {
  if (gamma1 < 0 || gamma2 < 0 || t < 0)
    throw std::invalid_argument("phase_damping_2q: negative input");
  const double ap1 = std::sqrt(0.5 * (1 + std::exp(-gamma1 * t)));
  const double am1 = std::sqrt(0.5 * (1 - std::exp(-gamma1 * t)));
  const double ap2 = std::sqrt(0.5 * (1 + std::exp(-gamma2 * t)));
  const double am2 = std::sqrt(0.5 * (1 - std::exp(-gamma2 * t)));
  const CMat i2 = pauli_i(), z = pauli_z();
  std::vector<CMat> ops = {ap1 * ap2 * tensor_product(i2, i2),
                           ap1 * am2 * tensor_product(i2, z),
                           am1 * ap2 * tensor_product(z, i2),
                           am1 * am2 * tensor_product(z, z)};
  return KrausChannel(2, std::move(ops), "phase_damping_2q",
                      {{"gamma1", gamma1}, {"gamma2", gamma2}, {"t", t}});
}

KrausChannel generalized_amplitude_damping(double gamma, double t, double p) {
  if (gamma < 0 || t < 0) throw std::invalid_argument("gad: negative rate/time");
  if (p < 0 || p > 1) throw std::invalid_argument("gad: p outside [0,1]");
  const double a = 1.0 - std::exp(-gamma * t);
  const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
  CMat e1(2, 2), e2(2, 2), e3(2, 2), e4(2, 2);
  e1 << 1, 0, 0, std::sqrt(1 - a);
  e2 << 0, std::sqrt(a), 0, 0;
  e3 << std::sqrt(1 - a), 0, 0, 1;
  e4 << 0, 0, std::sqrt(a), 0;
  std::vector<CMat> ops = {sp * e1, sp * e2, sq * e3, sq * e4};
  return KrausChannel(1, std::move(ops), "generalized_amplitude_damping",
                      {{"gamma", gamma}, {"t", t}, {"p", p}, {"a", a}});
}

KrausChannel depolarizing(double d_rate, double t) {
  if (d_rate < 0 || t < 0) throw std::invalid_argument("depolarizing: negative input");
  const double p = 1.0 - std::exp(-d_rate * t);
  const double lambda = 4.0 * p / 3.0;
  if (lambda > 1.0 + 1e-15)
    throw std::invalid_argument("depolarizing: lambda = 4p/3 > 1 (unphysical duration)");
  std::vector<CMat> ops = {std::sqrt(1 - p) * pauli_i(), std::sqrt(p / 3) * pauli_x(),
                           std::sqrt(p / 3) * pauli_y(), std::sqrt(p / 3) * pauli_z()};
  return KrausChannel(1, std::move(ops), "depolarizing",
                      {{"d_rate", d_rate}, {"t", t}, {"p", p}, {"lambda", lambda}});
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  CMat out = CMat::Zero(rho.dim(), rho.dim());
  for (const CMat& e : ch.operators) out += e * rho.mat * e.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(rho.n_qubits, std::move(out));
}

KrausChannel compose_independent(const std::vector<KrausChannel>& per_qubit) {
  if (per_qubit.empty()) throw std::invalid_argument("compose_independent: empty list");
  for (const KrausChannel& ch : per_qubit)
    if (ch.n_qubits != 1)
      throw std::invalid_argument("compose_independent: channels must be 1-qubit");
  std::vector<CMat> ops = per_qubit.front().operators;
  std::string label = per_qubit.front().label;
  for (size_t q = 1; q < per_qubit.size(); ++q) {
    std::vector<CMat> next;
    next.reserve(ops.size() * per_qubit[q].operators.size());
    for (const CMat& a : ops)
      for (const CMat& b : per_qubit[q].operators) next.push_back(tensor_product(a, b));
    ops = std::move(next);
    label += "*" + per_qubit[q].label;
  }
  return KrausChannel(static_cast<int>(per_qubit.size()), std::move(ops), std::move(label));
}

BDCoefficients bd_extract(const DensityMatrix& rho) {
  if (rho.n_qubits != 2) throw std::invalid_argument("bd_extract: 2-qubit state required");
  auto corr = [&](const CMat& s) {
    return (rho.mat * tensor_product(s, s)).trace().real();
  };
  return BDCoefficients(corr(pauli_x()), corr(pauli_y()), corr(pauli_z()));
}

BDCoefficients bd_evolve_closed_form(const BDCoefficients& c0, double gamma1,
                                     double gamma2, double t) {
  if (gamma1 < 0 || gamma2 < 0 || t < 0)
    throw std::invalid_argument("bd_evolve_closed_form: negative input");
  const double f = std::exp(-(gamma1 + gamma2) * t);
  return BDCoefficients(c0.c1 * f, c0.c2 * f, c0.c3);
}

CMat choi_matrix(const KrausChannel& ch) {
  const Eigen::Index d = ch.dim();
  CMat choi = CMat::Zero(d * d, d * d);
  for (const CMat& e : ch.operators) {
    CVec v(d * d);
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r) v(c * d + r) = e(r, c);
    choi += v * v.adjoint();
  }
  return choi;
}

}  // namespace qsp
