#include "qsp/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace qsp {

namespace {
constexpr complexd kI{0.0, 1.0};
}

LindbladModel::LindbladModel(Hamiltonian ham, std::vector<std::pair<CMat, double>> ops)
    : h(std::move(ham)), lindblad_ops(std::move(ops)) {
  for (const auto& [op, rate] : lindblad_ops) {
    if (rate < 0) throw std::invalid_argument("LindbladModel: negative rate");
    if (op.rows() != h.mat.rows() || op.cols() != h.mat.cols())
      throw std::invalid_argument("LindbladModel: operator dimension mismatch");
  }
}

RelaxationParams::RelaxationParams(std::vector<double> t1_in, std::vector<double> t2_in)
    : t1(std::move(t1_in)), t2(std::move(t2_in)) {
  if (t1.empty() || t1.size() != t2.size())
    throw std::invalid_argument("RelaxationParams: T1/T2 lists empty or mismatched");
  for (size_t i = 0; i < t1.size(); ++i) {
    if (t1[i] <= 0 || t2[i] <= 0)
      throw std::invalid_argument("RelaxationParams: times must be positive");
    if (t2[i] > 2 * t1[i] + 1e-15)
      throw std::invalid_argument("RelaxationParams: T2 > 2 T1 is unphysical");
  }
}

CMat lindblad_rhs(const LindbladModel& model, const CMat& rho) {
  CMat out = -kI * (model.h.mat * rho - rho * model.h.mat);
  for (const auto& [a, kappa] : model.lindblad_ops) {
    if (kappa == 0) continue;
    const CMat l = std::sqrt(kappa) * a;
    const CMat ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

DensityMatrix lindblad_evolve(const LindbladModel& model, const DensityMatrix& rho0,
                              double t, double dt) {
  if (t < 0) throw std::invalid_argument("lindblad_evolve: negative time");
  if (t == 0) return rho0;
  if (dt <= 0) throw std::invalid_argument("lindblad_evolve: dt must be positive");

  CMat rho = rho0.mat;
  double remaining = t;
  while (remaining > 0) {
    const double h = std::min(dt, remaining);
    const CMat k1 = lindblad_rhs(model, rho);
    const CMat k2 = lindblad_rhs(model, rho + 0.5 * h * k1);
    const CMat k3 = lindblad_rhs(model, rho + 0.5 * h * k2);
    const CMat k4 = lindblad_rhs(model, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    remaining -= h;
  }
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(rho0.n_qubits, std::move(rho));
}

LindbladModel nmr_noise_model(const RelaxationParams& params) {
  const int n = params.n_qubits();
  const Eigen::Index d = Eigen::Index{1} << n;
  std::vector<std::pair<CMat, double>> ops;
  ops.reserve(2 * n);
  for (int q = 1; q <= n; ++q) {
    std::vector<CMat> fx(n, pauli_i()), fz(n, pauli_i());
    fx[q - 1] = pauli_x();
    fz[q - 1] = pauli_z();
    ops.emplace_back(tensor_product(fx), 0.5 * params.kappa_x(q));
    ops.emplace_back(tensor_product(fz), 0.5 * params.kappa_z(q));
  }
  return LindbladModel(Hamiltonian(n, CMat::Zero(d, d)), std::move(ops));
}

DensityMatrix pauli_mode_evolve(const DensityMatrix& rho0, const RelaxationParams& params,
                                double t) {
  const int n = rho0.n_qubits;
  if (params.n_qubits() != n)
    throw std::invalid_argument("pauli_mode_evolve: qubit count mismatch");
  const Eigen::Index d = rho0.dim();

  // Per-qubit decay rate of each single-qubit Pauli component.
  auto rate_of = [&](int q, int pauli_idx) {
    switch (pauli_idx) {
      case 0: return 0.0;                                   // I
      case 1: return params.kappa_z(q);                     // X
      case 2: return params.kappa_x(q) + params.kappa_z(q); // Y
      default: return params.kappa_x(q);                    // Z
    }
  };
  const char labels[4] = {'I', 'X', 'Y', 'Z'};

  CMat out = CMat::Zero(d, d);
  const int n_products = 1 << (2 * n);  // 4^n
  for (int code = 0; code < n_products; ++code) {
    std::vector<CMat> factors;
    factors.reserve(n);
    double rate = 0;
    int c = code;
    for (int q = n; q >= 1; --q) {
      const int idx = c & 3;
      c >>= 2;
      factors.insert(factors.begin(), pauli(labels[idx]));
      rate += rate_of(q, idx);
    }
    const CMat p = tensor_product(factors);
    const double coeff = (rho0.mat * p).trace().real() / static_cast<double>(d);
    if (coeff == 0.0) continue;
    out += coeff * std::exp(-rate * t) * p;
  }
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(n, std::move(out));
}

namespace {
DensityMatrix decayed_state(const char* name, const RelaxationParams& params, double t) {
  if (t < 0) throw std::invalid_argument("analytic decay: negative time");
  return pauli_mode_evolve(DensityMatrix::pure(standard_state(name)), params, t);
}
}  // namespace

DensityMatrix ghz_analytic(const RelaxationParams& params, double t) {
  return decayed_state("GHZ_MINUS", params, t);
}

DensityMatrix w_analytic(const RelaxationParams& params, double t) {
  return decayed_state("W", params, t);
}

DensityMatrix wwbar_analytic(const RelaxationParams& params, double t) {
  return decayed_state("WWBAR", params, t);
}

double t1_inversion_recovery(double m0, double t1, double t) {
  if (t1 <= 0) throw std::invalid_argument("t1_inversion_recovery: T1 must be positive");
  return m0 * (1.0 - 2.0 * std::exp(-t / t1));
}

ExpFit fit_exponential_decay(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("fit_exponential_decay: need >= 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(samples.size());
  for (const auto& [t, y] : samples) {
    if (y <= 0) throw std::invalid_argument("fit_exponential_decay: nonpositive sample");
    const double ly = std::log(y);
    sx += t;
    sy += ly;
    sxx += t * t;
    sxy += t * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_exponential_decay: times not distinct");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  ExpFit fit;
  fit.amplitude = std::exp(intercept);
  fit.rate = -slope;
  double ss = 0;
  for (const auto& [t, y] : samples) {
    const double r = std::log(y) - (intercept + slope * t);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

}  // namespace qsp
