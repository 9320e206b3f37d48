#include "qsp/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsp {

namespace {

constexpr complexd kI{0.0, 1.0};

int qubit_count_for_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if ((Eigen::Index{1} << n) != d) throw std::invalid_argument("dimension is not a power of 2");
  return n;
}

void require_square(const CMat& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
}

double hermiticity_defect(const CMat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

CMat pauli_i() { return CMat::Identity(2, 2); }

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMat pauli(char c) {
  switch (c) {
    case 'I': return pauli_i();
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
  }
  throw std::invalid_argument(std::string("unknown Pauli label: ") + c);
}

PureState::PureState(int n, CVec amps) : n_qubits(n), amplitudes(std::move(amps)) {
  if (n <= 0) throw std::invalid_argument("PureState: n_qubits must be positive");
  if (amplitudes.size() != (Eigen::Index{1} << n))
    throw std::invalid_argument("PureState: amplitude count != 2^n");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kConstructTol)
    throw std::invalid_argument("PureState: not unit norm");
}

DensityMatrix::DensityMatrix(int n, CMat m) : n_qubits(n), mat(std::move(m)) {
  if (n <= 0) throw std::invalid_argument("DensityMatrix: n_qubits must be positive");
  require_square(mat, "DensityMatrix");
  if (mat.rows() != (Eigen::Index{1} << n))
    throw std::invalid_argument("DensityMatrix: dimension != 2^n");
  if (hermiticity_defect(mat) > kConstructTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(mat.trace().real() - 1.0) > kConstructTol || std::abs(mat.trace().imag()) > kConstructTol)
    throw std::invalid_argument("DensityMatrix: trace != 1");
}

DensityMatrix DensityMatrix::checked(int n, CMat m) {
  DensityMatrix rho(n, std::move(m));
  if (rho.min_eigenvalue() < -1e-10)
    throw std::invalid_argument("DensityMatrix::checked: negative eigenvalue");
  return rho;
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (mat * mat).trace().real(); }

Hamiltonian::Hamiltonian(int n, CMat m) : n_qubits(n), mat(std::move(m)) {
  if (n <= 0) throw std::invalid_argument("Hamiltonian: n_qubits must be positive");
  require_square(mat, "Hamiltonian");
  if (mat.rows() != (Eigen::Index{1} << n))
    throw std::invalid_argument("Hamiltonian: dimension != 2^n");
  if (hermiticity_defect(mat) > kConstructTol)
    throw std::invalid_argument("Hamiltonian: not Hermitian");
}

CMat tensor_product(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat tensor_product(const std::vector<CMat>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor_product: empty factor list");
  CMat out = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<int>& keep) {
  const int n = rho.n_qubits;
  if (keep.empty() || static_cast<int>(keep.size()) >= n)
    throw std::invalid_argument("partial_trace: keep must be a nonempty strict subset");
  for (int q : keep)
    if (q < 1 || q > n) throw std::invalid_argument("partial_trace: qubit index out of range");

  std::vector<int> kept(keep.begin(), keep.end());   // ascending
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q)
    if (!keep.count(q)) traced.push_back(q);

  const int nk = static_cast<int>(kept.size());
  const int nt = n - nk;
  const int dk = 1 << nk;
  const int dt = 1 << nt;

  CMat out = CMat::Zero(dk, dk);
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      complexd acc = 0.0;
      for (int e = 0; e < dt; ++e) {
        int row = 0, col = 0;
        for (int b = 0; b < nk; ++b) {
          const int q = kept[b];
          row |= ((r >> (nk - 1 - b)) & 1) << (n - q);
          col |= ((c >> (nk - 1 - b)) & 1) << (n - q);
        }
        for (int b = 0; b < nt; ++b) {
          const int q = traced[b];
          const int bit = (e >> (nt - 1 - b)) & 1;
          row |= bit << (n - q);
          col |= bit << (n - q);
        }
        acc += rho.mat(row, col);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(nk, std::move(out));
}

CMat partial_transpose(const DensityMatrix& rho, int qubit) {
  const int n = rho.n_qubits;
  if (qubit < 1 || qubit > n) throw std::invalid_argument("partial_transpose: qubit out of range");
  const int d = rho.dim();
  const int mask = 1 << (n - qubit);
  CMat out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const int rr = (r & ~mask) | (c & mask);
      const int cc = (c & ~mask) | (r & mask);
      out(rr, cc) = rho.mat(r, c);
    }
  return out;
}

CMat hermitian_exp(const CMat& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const auto& lam = es.eigenvalues();
  CVec phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(-kI * lam(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix unitary_evolve(const DensityMatrix& rho, const Hamiltonian& h, double t) {
  if (t < 0) throw std::invalid_argument("unitary_evolve: negative time");
  if (h.n_qubits != rho.n_qubits) throw std::invalid_argument("unitary_evolve: dimension mismatch");
  const CMat u = hermitian_exp(h.mat, t);
  CMat out = u * rho.mat * u.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(rho.n_qubits, std::move(out));
}

CMat rotation_pulse(double theta, double phi, int qubit, int n_qubits) {
  return collective_rotation(theta, phi, {qubit}, n_qubits);
}

CMat collective_rotation(double theta, double phi, const std::vector<int>& targets,
                         int n_qubits) {
  for (int q : targets)
    if (q < 1 || q > n_qubits)
      throw std::invalid_argument("rotation_pulse: qubit index out of range");
  // 2x2 block: cos(theta/2) I - i sin(theta/2)(cos phi sx + sin phi sy)
  const CMat axis = std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y();
  const CMat block =
      std::cos(theta / 2) * pauli_i() - kI * std::sin(theta / 2) * axis;
  std::vector<CMat> factors;
  factors.reserve(n_qubits);
  for (int q = 1; q <= n_qubits; ++q) {
    const bool hit = std::find(targets.begin(), targets.end(), q) != targets.end();
    factors.push_back(hit ? block : pauli_i());
  }
  return tensor_product(factors);
}

CMat gate(const std::string& name) {
  if (name == "X") return pauli_x();
  if (name == "Y") return pauli_y();
  if (name == "Z") return pauli_z();
  if (name == "H") {
    CMat m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
  }
  if (name == "SQRT_NOT") {
    CMat m(2, 2);
    m << complexd(1, 1), complexd(1, -1), complexd(1, -1), complexd(1, 1);
    return m / 2.0;
  }
  if (name == "SWAP") {
    CMat m = CMat::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1;
    m(1, 2) = m(2, 1) = 1;
    return m;
  }
  if (name == "CNOT") return gate_cnot(1, 2);
  throw std::invalid_argument("gate: unknown name " + name);
}

CMat gate_phase(double phi) {
  CMat m = CMat::Identity(2, 2);
  m(1, 1) = std::exp(kI * phi);
  return m;
}

namespace {

// Embed a controlled 2x2 operation: apply `op` to `target` when `control`=|1>.
CMat controlled_op(const CMat& op, int control, int target, int n_qubits) {
  if (control == target || control < 1 || target < 1 || control > n_qubits ||
      target > n_qubits)
    throw std::invalid_argument("controlled gate: bad qubit indices");
  const int d = 1 << n_qubits;
  CMat out = CMat::Zero(d, d);
  const int cmask = 1 << (n_qubits - control);
  const int tmask = 1 << (n_qubits - target);
  for (int r = 0; r < d; ++r) {
    if (!(r & cmask)) {
      out(r, r) = 1;
      continue;
    }
    const int tbit = (r & tmask) ? 1 : 0;
    out(r & ~tmask, r) = op(0, tbit);
    out(r | tmask, r) = op(1, tbit);
  }
  return out;
}

}  // namespace

CMat gate_cnot(int control, int target, int n_qubits) {
  return controlled_op(pauli_x(), control, target, n_qubits);
}

CMat gate_cr(double theta, double phi, int control, int target, int n_qubits) {
  const CMat r = rotation_pulse(theta, phi, 1, 1);
  return controlled_op(r, control, target, n_qubits);
}

DensityMatrix make_pseudopure(const PureState& psi, double epsilon) {
  if (epsilon < 0 || epsilon > 1) throw std::invalid_argument("make_pseudopure: epsilon out of [0,1]");
  const int d = psi.dim();
  CMat m = (1.0 - epsilon) / d * CMat::Identity(d, d) +
           epsilon * (psi.amplitudes * psi.amplitudes.adjoint());
  return DensityMatrix(psi.n_qubits, std::move(m));
}

CVec basis_ket(const std::string& bits) {
  const int n = static_cast<int>(bits.size());
  int idx = 0;
  for (char b : bits) {
    if (b != '0' && b != '1') throw std::invalid_argument("basis_ket: bits must be 0/1");
    idx = (idx << 1) | (b - '0');
  }
  CVec v = CVec::Zero(Eigen::Index{1} << n);
  v(idx) = 1.0;
  return v;
}

PureState standard_state(const std::string& name) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  if (name == "BELL_PHI_PLUS") return PureState(2, (basis_ket("00") + basis_ket("11")) / s2);
  if (name == "BELL_PHI_MINUS") return PureState(2, (basis_ket("00") - basis_ket("11")) / s2);
  if (name == "BELL_PSI_PLUS") return PureState(2, (basis_ket("01") + basis_ket("10")) / s2);
  if (name == "BELL_PSI_MINUS" || name == "SINGLET")
    return PureState(2, (basis_ket("01") - basis_ket("10")) / s2);
  if (name == "GHZ_MINUS") return PureState(3, (basis_ket("000") - basis_ket("111")) / s2);
  if (name == "W")
    return PureState(3, (basis_ket("100") + basis_ket("001") + basis_ket("010")) / s3);
  if (name == "W_I_PHASE")
    return PureState(3, (kI * basis_ket("001") + basis_ket("010") + basis_ket("100")) / s3);
  if (name == "WWBAR")
    return PureState(3, (basis_ket("001") + basis_ket("010") + basis_ket("011") +
                         basis_ket("100") + basis_ket("101") + basis_ket("110")) /
                            s6);
  throw std::invalid_argument("standard_state: unknown name " + name);
}

double fidelity_overlap(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity_overlap: dimension mismatch");
  const double na = (a.mat * a.mat).trace().real();
  const double nb = (b.mat * b.mat).trace().real();
  if (na <= 0 || nb <= 0) throw std::invalid_argument("fidelity_overlap: zero matrix");
  return (a.mat * b.mat).trace().real() / std::sqrt(na * nb);
}

CMat psd_sqrt(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-10) throw std::invalid_argument("psd_sqrt: eigenvalue < -1e-10");
  Eigen::VectorXd root(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) root(k) = std::sqrt(std::max(0.0, lam(k)));
  return es.eigenvectors() * root.asDiagonal().toDenseMatrix().cast<complexd>() *
         es.eigenvectors().adjoint();
}

double fidelity_uhlmann(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity_uhlmann: dimension mismatch");
  const CMat ra = psd_sqrt(a.mat);
  const CMat inner = psd_sqrt(ra * b.mat * ra);
  const double f = inner.trace().real();
  return f * f;
}

}  // namespace qsp
