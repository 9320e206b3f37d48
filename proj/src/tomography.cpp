#include "qsp/tomography.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_complete(const MeasurementRecord& rec) {
  for (const std::string& label : pauli_labels(rec.n_qubits))
    if (!rec.values.count(label))
      throw std::invalid_argument("MeasurementRecord: missing label " + label);
}

}  // namespace

std::vector<std::string> pauli_labels(int n_qubits) {
  static const char kChars[4] = {'I', 'X', 'Y', 'Z'};
  const int total = 1 << (2 * n_qubits);
  std::vector<std::string> labels;
  labels.reserve(total - 1);
  for (int code = 1; code < total; ++code) {
    std::string label(n_qubits, 'I');
    int c = code;
    for (int q = n_qubits - 1; q >= 0; --q) {
      label[q] = kChars[c & 3];
      c >>= 2;
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

CMat pauli_product(const std::string& label) {
  std::vector<CMat> factors;
  factors.reserve(label.size());
  for (char c : label) factors.push_back(pauli(c));
  return tensor_product(factors);
}

MeasurementRecord simulate_expectations(const DensityMatrix& rho, double sigma,
                                        std::uint64_t seed) {
  if (sigma < 0) throw std::invalid_argument("simulate_expectations: negative sigma");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  MeasurementRecord rec;
  rec.n_qubits = rho.n_qubits;
  for (const std::string& label : pauli_labels(rho.n_qubits)) {
    const double exact = (rho.mat * pauli_product(label)).trace().real();
    const double mean = sigma > 0 ? exact + sigma * noise(rng) : exact;
    rec.values[label] = {mean, sigma};
  }
  return rec;
}

CMat nmr_prep_unitary(const std::string& prep) {
  if (prep == "II") return CMat::Identity(4, 4);
  if (prep == "IX") return rotation_pulse(kPi / 2, 0.0, 2, 2);
  if (prep == "IY") return rotation_pulse(kPi / 2, kPi / 2, 2, 2);
  if (prep == "XX") return collective_rotation(kPi / 2, 0.0, {1, 2}, 2);
  throw std::invalid_argument("nmr_prep_unitary: unknown prep label " + prep);
}

namespace {

// The two complex observables whose 1/2 [[1,1],[1,-1]] mixing gives the peak
// pair of the given spin under preparatory pulse U_P.
std::array<CMat, 2> peak_observables(int spin, const CMat& up) {
  const CMat minus1 = tensor_product(pauli_x() - complexd(0, 1) * pauli_y(), pauli_i());
  const CMat minus2 = tensor_product(pauli_i(), pauli_x() - complexd(0, 1) * pauli_y());
  const CMat z1 = tensor_product(pauli_z(), pauli_i());
  const CMat z2 = tensor_product(pauli_i(), pauli_z());
  CMat a = (spin == 1) ? minus1 : minus2;
  CMat b = (spin == 1) ? CMat(minus1 * z2) : CMat(z1 * minus2);
  return {up.adjoint() * a * up, up.adjoint() * b * up};
}

}  // namespace

NmrPeaks simulate_nmr_peaks(const DensityMatrix& rho, const std::string& prep,
                            std::uint64_t seed, double sigma) {
  if (rho.n_qubits != 2) throw std::invalid_argument("simulate_nmr_peaks: 2-qubit state required");
  const CMat up = nmr_prep_unitary(prep);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto draw = [&]() { return sigma > 0 ? sigma * noise(rng) : 0.0; };

  NmrPeaks peaks;
  peaks.prep = prep;
  for (int spin : {1, 2}) {
    const auto obs = peak_observables(spin, up);
    const complexd ta = (rho.mat * obs[0]).trace();
    const complexd tb = (rho.mat * obs[1]).trace();
    std::array<complexd, 2> pair = {0.5 * (ta + tb), 0.5 * (ta - tb)};
    for (complexd& p : pair) p += complexd(draw(), draw());
    (spin == 1 ? peaks.spin1 : peaks.spin2) = pair;
  }
  return peaks;
}

MeasurementRecord record_from_nmr_peaks(const std::vector<NmrPeaks>& peak_sets,
                                        double sigma) {
  const std::vector<std::string> labels = pauli_labels(2);
  const int n_par = static_cast<int>(labels.size());  // 15
  std::vector<CMat> paulis;
  for (const std::string& l : labels) paulis.push_back(pauli_product(l));

  // Each peak contributes two real linear functionals of rho (its real and
  // imaginary parts); express them in the Pauli-coefficient basis and solve.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const NmrPeaks& peaks : peak_sets) {
    const CMat up = nmr_prep_unitary(peaks.prep);
    for (int spin : {1, 2}) {
      const auto obs = peak_observables(spin, up);
      const auto& pair = (spin == 1) ? peaks.spin1 : peaks.spin2;
      for (int which : {0, 1}) {
        const double sign = (which == 0) ? 1.0 : -1.0;
        const CMat o = 0.5 * (obs[0] + sign * obs[1]);  // peak = Tr(rho o)
        const CMat re_obs = 0.5 * (o + o.adjoint());
        const CMat im_obs = complexd(0, -0.5) * (o - o.adjoint());
        for (const CMat* h : {&re_obs, &im_obs}) {
          Eigen::VectorXd row(n_par);
          for (int k = 0; k < n_par; ++k)
            row(k) = ((*h) * paulis[k]).trace().real() / 4.0;
          rows.push_back(std::move(row));
          const double measured = (h == &re_obs) ? pair[which].real() : pair[which].imag();
          rhs.push_back(measured - h->trace().real() / 4.0);
        }
      }
    }
  }

  Eigen::MatrixXd a(static_cast<int>(rows.size()), n_par);
  Eigen::VectorXd b(static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    a.row(static_cast<int>(i)) = rows[i];
    b(static_cast<int>(i)) = rhs[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);

  MeasurementRecord rec;
  rec.n_qubits = 2;
  for (int k = 0; k < n_par; ++k) rec.values[labels[k]] = {x(k), sigma};
  return rec;
}

DensityMatrix qst_linear_inversion(const MeasurementRecord& rec) {
  require_complete(rec);
  const Eigen::Index d = Eigen::Index{1} << rec.n_qubits;
  CMat m = CMat::Identity(d, d);
  for (const auto& [label, entry] : rec.values) m += entry.first * pauli_product(label);
  m /= static_cast<double>(d);
  m = 0.5 * (m + m.adjoint().eval());
  return DensityMatrix(rec.n_qubits, std::move(m));
}

namespace {

// Parameter layout: t[0..d-1] are the real diagonals T(r,r); the remainder are
// (re, im) pairs for sub-diagonal entries, ordered band by band (offset 1 first)
// and by row within a band.
struct ParamSlot {
  int row, col;  // 0-based
  bool imag;
};

std::vector<ParamSlot> param_slots(int d) {
  std::vector<ParamSlot> slots;
  slots.reserve(d * d);
  for (int r = 0; r < d; ++r) slots.push_back({r, r, false});
  for (int band = 1; band < d; ++band)
    for (int r = band; r < d; ++r) {
      slots.push_back({r, r - band, false});
      slots.push_back({r, r - band, true});
    }
  return slots;
}

}  // namespace

CMat t_matrix_from_params(const TParams& params, int n_qubits) {
  const int d = 1 << n_qubits;
  if (params.t.size() != d * d)
    throw std::invalid_argument("t_matrix_from_params: wrong parameter count");
  CMat t = CMat::Zero(d, d);
  const auto slots = param_slots(d);
  for (size_t i = 0; i < slots.size(); ++i) {
    const ParamSlot& s = slots[i];
    t(s.row, s.col) += s.imag ? complexd(0, params.t(i)) : complexd(params.t(i), 0);
  }
  return t;
}

DensityMatrix rho_from_t(const TParams& params, int n_qubits) {
  if (params.t.isZero(0)) throw std::invalid_argument("rho_from_t: all-zero parameters");
  const CMat t = t_matrix_from_params(params, n_qubits);
  CMat g = t.adjoint() * t;
  const double s = g.trace().real();
  if (s <= 0) throw std::invalid_argument("rho_from_t: zero normalization");
  g /= s;
  g = 0.5 * (g + g.adjoint().eval());
  return DensityMatrix(n_qubits, std::move(g));
}

TParams t_from_rho(const DensityMatrix& rho) {
  if (rho.n_qubits > 3) throw std::invalid_argument("t_from_rho: dimension unsupported");
  const int d = rho.dim();

  CMat m = rho.mat;
  const bool indefinite = rho.min_eigenvalue() < -1e-12;
  if (indefinite) {
    // Clip negative eigenvalues so a factor exists.
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * lam.asDiagonal().toDenseMatrix().cast<complexd>() *
        es.eigenvectors().adjoint();
  }

  // Bottom-anchored Cholesky: lower-triangular T with T^dag T = m, built from
  // the last row upward (the closed form anchors at rho_dd).
  CMat t = CMat::Zero(d, d);
  const double pivot_tol = 1e-14;
  for (int r = d - 1; r >= 0; --r) {
    complexd s_rr = m(r, r);
    for (int k = r + 1; k < d; ++k) s_rr -= std::conj(t(k, r)) * t(k, r);
    const double diag = s_rr.real();
    if (diag <= pivot_tol) continue;  // rank-deficient row: leave zero
    t(r, r) = std::sqrt(diag);
    for (int j = 0; j < r; ++j) {
      complexd s_rj = m(r, j);
      for (int k = r + 1; k < d; ++k) s_rj -= std::conj(t(k, r)) * t(k, j);
      t(r, j) = s_rj / t(r, r).real();
    }
  }

  TParams params;
  params.t.resize(d * d);
  const auto slots = param_slots(d);
  for (size_t i = 0; i < slots.size(); ++i) {
    const ParamSlot& s = slots[i];
    params.t(i) = s.imag ? t(s.row, s.col).imag() : t(s.row, s.col).real();
    if (indefinite && s.imag) params.t(i) = 0.0;  // initial-guess recipe
  }
  return params;
}

double likelihood(const TParams& params, const MeasurementRecord& rec) {
  require_complete(rec);
  const DensityMatrix rho = rho_from_t(params, rec.n_qubits);
  double l = 0;
  for (const auto& [label, entry] : rec.values) {
    const auto [mean, sigma] = entry;
    const double predicted = (rho.mat * pauli_product(label)).trace().real();
    const double diff = predicted - mean;
    if (sigma > 0) {
      l += diff * diff / (2 * sigma * sigma);
    } else if (std::abs(diff) > 1e-6) {
      throw std::runtime_error("likelihood: sigma = 0 with mismatched mean");
    }
  }
  return l;
}

MleResult mle_reconstruct(const MeasurementRecord& rec, const MleOptions& options) {
  require_complete(rec);
  const int n = rec.n_qubits;
  const int d = 1 << n;
  const int n_par = d * d;

  std::vector<std::string> labels;
  std::vector<CMat> paulis;
  std::vector<double> means, weights;
  for (const auto& [label, entry] : rec.values) {
    labels.push_back(label);
    paulis.push_back(pauli_product(label));
    means.push_back(entry.first);
    // Residual r = w (Tr(rho P) - mean) so that sum r^2 = L; sigma = 0 entries
    // are exact-fit targets handled with unit weight.
    weights.push_back(entry.second > 0 ? 1.0 / (std::sqrt(2.0) * entry.second) : 1.0);
  }
  const int n_obs = static_cast<int>(labels.size());
  const auto slots = param_slots(d);

  auto loss = [&](const Eigen::VectorXd& t) {
    const DensityMatrix rho = rho_from_t({t}, n);
    double l = 0;
    for (int m = 0; m < n_obs; ++m) {
      const double diff = (rho.mat * paulis[m]).trace().real() - means[m];
      const double r = weights[m] * diff;
      l += r * r;
    }
    return l;
  };

  Eigen::VectorXd t = t_from_rho(qst_linear_inversion(rec)).t;
  if (t.isZero(0)) t(0) = 1.0;

  double l_cur = loss(t);
  double mu = 1e-3;
  int iterations = 0;
  bool converged = false;

  for (int iter = 0; iter < options.max_iter && !converged; ++iter) {
    iterations = iter + 1;
    const CMat tm = t_matrix_from_params({t}, n);
    CMat g = tm.adjoint() * tm;
    const double s = g.trace().real();
    const CMat rho = g / s;

    // Residuals and analytic Jacobian through rho = T^dag T / Tr(T^dag T).
    Eigen::VectorXd f(n_obs);
    Eigen::MatrixXd jac(n_obs, n_par);
    std::vector<CMat> tp(n_obs);
    std::vector<double> expect(n_obs);
    for (int m = 0; m < n_obs; ++m) {
      tp[m] = tm * paulis[m];
      expect[m] = (rho * paulis[m]).trace().real();
      f(m) = weights[m] * (expect[m] - means[m]);
    }
    for (int p = 0; p < n_par; ++p) {
      const ParamSlot& slot = slots[p];
      const complexd v = slot.imag ? complexd(0, 1) : complexd(1, 0);
      // dG = E^dag T + T^dag E with E the unit matrix at (row, col):
      // Tr(dG P) = 2 Re(conj(v) (T P)(row, col)); Tr(dG) likewise with P = I.
      const double ds = 2.0 * std::real(std::conj(v) * tm(slot.row, slot.col));
      for (int m = 0; m < n_obs; ++m) {
        const double dtrp = 2.0 * std::real(std::conj(v) * tp[m](slot.row, slot.col));
        jac(m, p) = weights[m] * (dtrp - expect[m] * ds) / s;
      }
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtf = jac.transpose() * f;

    bool stepped = false;
    for (int damp = 0; damp < 40; ++damp) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = a.ldlt().solve(-jtf);
      const Eigen::VectorXd t_new = t + step;
      if (t_new.isZero(0)) {
        mu *= 4;
        continue;
      }
      const double l_new = loss(t_new);
      if (l_new <= l_cur) {
        converged = (l_cur - l_new) < options.tol;
        t = t_new;
        l_cur = l_new;
        mu = std::max(mu / 3.0, 1e-14);
        stepped = true;
        break;
      }
      mu *= 4;
    }
    if (!stepped) converged = true;  // no descent direction left
  }

  return MleResult{rho_from_t({t}, n), l_cur, iterations, converged};
}

std::string serialize_record(const MeasurementRecord& rec) {
  std::ostringstream os;
  os.precision(12);
  os << "# n_qubits," << rec.n_qubits << "\n";
  os << "label,mean,sigma\n";
  for (const auto& [label, entry] : rec.values)
    os << label << "," << entry.first << "," << entry.second << "\n";
  return os.str();
}

MeasurementRecord parse_record(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  MeasurementRecord rec;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# n_qubits,", 0) == 0) {
      rec.n_qubits = std::stoi(line.substr(11));
      continue;
    }
    if (line.rfind("label,", 0) == 0 || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string label, mean_s, sigma_s;
    if (!std::getline(ls, label, ',') || !std::getline(ls, mean_s, ',') ||
        !std::getline(ls, sigma_s, ','))
      throw std::invalid_argument("parse_record: malformed line: " + line);
    rec.values[label] = {std::stod(mean_s), std::stod(sigma_s)};
  }
  if (rec.n_qubits == 0) throw std::invalid_argument("parse_record: missing n_qubits header");
  return rec;
}

}  // namespace qsp
