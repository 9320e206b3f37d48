#include "qsp/grape.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsp {

ControlProblem::ControlProblem(Hamiltonian drift, std::vector<Hamiltonian> ctrl, int n,
                               double step, CMat tgt)
    : h0(std::move(drift)), controls(std::move(ctrl)), n_steps(n), dt(step),
      target(std::move(tgt)) {
  if (n_steps < 1) throw std::invalid_argument("ControlProblem: n_steps must be >= 1");
  if (dt <= 0) throw std::invalid_argument("ControlProblem: dt must be positive");
  if (controls.empty()) throw std::invalid_argument("ControlProblem: no controls");
  for (const Hamiltonian& h : controls)
    if (h.mat.rows() != h0.mat.rows())
      throw std::invalid_argument("ControlProblem: control dimension mismatch");
  if (target.rows() != h0.mat.rows() || target.cols() != h0.mat.cols())
    throw std::invalid_argument("ControlProblem: target dimension mismatch");
  if ((target.adjoint() * target - CMat::Identity(target.rows(), target.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::invalid_argument("ControlProblem: target not unitary");
}

namespace {

void require_shape(const ControlProblem& problem, const ControlField& field) {
  if (field.amplitudes.rows() != problem.n_steps ||
      field.amplitudes.cols() != problem.n_controls())
    throw std::invalid_argument("ControlField: shape mismatch");
}

}  // namespace

Propagation propagate(const ControlProblem& problem, const ControlField& field) {
  require_shape(problem, field);
  Propagation prop;
  prop.step.reserve(problem.n_steps);
  prop.total = CMat::Identity(problem.dim(), problem.dim());
  for (int j = 0; j < problem.n_steps; ++j) {
    CMat h = problem.h0.mat;
    for (int k = 0; k < problem.n_controls(); ++k)
      h += field.amplitudes(j, k) * problem.controls[k].mat;
    CMat u = hermitian_exp(h, problem.dt);
    prop.total = u * prop.total;  // product right-to-left: U_N ... U_1
    prop.step.push_back(std::move(u));
  }
  return prop;
}

double grape_fidelity(const ControlProblem& problem, const ControlField& field) {
  const Propagation prop = propagate(problem, field);
  const double d = static_cast<double>(problem.dim());
  return std::norm((problem.target.adjoint() * prop.total).trace()) / (d * d);
}

Eigen::MatrixXd grape_gradient(const ControlProblem& problem, const ControlField& field) {
  require_shape(problem, field);
  const Propagation prop = propagate(problem, field);
  const int n = problem.n_steps, m = problem.n_controls();
  const int dim = problem.dim();
  const double d = static_cast<double>(dim);

  // Forward partial products F_j = U_j ... U_1 (F_{-1} = I) and backward
  // B_j = U_N ... U_{j+1}.
  std::vector<CMat> fwd(n);
  fwd[0] = prop.step[0];
  for (int j = 1; j < n; ++j) fwd[j] = prop.step[j] * fwd[j - 1];
  std::vector<CMat> back(n);
  back[n - 1] = CMat::Identity(dim, dim);
  for (int j = n - 2; j >= 0; --j) back[j] = back[j + 1] * prop.step[j + 1];

  const complexd overlap = (prop.total.adjoint() * problem.target).trace();
  Eigen::MatrixXd grad(n, m);
  for (int j = 0; j < n; ++j) {
    // Exact step-propagator derivative through the spectral decomposition of
    // H_j: with U_j = V e^{mu} V^dag (mu_a = -i dt lambda_a),
    // dU_j/du_k = V ((V^dag (-i dt H_k) V) o Phi) V^dag, Phi_{ab} the divided
    // difference of exp between mu_a and mu_b.  For small dt this reduces to
    // the first-order -i dt H_k U_j update rule.
    CMat h = problem.h0.mat;
    for (int k = 0; k < m; ++k) h += field.amplitudes(j, k) * problem.controls[k].mat;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXd lam = es.eigenvalues();
    const CMat& v = es.eigenvectors();

    CMat phi(dim, dim);
    for (int a = 0; a < dim; ++a) {
      const complexd mu_a = complexd(0, -problem.dt) * lam(a);
      for (int b = 0; b < dim; ++b) {
        const complexd mu_b = complexd(0, -problem.dt) * lam(b);
        const complexd diff = mu_a - mu_b;
        phi(a, b) = (std::abs(diff) < 1e-12)
                        ? std::exp(0.5 * (mu_a + mu_b))
                        : (std::exp(mu_a) - std::exp(mu_b)) / diff;
      }
    }

    const CMat prev = (j == 0) ? CMat(CMat::Identity(dim, dim)) : fwd[j - 1];
    // do/du = Tr(K dU_j) with K = F_{j-1} U_tgt^dag B_j, rotated to the
    // eigenbasis so the Hadamard product collapses to an elementwise sum.
    const CMat k_eig = v.adjoint() * (prev * problem.target.adjoint() * back[j]) * v;
    for (int k = 0; k < m; ++k) {
      const CMat w = v.adjoint() * (complexd(0, -problem.dt) * problem.controls[k].mat) * v;
      complexd dov = 0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) dov += k_eig(b, a) * w(a, b) * phi(a, b);
      grad(j, k) = 2.0 * std::real(overlap * dov) / (d * d);
    }
  }
  return grad;
}

GrapeResult grape_optimize(const ControlProblem& problem, const ControlField& init,
                           const GrapeOptions& options) {
  require_shape(problem, init);
  GrapeResult result;
  result.field = init;

  auto clamp = [&](Eigen::MatrixXd u) {
    if (options.amplitude_bound > 0)
      u = u.cwiseMax(-options.amplitude_bound).cwiseMin(options.amplitude_bound);
    return u;
  };

  double fid = grape_fidelity(problem, result.field);
  result.fidelity_trace.push_back(fid);
  double step = options.step;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    result.iterations = iter + 1;
    if (fid >= 1.0 - options.tol) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd grad = grape_gradient(problem, result.field);
    const double gnorm = grad.norm();
    if (gnorm < 1e-14) break;  // stationary point

    bool improved = false;
    for (int bt = 0; bt < 40; ++bt) {
      ControlField trial{clamp(result.field.amplitudes + step * grad)};
      const double trial_fid = grape_fidelity(problem, trial);
      if (trial_fid > fid) {
        result.field = std::move(trial);
        fid = trial_fid;
        result.fidelity_trace.push_back(fid);
        step *= 1.5;  // cautious growth after a success
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // line search exhausted
  }
  result.converged = result.converged || fid >= 1.0 - options.tol;
  result.final_fidelity = fid;
  return result;
}

ControlField random_field(const ControlProblem& problem, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-scale, scale);
  Eigen::MatrixXd amps(problem.n_steps, problem.n_controls());
  for (int j = 0; j < problem.n_steps; ++j)
    for (int k = 0; k < problem.n_controls(); ++k) amps(j, k) = uni(rng);
  return ControlField{std::move(amps)};
}

std::string serialize_field(const ControlField& field, double dt) {
  std::ostringstream os;
  os.precision(12);
  os << "# dt_s," << dt << "\n";
  os << "step";
  for (Eigen::Index k = 0; k < field.amplitudes.cols(); ++k) os << ",u_" << (k + 1);
  os << "\n";
  for (Eigen::Index j = 0; j < field.amplitudes.rows(); ++j) {
    os << j;
    for (Eigen::Index k = 0; k < field.amplitudes.cols(); ++k)
      os << "," << field.amplitudes(j, k);
    os << "\n";
  }
  return os.str();
}

}  // namespace qsp
