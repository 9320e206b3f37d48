#include "qsp/experiments.hpp"

#include "qsp/channels.hpp"
#include "qsp/dynamics.hpp"
#include "qsp/grape.hpp"
#include "qsp/measures.hpp"
#include "qsp/qcore.hpp"
#include "qsp/sequences.hpp"
#include "qsp/tomography.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

namespace qsp {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Typed access to the flat key=value map with an allowed-key whitelist.
class Config {
 public:
  Config(std::map<std::string, std::string> kv, std::set<std::string> allowed)
      : kv_(std::move(kv)), allowed_(std::move(allowed)) {
    allowed_.insert("seed");  // accepted everywhere
    for (const auto& [key, value] : kv_)
      if (!allowed_.count(key)) throw ConfigError("unknown config key: " + key);
  }

  double get_double(const std::string& key, double def) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
      size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number: " + it->second);
    }
  }

  int get_int(const std::string& key, int def) const {
    const double v = get_double(key, static_cast<double>(def));
    const int i = static_cast<int>(v);
    if (v != static_cast<double>(i)) throw ConfigError("config key " + key + ": not an integer");
    return i;
  }

  std::string get_string(const std::string& key, const std::string& def) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> allowed_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

void write_manifest(const fs::path& out_dir, const std::string& experiment,
                    const Config& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs, double wall_time_s) {
  json manifest;
  manifest["experiment"] = experiment;
  manifest["seed"] = seed;
  manifest["config"] = config.raw();
  manifest["outputs"] = outputs;
  manifest["versions"] = {{"qsp", kVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)}};
  manifest["wall_time_s"] = wall_time_s;
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- discord_freeze --------------------------------------------------------

struct SchemeCurve {
  std::vector<double> times;
  std::vector<CorrelationTriple> corr;
  std::vector<BDCoefficients> coeffs;
};

PulseSchedule scheme_schedule(const std::string& scheme, double tau) {
  const std::vector<int> both = {1, 2};
  if (scheme == "cpmg") return cpmg_schedule(2, tau, 0.0, both);
  if (scheme == "xy4") return xy_schedule(XYVariant::XY4S, tau, both);
  if (scheme == "xy8") return xy_schedule(XYVariant::XY8S, tau, both);
  if (scheme == "xy16") return xy_schedule(XYVariant::XY16S, tau, both);
  if (scheme == "kdd") return kdd_schedule(tau, both);
  throw ConfigError("unknown DD scheme: " + scheme);
}

void run_discord_freeze(const Config& cfg, std::uint64_t seed, const fs::path& out_dir,
                        std::vector<std::string>& outputs) {
  const double c1 = cfg.get_double("c1", 1.0);
  const double c2 = cfg.get_double("c2", 0.680);
  const double c3 = cfg.get_double("c3", -0.680);
  const double gamma1 = cfg.get_double("gamma1", 3.605);
  const double gamma2 = cfg.get_double("gamma2", 3.605);
  const double t_max = cfg.get_double("t_max", 0.3);
  const int n_points = cfg.get_int("n_points", 241);
  const double tau = cfg.get_double("tau", 2e-3);
  const int n_ensemble = cfg.get_int("n_ensemble", 48);
  const double sigma_detune = cfg.get_double("sigma_detune", 10.39);
  const double gamma_floor = cfg.get_double("gamma_floor", 0.72);
  const double eps = cfg.get_double("flip_angle_error", 0.0);
  const std::vector<std::string> schemes =
      split_list(cfg.get_string("schemes", "free,cpmg,xy4,xy8,xy16,kdd"));

  const BDCoefficients c0(c1, c2, c3);
  std::map<std::string, SchemeCurve> curves;

  for (const std::string& scheme : schemes) {
    SchemeCurve curve;
    if (scheme == "free") {
      for (int i = 0; i < n_points; ++i) {
        const double t = t_max * i / (n_points - 1);
        const BDCoefficients ct = bd_evolve_closed_form(c0, gamma1, gamma2, t);
        curve.times.push_back(t);
        curve.coeffs.push_back(ct);
        curve.corr.push_back(bd_correlations(ct));
      }
    } else {
      // Two-component residual bath: static sigma_z detuning ensemble
      // (refocusable) plus a weak Markovian PD floor (not refocusable).
      const PulseSchedule schedule = scheme_schedule(scheme, tau);
      const int n_cycles =
          std::max(1, static_cast<int>(std::ceil(t_max / schedule.cycle_duration)));
      const DensityMatrix rho0 = bd_state(c0);
      std::vector<CMat> sums(n_cycles, CMat::Zero(4, 4));
      for (int e = 0; e < n_ensemble; ++e) {
        std::mt19937_64 rng(derive_seed(seed, e));
        std::normal_distribution<double> gauss(0.0, sigma_detune);
        const double d1 = gauss(rng), d2 = gauss(rng);
        const CMat hz = 0.5 * d1 * tensor_product(pauli_z(), pauli_i()) +
                        0.5 * d2 * tensor_product(pauli_i(), pauli_z());
        const Hamiltonian h(2, hz);
        auto factory = [gamma_floor](double dt) {
          return phase_damping_2q(gamma_floor, gamma_floor, dt);
        };
        const auto states = simulate_protected(
            schedule, rho0, evolver_from_hamiltonian_and_channel(h, factory), n_cycles,
            eps);
        for (int k = 0; k < n_cycles; ++k) sums[k] += states[k].mat;
      }
      curve.times.push_back(0.0);
      curve.coeffs.push_back(c0);
      curve.corr.push_back(bd_correlations(c0));
      for (int k = 0; k < n_cycles; ++k) {
        const DensityMatrix avg(2, sums[k] / static_cast<double>(n_ensemble));
        const BDCoefficients ck = bd_extract(avg);
        curve.times.push_back((k + 1) * schedule.cycle_duration);
        curve.coeffs.push_back(ck);
        curve.corr.push_back(bd_correlations(ck));
      }
    }
    curves[scheme] = std::move(curve);
  }

  std::ostringstream csv;
  csv << "t_s,scheme,total_bits,classical_bits,discord_bits\n";
  for (const std::string& scheme : schemes) {
    const SchemeCurve& curve = curves[scheme];
    for (size_t i = 0; i < curve.times.size(); ++i)
      csv << fmt_g(curve.times[i]) << "," << scheme << "," << fmt_g(curve.corr[i].total)
          << "," << fmt_g(curve.corr[i].classical) << ","
          << fmt_g(curve.corr[i].discord) << "\n";
  }
  write_file(out_dir / "discord_freeze.csv", csv.str());
  outputs.push_back("discord_freeze.csv");

  json summary;
  for (const std::string& scheme : schemes) {
    const SchemeCurve& curve = curves[scheme];
    if (scheme == "free") {
      summary["t_bar_free"] = discord_transition_time(c0, gamma1 + gamma2);
      continue;
    }
    // First sampled time where |c1| has decayed to |c3|.
    json t_bar;  // null when not reached within t_max
    for (size_t i = 0; i < curve.times.size(); ++i) {
      if (std::abs(curve.coeffs[i].c1) <= std::abs(curve.coeffs[i].c3)) {
        t_bar = curve.times[i];
        break;
      }
    }
    summary["t_bar_" + scheme] = t_bar;
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.json");
}

// ---- tripartite_decay ------------------------------------------------------

void run_tripartite_decay(const Config& cfg, std::uint64_t /*seed*/,
                          const fs::path& out_dir, std::vector<std::string>& outputs) {
  const double t_max = cfg.get_double("t_max", 0.8);
  const double grid_dt = cfg.get_double("grid_dt", 0.004);
  const double int_dt = cfg.get_double("integrator_dt", kDefaultDt);
  const double fit_t_max = cfg.get_double("fit_t_max", 0.3);
  const RelaxationParams params({cfg.get_double("t1_1", 5.42), cfg.get_double("t1_2", 5.65),
                                 cfg.get_double("t1_3", 4.36)},
                                {cfg.get_double("t2_1", 0.53), cfg.get_double("t2_2", 0.55),
                                 cfg.get_double("t2_3", 0.52)});

  struct StateTrack {
    std::string name;
    DensityMatrix (*analytic)(const RelaxationParams&, double);
    DensityMatrix rk4;
    double reported_rate;
  };
  const LindbladModel model = nmr_noise_model(params);
  std::vector<StateTrack> tracks = {
      {"ghz", &ghz_analytic, ghz_analytic(params, 0), 0},
      {"w", &w_analytic, w_analytic(params, 0), 0},
      {"wwbar", &wwbar_analytic, wwbar_analytic(params, 0), 0},
  };

  const int n_grid = static_cast<int>(std::round(t_max / grid_dt)) + 1;
  std::vector<double> times(n_grid);
  std::map<std::string, std::vector<double>> n3_analytic, n3_rk4;
  double max_dev = 0;

  std::ostringstream csv;
  csv << "t_s";
  for (const auto& tr : tracks) csv << ",n3_" << tr.name << "_analytic,n3_" << tr.name << "_rk4";
  csv << "\n";
  for (int i = 0; i < n_grid; ++i) {
    const double t = i * grid_dt;
    times[i] = t;
    csv << fmt_g(t);
    for (auto& tr : tracks) {
      const DensityMatrix ana = tr.analytic(params, t);
      if (i > 0) tr.rk4 = lindblad_evolve(model, tr.rk4, grid_dt, int_dt);
      max_dev = std::max(max_dev, (ana.mat - tr.rk4.mat).cwiseAbs().maxCoeff());
      const double na = tripartite_negativity(ana);
      const double nr = tripartite_negativity(tr.rk4);
      n3_analytic[tr.name].push_back(na);
      n3_rk4[tr.name].push_back(nr);
      csv << "," << fmt_g(na) << "," << fmt_g(nr);
    }
    csv << "\n";
  }
  write_file(out_dir / "tripartite_decay.csv", csv.str());
  outputs.push_back("tripartite_decay.csv");

  json summary;
  summary["max_analytic_rk4_deviation"] = max_dev;
  for (const auto& tr : tracks) {
    const std::vector<double>& curve = n3_analytic[tr.name];
    // Zero crossing by linear interpolation.
    json crossing;
    for (int i = 1; i < n_grid; ++i) {
      if (curve[i] <= 0 && curve[i - 1] > 0) {
        const double f = curve[i - 1] / (curve[i - 1] - curve[i]);
        crossing = times[i - 1] + f * grid_dt;
        break;
      }
    }
    summary["zero_crossing_s_" + tr.name] = crossing;
    // Exponential rate over the reporting window (positive samples only).
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < n_grid; ++i)
      if (times[i] <= fit_t_max && curve[i] > 1e-3) samples.emplace_back(times[i], curve[i]);
    const ExpFit fit = fit_exponential_decay(samples);
    summary["decay_rate_per_s_" + tr.name] = fit.rate;
    summary["fit_rms_residual_" + tr.name] = fit.residual;
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.json");
}

// ---- tomo_compare ----------------------------------------------------------

DensityMatrix named_true_state(const std::string& name) {
  if (name == "superpos_01") {
    // (|00> + |01>)/sqrt(2): the linear-inversion counterexample state.
    return DensityMatrix::pure(
        PureState(2, (basis_ket("00") + basis_ket("01")) / std::sqrt(2.0)));
  }
  if (name == "bell_phi_plus") return DensityMatrix::pure(standard_state("BELL_PHI_PLUS"));
  if (name == "singlet") return DensityMatrix::pure(standard_state("SINGLET"));
  if (name == "ghz") return DensityMatrix::pure(standard_state("GHZ_MINUS"));
  if (name == "w") return DensityMatrix::pure(standard_state("W"));
  throw ConfigError("unknown state name: " + name);
}

DensityMatrix clip_to_physical(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  lam /= lam.sum();
  CMat m = es.eigenvectors() * lam.asDiagonal().toDenseMatrix().cast<complexd>() *
           es.eigenvectors().adjoint();
  m = 0.5 * (m + m.adjoint().eval());
  return DensityMatrix(rho.n_qubits, std::move(m));
}

void run_tomo_compare(const Config& cfg, std::uint64_t seed, const fs::path& out_dir,
                      std::vector<std::string>& outputs) {
  const std::string state_name = cfg.get_string("state", "superpos_01");
  const int n_trials = cfg.get_int("n_trials", 1000);
  const double sigma = cfg.get_double("sigma", 0.05);
  const DensityMatrix truth = named_true_state(state_name);

  std::ostringstream csv;
  csv << "trial,qst_lambda_min,qst_purity,qst_f1,qst_f2,"
         "mle_lambda_min,mle_purity,mle_f1,mle_f2,mle_iterations\n";
  int qst_negative = 0, mle_negative = 0;
  double sum_qst_f1 = 0, sum_qst_f2 = 0, sum_mle_f1 = 0, sum_mle_f2 = 0;
  for (int trial = 0; trial < n_trials; ++trial) {
    const MeasurementRecord rec =
        simulate_expectations(truth, sigma, derive_seed(seed, trial));
    const DensityMatrix qst = qst_linear_inversion(rec);
    const double qst_min = qst.min_eigenvalue();
    const DensityMatrix qst_phys = clip_to_physical(qst);
    const double qst_f1 = fidelity_overlap(truth, qst);
    const double qst_f2 = fidelity_uhlmann(truth, qst_phys);
    const MleResult mle = mle_reconstruct(rec);
    const double mle_min = mle.rho.min_eigenvalue();
    const double mle_f1 = fidelity_overlap(truth, mle.rho);
    const double mle_f2 = fidelity_uhlmann(truth, mle.rho);
    if (qst_min < 0) ++qst_negative;
    if (mle_min < -1e-10) ++mle_negative;
    sum_qst_f1 += qst_f1;
    sum_qst_f2 += qst_f2;
    sum_mle_f1 += mle_f1;
    sum_mle_f2 += mle_f2;
    csv << trial << "," << fmt_g(qst_min) << "," << fmt_g(qst.purity()) << ","
        << fmt_g(qst_f1) << "," << fmt_g(qst_f2) << "," << fmt_g(mle_min) << ","
        << fmt_g(mle.rho.purity()) << "," << fmt_g(mle_f1) << "," << fmt_g(mle_f2) << ","
        << mle.iterations << "\n";
  }
  write_file(out_dir / "tomo_compare.csv", csv.str());
  outputs.push_back("tomo_compare.csv");

  json summary;
  summary["state"] = state_name;
  summary["n_trials"] = n_trials;
  summary["sigma"] = sigma;
  summary["fraction_qst_negative"] = static_cast<double>(qst_negative) / n_trials;
  summary["fraction_mle_negative"] = static_cast<double>(mle_negative) / n_trials;
  summary["mean_f1_qst"] = sum_qst_f1 / n_trials;
  summary["mean_f2_qst"] = sum_qst_f2 / n_trials;
  summary["mean_f1_mle"] = sum_mle_f1 / n_trials;
  summary["mean_f2_mle"] = sum_mle_f2 / n_trials;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.json");
}

// ---- udd_scaling -----------------------------------------------------------

// Dephasing toy model: one qubit coupled to a 4-level bath,
// H = I (x) C + sigma_z (x) Z with seeded random Hermitian C, Z, ||H|| = 1.
Hamiltonian udd_toy_hamiltonian(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_hermitian = [&](int d) {
    CMat a(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) a(r, c) = complexd(gauss(rng), gauss(rng));
    return CMat(0.5 * (a + a.adjoint().eval()));
  };
  const CMat c = random_hermitian(4), z = random_hermitian(4);
  CMat h = tensor_product(CMat::Identity(2, 2), c) + tensor_product(pauli_z(), z);
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  h /= es.eigenvalues().cwiseAbs().maxCoeff();
  return Hamiltonian(3, std::move(h));
}

DensityMatrix udd_initial_state() {
  const CVec plus = (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0);
  return DensityMatrix(
      3, tensor_product(CMat(plus * plus.adjoint()), CMat::Identity(4, 4) / 4.0));
}

// End-of-sequence infidelity of the reduced qubit state against |+>.
double udd_infidelity(const Hamiltonian& h, int n_pulses, double total_t,
                      const std::vector<double>& pulse_times) {
  const CMat pix = tensor_product(pauli_x(), CMat::Identity(4, 4));
  DensityMatrix rho = udd_initial_state();
  double at = 0;
  for (double tp : pulse_times) {
    rho = unitary_evolve(rho, h, tp - at);
    CMat m = pix * rho.mat * pix.adjoint();
    m = 0.5 * (m + m.adjoint().eval());
    rho = DensityMatrix(3, std::move(m));
    at = tp;
  }
  rho = unitary_evolve(rho, h, total_t - at);
  const DensityMatrix qubit = partial_trace(rho, {1});
  const CVec plus = (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0);
  const double fid = std::real((plus.adjoint() * qubit.mat * plus)(0, 0));
  (void)n_pulses;
  return std::max(0.0, 1.0 - fid);
}

// Leakage out of the |+> subspace after one 4-kick cycle with given intervals.
double four_kick_leakage(const Hamiltonian& h, double total_t,
                         const std::vector<double>& intervals) {
  const CVec plus2 = (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0);
  const CMat p_plus = plus2 * plus2.adjoint();
  const CMat j = tensor_product(CMat(CMat::Identity(2, 2) - 2.0 * p_plus),
                                CMat::Identity(4, 4));
  DensityMatrix rho = udd_initial_state();
  for (size_t i = 0; i < intervals.size(); ++i) {
    rho = unitary_evolve(rho, h, intervals[i] * total_t);
    if (i + 1 < intervals.size()) {
      CMat m = j * rho.mat * j.adjoint();
      m = 0.5 * (m + m.adjoint().eval());
      rho = DensityMatrix(3, std::move(m));
    }
  }
  const DensityMatrix qubit = partial_trace(rho, {1});
  const CVec minus = (basis_ket("0") - basis_ket("1")) / std::sqrt(2.0);
  return std::max(0.0, std::real((minus.adjoint() * qubit.mat * minus)(0, 0)));
}

struct SlopeFit {
  double slope = 0;
  int n_points = 0;
};

SlopeFit loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(pts.size());
  SlopeFit fit;
  fit.n_points = static_cast<int>(pts.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

void run_udd_scaling(const Config& cfg, std::uint64_t seed, const fs::path& out_dir,
                     std::vector<std::string>& outputs) {
  const int n_max = cfg.get_int("n_max", 4);
  const int n_grid = cfg.get_int("n_grid", 49);
  const double t_lo = cfg.get_double("t_lo", 0.05);
  const double t_hi = cfg.get_double("t_hi", 3.0);
  const double sz_t = cfg.get_double("super_zeno_t", 1e-2);
  const double fit_lo = cfg.get_double("fit_infidelity_lo", 1e-10);
  const double fit_hi = cfg.get_double("fit_infidelity_hi", 1e-2);
  const Hamiltonian h = udd_toy_hamiltonian(seed);

  std::ostringstream csv;
  csv << "scheme,n_pulses,t_s,infidelity\n";
  json summary;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::pair<double, double>> fit_pts;
    for (int i = 0; i < n_grid; ++i) {
      const double t =
          t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n_grid - 1));
      const double infid = udd_infidelity(h, n, t, udd_times(n, t));
      csv << "udd," << n << "," << fmt_g(t) << "," << fmt_g(infid) << "\n";
      if (infid >= fit_lo && infid <= fit_hi) fit_pts.emplace_back(t, infid);
    }
    if (fit_pts.size() >= 3) {
      const SlopeFit fit = loglog_slope(fit_pts);
      summary["slope_n" + std::to_string(n)] = fit.slope;
      summary["slope_expected_n" + std::to_string(n)] = 2 * n + 2;
      summary["slope_points_n" + std::to_string(n)] = fit.n_points;
    } else {
      summary["slope_n" + std::to_string(n)] = nullptr;
    }
  }

  // Super-Zeno vs equidistant 4-kick comparison at matched total time.
  const double beta = (3.0 - std::sqrt(5.0)) / 8.0;
  const double sz_leak =
      four_kick_leakage(h, sz_t, {beta, 0.25, 0.5 - 2 * beta, 0.25, beta});
  const double eq_leak = four_kick_leakage(h, sz_t, {0.2, 0.2, 0.2, 0.2, 0.2});
  csv << "super_zeno,4," << fmt_g(sz_t) << "," << fmt_g(sz_leak) << "\n";
  csv << "equal_spacing,4," << fmt_g(sz_t) << "," << fmt_g(eq_leak) << "\n";
  summary["super_zeno_leakage"] = sz_leak;
  summary["equal_spacing_leakage"] = eq_leak;

  write_file(out_dir / "udd_scaling.csv", csv.str());
  outputs.push_back("udd_scaling.csv");
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.json");
}

// ---- grape -----------------------------------------------------------------

void run_grape(const Config& cfg, std::uint64_t seed, const fs::path& out_dir,
               std::vector<std::string>& outputs) {
  const std::string preset = cfg.get_string("preset", "cnot");
  const int max_iter = cfg.get_int("max_iter", 500);

  GrapeOptions options;
  options.max_iter = max_iter;

  std::unique_ptr<ControlProblem> problem;
  double init_scale;
  if (preset == "not") {
    const int n_steps = cfg.get_int("n_steps", 20);
    const double total_t = cfg.get_double("total_t", 1.0);
    problem = std::make_unique<ControlProblem>(
        Hamiltonian(1, CMat::Zero(2, 2)),
        std::vector<Hamiltonian>{Hamiltonian(1, 0.5 * pauli_x()),
                                 Hamiltonian(1, 0.5 * pauli_y())},
        n_steps, total_t / n_steps, pauli_x());
    options.tol = cfg.get_double("tol", 1e-5);
    init_scale = cfg.get_double("init_scale", 1.0);
  } else if (preset == "cnot") {
    const int n_steps = cfg.get_int("n_steps", 100);
    const double j_coupling = cfg.get_double("j_coupling_hz", 50.0);
    const double total_t = cfg.get_double("total_t", 2.0 / (2.0 * j_coupling));
    const CMat zz = tensor_product(pauli_z(), pauli_z());
    problem = std::make_unique<ControlProblem>(
        Hamiltonian(2, 2.0 * kPi * j_coupling * 0.25 * zz),
        std::vector<Hamiltonian>{
            Hamiltonian(2, 0.5 * tensor_product(pauli_x(), pauli_i())),
            Hamiltonian(2, 0.5 * tensor_product(pauli_y(), pauli_i())),
            Hamiltonian(2, 0.5 * tensor_product(pauli_i(), pauli_x())),
            Hamiltonian(2, 0.5 * tensor_product(pauli_i(), pauli_y()))},
        n_steps, total_t / n_steps, gate_cnot(1, 2));
    options.tol = cfg.get_double("tol", 1e-3);
    init_scale = cfg.get_double("init_scale", 2.0 * kPi * 5.0);
  } else {
    throw ConfigError("unknown grape preset: " + preset);
  }

  const ControlField init = random_field(*problem, init_scale, derive_seed(seed, 0));
  const GrapeResult result = grape_optimize(*problem, init, options);

  write_file(out_dir / "control_field.csv", serialize_field(result.field, problem->dt));
  outputs.push_back("control_field.csv");

  json summary;
  summary["preset"] = preset;
  summary["final_fidelity"] = result.final_fidelity;
  summary["iterations"] = result.iterations;
  summary["converged"] = result.converged;
  summary["fidelity_trace"] = result.fidelity_trace;
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  outputs.push_back("summary.json");

  if (!result.converged)
    throw ConvergenceError("grape " + preset + " did not reach fidelity target (" +
                           fmt_g(result.final_fidelity) + ")");
}

const std::map<std::string, std::set<std::string>>& experiment_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"discord_freeze",
       {"c1", "c2", "c3", "gamma1", "gamma2", "t_max", "n_points", "tau", "n_ensemble",
        "sigma_detune", "gamma_floor", "flip_angle_error", "schemes"}},
      {"tripartite_decay",
       {"t_max", "grid_dt", "integrator_dt", "fit_t_max", "t1_1", "t1_2", "t1_3", "t2_1",
        "t2_2", "t2_3"}},
      {"tomo_compare", {"state", "n_trials", "sigma"}},
      {"udd_scaling",
       {"n_max", "n_grid", "t_lo", "t_hi", "super_zeno_t", "fit_infidelity_lo",
        "fit_infidelity_hi"}},
      {"grape",
       {"preset", "max_iter", "tol", "n_steps", "total_t", "j_coupling_hz", "init_scale"}},
  };
  return keys;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 on the combined words: independent per-trial streams.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void run_experiment(const std::string& name,
                    const std::map<std::string, std::string>& config,
                    std::uint64_t seed, const std::string& out_dir) {
  const auto& keys = experiment_keys();
  const auto it = keys.find(name);
  if (it == keys.end()) throw ConfigError("unknown experiment: " + name);
  const Config cfg(config, it->second);

  const fs::path out(out_dir);
  fs::create_directories(out);
  std::vector<std::string> outputs;
  const auto start = std::chrono::steady_clock::now();

  if (name == "discord_freeze") run_discord_freeze(cfg, seed, out, outputs);
  else if (name == "tripartite_decay") run_tripartite_decay(cfg, seed, out, outputs);
  else if (name == "tomo_compare") run_tomo_compare(cfg, seed, out, outputs);
  else if (name == "udd_scaling") run_udd_scaling(cfg, seed, out, outputs);
  else run_grape(cfg, seed, out, outputs);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, name, cfg, seed, outputs, wall);
}

std::string experiment_help(const std::string& name) {
  const auto& keys = experiment_keys();
  const auto it = keys.find(name);
  if (it == keys.end()) return "";
  std::string out = "config keys: ";
  bool first = true;
  for (const std::string& k : it->second) {
    if (!first) out += ", ";
    out += k;
    first = false;
  }
  return out;
}

}  // namespace qsp
