// Acceptance suite: one criterion per --only index, one [PASS]/[FAIL] line
// each, with the measured figure of merit and its pinned tolerance.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbm/monitored.hpp"
#include "qbm/oracle.hpp"
#include "qbm/runner.hpp"

using namespace qbm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

OscillatorParams cold() {
  OscillatorParams p;
  p.temperature = 0.1;
  return p;
}

double sigma_gs(const OscillatorParams& p) { return 0.5 * p.ground_state_width(); }

MeasurementProtocol protocol(double sigma, double x0, double tau, int n) {
  MeasurementProtocol m;
  m.slit_width = sigma;
  m.first_outcome = x0;
  m.spacing = tau;
  m.intermediate_count = n;
  return m;
}

// Count of nonselective measurements strictly before t_bar at spacing tau.
int count_at(double t_bar, double tau) {
  if (tau <= 0.0 || t_bar <= tau) return 0;
  return static_cast<int>(std::ceil(t_bar / tau)) - 1;
}

double monitored_variance(double t_bar, double sigma, double tau, const CorrelatorSet& corr) {
  MeasurementProtocol m = protocol(sigma, 0.0, tau, count_at(t_bar, tau));
  return conditional_variance(t_bar, m, corr);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --- criterion 1: exact variance approaches the long-time closed form ------

bool crit_asymptotic(std::string& detail) {
  const OscillatorParams p = cold();
  const double sigma = sigma_gs(p);
  double worst = 0.0;
  for (double gamma : {0.2, 0.5, 1.0}) {
    const CorrelatorSet corr = CorrelatorSet::position(p, BathSpec::ohmic(gamma));
    for (double mu : {8.0, 16.0}) {
      const double tau = kTwoPi / mu;
      const double t_bar = 200.0 / gamma;
      const double exact = monitored_variance(t_bar, sigma, tau, corr);
      const double limit =
          asymptotic_variance(protocol(sigma, 0.0, tau, 0), corr);
      worst = std::max(worst, std::abs(exact - limit) / limit);
    }
  }
  detail = "max rel deviation " + fmt(worst) + " (tol 0.03)";
  return worst <= 0.03;
}

// --- criterion 2: frictionless diffusion slope ------------------------------

double fitted_slope(double mu, const OscillatorParams& p, const CorrelatorSet& corr) {
  const double sigma = sigma_gs(p);
  const double tau = kTwoPi / mu;
  const int samples = 400;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = 10.0 * kTwoPi + (50.0 * kTwoPi) * i / (samples - 1);
    const double v = monitored_variance(t, sigma, tau, corr);
    sx += t;
    sy += v;
    sxx += t * t;
    sxy += t * v;
  }
  return (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
}

bool crit_frictionless(std::string& detail) {
  const OscillatorParams p = cold();
  const double sigma = sigma_gs(p);
  const CorrelatorSet corr = CorrelatorSet::position(p, BathSpec::none());
  const double slope16 = fitted_slope(16.0, p, corr);
  const double slope8 = fitted_slope(8.0, p, corr);
  const double tau16 = kTwoPi / 16.0;
  const double expected = p.hbar * p.hbar /
                          (8.0 * tau16 * sigma * sigma * p.mass * p.mass * p.omega0 * p.omega0);
  const double rel = std::abs(slope16 - expected) / expected;
  const double ratio = slope16 / slope8;
  detail = "slope rel err " + fmt(rel) + " (tol 0.02), mu-doubling ratio " + fmt(ratio) +
           " (2.00 +- 0.02)";
  return rel <= 0.02 && std::abs(ratio - 2.0) <= 0.02;
}

// --- criterion 3: quadrature oracle reproduces the two-point density --------

bool oracle_case(int n, double gamma, double& worst_rel) {
  const OscillatorParams p = cold();
  const double sigma = sigma_gs(p);
  const double tau = kTwoPi / 8.0;
  const double t_bar = n * tau + 0.6 * tau;
  const BathSpec bath = gamma > 0.0 ? BathSpec::ohmic(gamma) : BathSpec::none();
  const CorrelatorSet corr = CorrelatorSet::position(p, bath, SeriesControl::adaptive(1e-13));
  const MeasurementProtocol m = protocol(sigma, 0.0, tau, n);
  const JointTwoPoint joint = joint_gaussian(t_bar, m, corr);

  // k-grid design from the closed-form covariance: the characteristic
  // function decays along its smallest eigenvalue; the alias period per axis
  // must clear the x window plus the density's own decay width.
  const double trace = joint.zeta0_sq + joint.zeta_sq;
  const double det = joint.determinant();
  const double lmin = 0.5 * (trace - std::sqrt(trace * trace - 4.0 * det));
  const double k_max = std::sqrt(96.0 / lmin);
  const double sd0 = std::sqrt(joint.zeta0_sq), sdf = std::sqrt(joint.zeta_sq);
  const double dk0 = kTwoPi / (16.0 * sd0), dkf = kTwoPi / (16.0 * sdf);
  const int n0 = 2 * static_cast<int>(std::ceil(k_max / dk0)) + 1;
  const int nf = 2 * static_cast<int>(std::ceil(k_max / dkf)) + 1;

  Eigen::VectorXd times(n + 2);
  for (int j = 0; j <= n; ++j) times[j] = j * tau;
  times[n + 1] = t_bar;
  const oracle::CharFunctionEvaluator phi_of(times, sigma, corr);

  // phi(-k) = conj(phi(k)) for a real density: evaluate the upper half-plane
  // of the centered grid and mirror the rest.
  Eigen::VectorXd wavenumbers = Eigen::VectorXd::Zero(n + 2);
  Eigen::MatrixXcd phi(n0, nf);
  for (int a = 0; a < n0; ++a) {
    wavenumbers[0] = (a - n0 / 2) * dk0;
    for (int b = 0; b < nf; ++b) {
      if (b < nf / 2 || (b == nf / 2 && a < n0 / 2)) continue;
      wavenumbers[n + 1] = (b - nf / 2) * dkf;
      phi(a, b) = phi_of(wavenumbers);
    }
  }
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < nf; ++b)
      if (b < nf / 2 || (b == nf / 2 && a < n0 / 2))
        phi(a, b) = std::conj(phi(n0 - 1 - a, nf - 1 - b));

  const double peak = 1.0 / (kTwoPi * std::sqrt(det));
  const int grid = 21;
  for (int i = 0; i < grid; ++i) {
    const double x0 = -6.2 * sd0 + 12.4 * sd0 * i / (grid - 1);
    Eigen::VectorXcd partial = Eigen::VectorXcd::Zero(nf);
    for (int a = 0; a < n0; ++a) {
      const double k0 = (a - n0 / 2) * dk0;
      partial += phi.row(a).transpose() * std::polar(1.0, -k0 * x0);
    }
    for (int j = 0; j < grid; ++j) {
      const double xf = -6.2 * sdf + 12.4 * sdf * j / (grid - 1);
      std::complex<double> acc = 0.0;
      for (int b = 0; b < nf; ++b)
        acc += partial[b] * std::polar(1.0, -(b - nf / 2) * dkf * xf);
      const double numeric = acc.real() * dk0 * dkf / (kTwoPi * kTwoPi);
      const double reference = joint_two_point(x0, xf, t_bar, m, corr);
      if (reference < 1e-8 * peak) continue;
      worst_rel = std::max(worst_rel, std::abs(numeric - reference) / reference);
    }
  }
  return true;
}

bool crit_oracle(std::string& detail) {
  double worst = 0.0;
  for (int n : {0, 1, 2})
    for (double gamma : {0.0, 0.2}) oracle_case(n, gamma, worst);
  detail = "max rel error " + fmt(worst) + " where density >= 1e-8 peak (tol 1e-6)";
  return worst <= 1e-6;
}

// --- criterion 4: conditional mean ignores intermediate measurements --------

bool crit_mean_invariance(std::string& detail) {
  int combos = 0;
  for (double gamma : {0.0, 0.2, 1.0}) {
    for (double temperature : {0.1, 1.0, 10.0}) {
      OscillatorParams p;
      p.temperature = temperature;
      const CorrelatorSet corr =
          CorrelatorSet::position(p, gamma > 0.0 ? BathSpec::ohmic(gamma) : BathSpec::none());
      const double sigma = sigma_gs(p);
      const double t_bar = 5.0;
      double reference = 0.0;
      bool first = true;
      for (int n : {0, 5, 50}) {
        const double tau = n > 0 ? t_bar / (n + 0.5) : 1.0;
        const double mean =
            conditional_mean(t_bar, protocol(sigma, -1.3 * p.ground_state_width(), tau, n), corr);
        if (first) {
          reference = mean;
          first = false;
        } else if (mean != reference) {
          detail = "mean differs across n at gamma=" + fmt(gamma) + ", T=" + fmt(temperature);
          return false;
        }
      }
      ++combos;
    }
  }
  detail = "bitwise identical across n in {0, 5, 50} for all " + std::to_string(combos) +
           " (gamma, T) combinations";
  return true;
}

// --- criterion 5: momentum kernels are -M^2 d^2/dt^2 of position kernels ----

bool crit_duality(std::string& detail) {
  const OscillatorParams p = cold();
  const BathSpec bath = BathSpec::drude(0.2, 100.0);
  const SeriesControl deep = SeriesControl::adaptive(1e-14, 60000);
  const double m2 = p.mass * p.mass;

  auto s_pos = [&](double t) { return drude_position_s(t, p, bath, deep).value; };
  auto a_pos = [&](double t) { return drude_position_a(t, p, bath); };

  std::vector<double> ts;
  for (int i = 0; i < 40; ++i) ts.push_back(0.5 + 0.5 * i);

  double s_scale = 0.0, a_scale = 0.0;
  std::vector<double> s_ref(ts.size()), a_ref(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    s_ref[i] = drude_momentum_s(ts[i], p, bath, deep).value;
    a_ref[i] = drude_momentum_a(ts[i], p, bath);
    s_scale = std::max(s_scale, std::abs(s_ref[i]));
    a_scale = std::max(a_scale, std::abs(a_ref[i]));
  }

  double worst = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double s_num = -m2 * oracle::second_derivative(s_pos, ts[i], 1e-2);
    const double a_num = -m2 * oracle::second_derivative(a_pos, ts[i], 1e-2);
    worst = std::max(worst,
                     std::abs(s_num - s_ref[i]) / std::max(std::abs(s_ref[i]), 0.01 * s_scale));
    worst = std::max(worst,
                     std::abs(a_num - a_ref[i]) / std::max(std::abs(a_ref[i]), 0.01 * a_scale));
  }
  detail =
      "max rel error " + fmt(worst) + " (tol 1e-6, relative to max(|ref|, 0.01 sup|ref|))";
  return worst <= 1e-6;
}

// --- criterion 6: Drude kernels approach the Ohmic ones as the cutoff grows -

bool crit_cutoff_convergence(std::string& detail) {
  const OscillatorParams p = cold();
  const BathSpec ohmic = BathSpec::ohmic(0.2);
  const SeriesControl ctrl = SeriesControl::adaptive(1e-12, 50000);

  std::vector<double> t_grid;
  for (int i = 0; i <= 200; ++i) t_grid.push_back(20.0 * i / 200.0);

  std::vector<double> s_ohmic(t_grid.size()), a_ohmic(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    s_ohmic[i] = ohmic_position_s(t_grid[i], p, ohmic, ctrl).value;
    a_ohmic[i] = ohmic_position_a(t_grid[i], p, ohmic);
  }
  const double s0 = s_ohmic[0];

  double prev = std::numeric_limits<double>::infinity();
  double sup_at_100 = 0.0;
  bool monotone = true;
  std::string sups;
  for (double cutoff : {50.0, 100.0, 200.0, 400.0}) {
    const BathSpec drude = BathSpec::drude(0.2, cutoff);
    double sup = 0.0;
    for (size_t i = 0; i < t_grid.size(); ++i) {
      sup = std::max(sup, std::abs(drude_position_s(t_grid[i], p, drude, ctrl).value - s_ohmic[i]));
      sup = std::max(sup, std::abs(drude_position_a(t_grid[i], p, drude) - a_ohmic[i]));
    }
    if (sup >= prev) monotone = false;
    if (cutoff == 100.0) sup_at_100 = sup;
    prev = sup;
    sups += (sups.empty() ? "" : ", ") + fmt(sup);
  }
  const double rel_100 = sup_at_100 / s0;
  detail = "sup-norm gaps [" + sups + "] over cutoff {50,100,200,400}, at 100: " +
           fmt(rel_100) + " of S(0) (tol 1e-2)";
  return monotone && rel_100 <= 1e-2;
}

// --- criterion 7: random-sweep structural invariants -------------------------

bool crit_invariants(std::string& detail) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> un(0, 20);

  double worst_norm = 0.0;
  for (int sample = 0; sample < 1000; ++sample) {
    OscillatorParams p;
    p.temperature = std::pow(10.0, -1.3 + 2.3 * u01(rng));  // 0.05..10
    const double gamma = sample % 10 == 0 ? 0.0 : 1.8 * u01(rng);
    const BathSpec bath = gamma > 0.0 ? BathSpec::ohmic(gamma) : BathSpec::none();
    const CorrelatorSet corr = CorrelatorSet::position(p, bath);

    const double sigma = (0.1 + 1.9 * u01(rng)) * p.ground_state_width();
    const double tau = 0.1 + 1.9 * u01(rng);
    const int n = un(rng);
    const double t_bar = n * tau + u01(rng) * tau;
    const double x0 = (u01(rng) - 0.5) * 6.0 * std::sqrt(corr.S0() + sigma * sigma);
    const MeasurementProtocol m = protocol(sigma, x0, tau, n);

    const JointTwoPoint joint = joint_gaussian(t_bar, m, corr);
    if (!(joint.determinant() > 0.0)) {
      detail = "non-positive covariance determinant at sample " + std::to_string(sample);
      return false;
    }
    const ConditionalGaussian g = conditional_gaussian(t_bar, m, corr);
    if (!(g.variance > 0.0)) {
      detail = "non-positive conditional variance at sample " + std::to_string(sample);
      return false;
    }
    const double t_probe = 30.0 * u01(rng);
    if (std::abs(corr.S(t_probe)) > corr.S0() * (1.0 + 1e-9)) {
      detail = "|S(t)| exceeds S(0) at sample " + std::to_string(sample);
      return false;
    }

    const double sd = std::sqrt(g.variance);
    const int points = 1601;
    Eigen::VectorXd x(points), density(points);
    for (int i = 0; i < points; ++i) {
      x[i] = g.mean - 8.0 * sd + 16.0 * sd * i / (points - 1);
      density[i] = conditional_density(x[i], t_bar, m, corr);
    }
    const double mass = oracle::quadrature_marginalize(x, density, g.mean, sd);
    worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
  }
  detail =
      "1000 samples: det > 0, variance > 0, |S| bound hold; max |norm - 1| = " +
      fmt(worst_norm) + " (tol 1e-8)";
  return worst_norm <= 1e-8;
}

// --- criterion 8: figure truncations vs a converged sum ----------------------

bool crit_truncation(std::string& detail) {
  const OscillatorParams p = cold();
  double worst = 0.0, worst_t = 0.0, worst_gamma = 0.0;
  for (double gamma : {0.2, 1.0}) {
    const BathSpec bath = BathSpec::ohmic(gamma);
    for (int i = 0; i < 600; ++i) {
      const double t = 12.0 * kTwoPi * i / 599.0;
      const double s150 = ohmic_position_s(t, p, bath, SeriesControl::fixed(150)).value;
      const double s2000 = ohmic_position_s(t, p, bath, SeriesControl::fixed(2000)).value;
      const double adaptive = ohmic_position_s(t, p, bath, SeriesControl::adaptive(1e-10)).value;
      const double rel = std::max(std::abs(s150 - adaptive), std::abs(s2000 - adaptive)) /
                         std::abs(adaptive);
      if (rel > worst) {
        worst = rel;
        worst_t = t;
        worst_gamma = gamma;
      }
    }
  }
  detail = "max rel spread " + fmt(worst) + " at t = " + fmt(worst_t) + ", gamma = " +
           fmt(worst_gamma) + " (tol 1e-6)";
  return worst <= 1e-6;
}

// --- criterion 9: faster monitoring never narrows the spread -----------------

bool crit_monotonic_rate(std::string& detail) {
  const OscillatorParams p = cold();
  const double sigma = sigma_gs(p);
  const double t_bar = 6.0 * kTwoPi;
  for (double gamma : {0.0, 0.2, 1.0}) {
    const CorrelatorSet corr =
        CorrelatorSet::position(p, gamma > 0.0 ? BathSpec::ohmic(gamma) : BathSpec::none());
    double prev = -1.0;
    for (double mu : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double var = monitored_variance(t_bar, sigma, kTwoPi / mu, corr);
      if (var < prev) {
        detail = "variance decreased from mu = " + fmt(mu / 2) + " to " + fmt(mu) +
                 " at gamma = " + fmt(gamma);
        return false;
      }
      prev = var;
    }
  }
  detail = "variance non-decreasing in mu over {1,2,4,8,16} for gamma in {0, 0.2, 1.0}";
  return true;
}

// --- criterion 10: CLI byte determinism --------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool crit_cli_determinism(std::string& detail) {
  const char* cli = std::getenv("QBM_CLI");
  const char* config_dir = std::getenv("QBM_CONFIG_DIR");
  if (!cli || !config_dir) {
    detail = "QBM_CLI / QBM_CONFIG_DIR not set";
    return false;
  }
  const std::string config = std::string(config_dir) + "/fig4_variance.json";
  for (int run = 1; run <= 2; ++run) {
    const std::string cmd = std::string(cli) + " variance --config " + config +
                            " --threads 2 --out acceptance10_run" + std::to_string(run) +
                            ".csv";
    if (std::system(cmd.c_str()) != 0) {
      detail = "CLI run " + std::to_string(run) + " failed";
      return false;
    }
  }
  const std::string a = slurp("acceptance10_run1.csv");
  const std::string b = slurp("acceptance10_run2.csv");
  std::remove("acceptance10_run1.csv");
  std::remove("acceptance10_run2.csv");
  if (a.empty() || a != b) {
    detail = "outputs differ or are empty (" + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()) + " bytes)";
    return false;
  }
  detail = "two runs byte-identical (" + std::to_string(a.size()) + " bytes)";
  return true;
}

struct Criterion {
  const char* name;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {"asymptotic variance agreement", crit_asymptotic},
    {"frictionless diffusion slope", crit_frictionless},
    {"oracle equivalence", crit_oracle},
    {"conditional-mean n-invariance", crit_mean_invariance},
    {"momentum/position derivative duality", crit_duality},
    {"cutoff convergence to the Ohmic kernel", crit_cutoff_convergence},
    {"Gaussian structural invariants", crit_invariants},
    {"truncation reproducibility", crit_truncation},
    {"monitoring-rate monotonicity", crit_monotonic_rate},
    {"CLI determinism", crit_cli_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::cerr << "criterion index must be in 1..10\n";
    return 2;
  }

  bool all_pass = true;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = kCriteria[i - 1].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << i << " ("
              << kCriteria[i - 1].name << "): " << detail << '\n';
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
