#include "qbm/correlators.hpp"

#include <cmath>
#include <numbers>

namespace qbm {
namespace {

// Thermal ratios shared by the Ohmic and Drude closed forms,
//   r1 = [sinh(a)*c + sin(b)*s] / [cosh(a) - cos(b)]
//   r2 = [sin(b)*c - sinh(a)*s] / [cosh(a) - cos(b)]
// evaluated with numerator and denominator scaled by 2*exp(-a) so that large
// inverse temperatures (a = beta*hbar*omega ~ 1e3 and beyond) do not overflow.
struct ThermalRatios {
  double r1;
  double r2;
};

ThermalRatios thermal_ratios(double a, double b, double c, double s) {
  const double e = std::exp(-a);
  const double den = 1.0 + e * e - 2.0 * e * std::cos(b);
  const double sinh2e = 1.0 - e * e;       // 2*exp(-a)*sinh(a)
  const double sin2e = 2.0 * e * std::sin(b);  // 2*exp(-a)*sin(b)
  return {(sinh2e * c + sin2e * s) / den, (sin2e * c - sinh2e * s) / den};
}

template <typename TermFn>
SeriesResult sum_matsubara(const SeriesControl& ctrl, TermFn&& term) {
  ctrl.validate();
  SeriesResult r;
  r.converged = (ctrl.mode == SeriesMode::FixedCount);
  double sum = 0.0;
  for (int n = 1; n <= ctrl.max_terms; ++n) {
    const double tn = term(n);
    sum += tn;
    r.terms_used = n;
    if (ctrl.mode == SeriesMode::Adaptive &&
        std::abs(tn) <= ctrl.relative_tolerance * std::abs(sum)) {
      r.converged = true;
      break;
    }
  }
  r.value = sum;
  return r;
}

void require_position_bath(const BathSpec& bath, BathKind wanted, const char* fn) {
  if (bath.kind != wanted)
    throw DomainError(std::string(fn) + ": bath kind does not match this correlator");
}

// Free-oscillator (gamma = 0) closed forms. coth(beta*hbar*omega0/2) is
// evaluated as (1+e)/(1-e) with e = exp(-beta*hbar*omega0), stable for all T.
double free_coth_half(const OscillatorParams& p) {
  const double e = std::exp(-p.beta() * p.hbar * p.omega0);
  return (1.0 + e) / (1.0 - e);
}

double free_position_s(double t, const OscillatorParams& p) {
  return p.hbar / (2.0 * p.mass * p.omega0) * free_coth_half(p) * std::cos(p.omega0 * t);
}

double free_momentum_s(double t, const OscillatorParams& p) {
  return p.mass * p.hbar * p.omega0 / 2.0 * free_coth_half(p) * std::cos(p.omega0 * t);
}

double free_momentum_a(double t, const OscillatorParams& p) {
  return -p.mass * p.hbar * p.omega0 / 2.0 * std::sin(p.omega0 * t);
}

}  // namespace

SeriesResult ohmic_position_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl) {
  params.validate();
  bath.validate(params);
  if (bath.kind == BathKind::Drude)
    throw DomainError("ohmic_position_s: use drude_position_s for a Drude bath");

  const double at = std::abs(t);
  if (bath.kind == BathKind::None) {
    SeriesResult r;
    r.value = free_position_s(at, params);
    return r;
  }

  const double gamma = bath.gamma;
  const double wr = bath.effective_frequency(params);
  const double beta = params.beta();
  const double hbar = params.hbar;
  const double w0 = params.omega0;

  const ThermalRatios tr = thermal_ratios(beta * hbar * wr, beta * hbar * gamma / 2.0,
                                          std::cos(wr * at), std::sin(wr * at));
  const double resonant =
      hbar / (2.0 * params.mass * wr) * std::exp(-gamma * at / 2.0) * tr.r1;

  const double nu1 = matsubara_frequency(1, params);
  SeriesResult r = sum_matsubara(ctrl, [&](int n) {
    const double nu = nu1 * n;
    const double den = (nu * nu + w0 * w0) * (nu * nu + w0 * w0) - gamma * gamma * nu * nu;
    return nu * std::exp(-nu * at) / den;
  });
  r.value = resonant - 2.0 * gamma / (params.mass * beta) * r.value;
  return r;
}

double ohmic_position_a(double t, const OscillatorParams& params, const BathSpec& bath) {
  params.validate();
  bath.validate(params);
  if (bath.kind == BathKind::Drude)
    throw DomainError("ohmic_position_a: use drude_position_a for a Drude bath");
  const double wr =
      bath.kind == BathKind::None ? params.omega0 : bath.effective_frequency(params);
  const double at = std::abs(t);
  const double mag = -params.hbar / (2.0 * params.mass * wr) * std::sin(wr * at) *
                     std::exp(-bath.gamma * at / 2.0);
  return t < 0.0 ? -mag : mag;
}

DrudeCoefficients drude_coefficients(const OscillatorParams& params, const BathSpec& bath) {
  params.validate();
  bath.validate(params);
  require_position_bath(bath, BathKind::Drude, "drude_coefficients");

  const double w0 = params.omega0;
  const double w0sq = w0 * w0;
  const double gamma = bath.gamma;
  const double wd = bath.drude_cutoff;

  // delta is the real root of  d^3 - wd*d^2 + (w0^2 + gamma*wd)*d - w0^2*wd = 0
  // (the other two roots are alpha +- i*eta). Newton, seeded with the
  // first-order-in-gamma/wd approximation.
  const double alpha0 = gamma / 2.0 * wd * wd / (wd * wd + w0sq);
  double d = wd - 2.0 * alpha0;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double f = ((d - wd) * d + (w0sq + gamma * wd)) * d - w0sq * wd;
    const double fp = (3.0 * d - 2.0 * wd) * d + w0sq + gamma * wd;
    const double step = f / fp;
    d -= step;
    if (std::abs(step) <= 1e-16 * std::abs(d)) {
      converged = true;
      break;
    }
  }

  DrudeCoefficients c;
  c.delta = d;
  c.alpha = (wd - d) / 2.0;
  const double eta_sq = w0sq * wd / d - c.alpha * c.alpha;
  if (!converged || !(d > 0.0) || !(eta_sq > 0.0))
    throw UnsupportedRegimeError(
        "drude_coefficients: no real positive mode decomposition for these parameters");
  c.eta = std::sqrt(eta_sq);

  const double r1 = std::abs(2.0 * c.alpha + c.delta - wd) / wd;
  const double r2 =
      std::abs(c.alpha * c.alpha + c.eta * c.eta - w0sq * wd / c.delta) / (w0sq * wd / c.delta);
  const double r3 = std::abs(c.alpha * c.alpha + c.eta * c.eta + 2.0 * c.alpha * c.delta -
                             (w0sq + gamma * wd)) /
                    (w0sq + gamma * wd);
  if (r1 > 1e-12 || r2 > 1e-12 || r3 > 1e-12)
    throw UnsupportedRegimeError("drude_coefficients: defining relations not satisfied "
                                 "to 1e-12 relative residual");
  return c;
}

namespace {

// Matsubara summand building blocks for the Drude correlators. Each term is
//   [f(nu_n) - f(delta)] * wd^2 / (delta^2 - nu_n^2)
// with f(x) = x^pow * exp(-x*t) / D(x), D(x) = (x^2+c2)^2 - 4*alpha^2*x^2.
// The bracket vanishes at nu_n = delta, so near resonance the term is
// evaluated by a first-order expansion around the removable singularity.
struct DrudeSum {
  double t, alpha, delta, c2, wd;
  int pow;  // 1 for position, 3 for momentum

  double D(double x) const {
    const double u = x * x + c2;
    return u * u - 4.0 * alpha * alpha * x * x;
  }
  double Dp(double x) const { return 4.0 * x * (x * x + c2 - 2.0 * alpha * alpha); }
  double Dpp(double x) const { return 12.0 * x * x + 4.0 * c2 - 8.0 * alpha * alpha; }

  double f(double x) const {
    return std::pow(x, pow) * std::exp(-x * t) / D(x);
  }
  // f'/f and (f'/f)' for the log-derivative form of f' and f''.
  double fp(double x) const { return f(x) * (pow / x - t - Dp(x) / D(x)); }
  double fpp(double x) const {
    const double d = D(x), dp = Dp(x);
    const double l1 = pow / x - t - dp / d;
    const double l2 = -pow / (x * x) - (Dpp(x) * d - dp * dp) / (d * d);
    return f(x) * (l1 * l1 + l2);
  }

  double term(double nu) const {
    if (std::abs(nu - delta) / delta < 1e-8) {
      // bracket ~ f'(delta)*(nu-delta) + f''(delta)*(nu-delta)^2/2, and
      // delta^2 - nu^2 = -(nu-delta)*(nu+delta)
      return -(fp(delta) + 0.5 * fpp(delta) * (nu - delta)) * wd * wd / (nu + delta);
    }
    return (f(nu) - f(delta)) * wd * wd / (delta * delta - nu * nu);
  }
};

}  // namespace

SeriesResult drude_position_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl) {
  params.validate();
  bath.validate(params);
  require_position_bath(bath, BathKind::Drude, "drude_position_s");

  const double at = std::abs(t);
  const DrudeCoefficients c = drude_coefficients(params, bath);
  const double alpha = c.alpha, eta = c.eta, delta = c.delta;
  const double beta = params.beta();
  const double hbar = params.hbar;
  const double mass = params.mass;
  const double q = (alpha - delta) * (alpha - delta) + eta * eta;

  const ThermalRatios tr = thermal_ratios(beta * hbar * eta, beta * hbar * alpha,
                                          std::cos(eta * at), std::sin(eta * at));
  const double resonant =
      hbar / (2.0 * mass * eta) * std::exp(-alpha * at) *
      ((delta * delta - alpha * alpha + eta * eta) / q * tr.r1 - 2.0 * eta * alpha / q * tr.r2);
  const double relax = 2.0 * alpha / (mass * beta) * std::exp(-delta * at) / (delta * q);

  const DrudeSum sum{at, alpha, delta, alpha * alpha + eta * eta, bath.drude_cutoff, 1};
  const double nu1 = matsubara_frequency(1, params);
  SeriesResult r = sum_matsubara(ctrl, [&](int n) { return sum.term(nu1 * n); });
  r.value = resonant + relax - 2.0 * bath.gamma / (mass * beta) * r.value;
  return r;
}

double drude_position_a(double t, const OscillatorParams& params, const BathSpec& bath) {
  params.validate();
  bath.validate(params);
  require_position_bath(bath, BathKind::Drude, "drude_position_a");

  const double at = std::abs(t);
  const DrudeCoefficients c = drude_coefficients(params, bath);
  const double alpha = c.alpha, eta = c.eta, delta = c.delta;
  const double q = (alpha - delta) * (alpha - delta) + eta * eta;
  const double ea = std::exp(-alpha * at);
  const double mag =
      -params.hbar / (2.0 * params.mass * eta) *
      (2.0 * alpha * eta * (std::exp(-delta * at) - std::cos(eta * at) * ea) / q +
       (delta * delta - alpha * alpha + eta * eta) * ea * std::sin(eta * at) / q);
  return t < 0.0 ? -mag : mag;
}

SeriesResult drude_momentum_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl) {
  params.validate();
  bath.validate(params);
  if (bath.kind == BathKind::Ohmic)
    throw UnsupportedObservableError(
        "drude_momentum_s: momentum correlators diverge for a strictly Ohmic bath; "
        "use a Drude cutoff");
  const double at = std::abs(t);
  if (bath.kind == BathKind::None || bath.gamma == 0.0) {
    SeriesResult r;
    r.value = free_momentum_s(at, params);
    return r;
  }

  const DrudeCoefficients c = drude_coefficients(params, bath);
  const double alpha = c.alpha, eta = c.eta, delta = c.delta;
  const double beta = params.beta();
  const double hbar = params.hbar;
  const double mass = params.mass;
  const double q = (alpha - delta) * (alpha - delta) + eta * eta;
  const double big = delta * delta - alpha * alpha + eta * eta;

  // the ratio [sin(b)*sin + sinh(a)*cos]/[cosh(a)-cos(b)] in the second block
  // coincides with r1, so two ratios suffice
  const ThermalRatios tr = thermal_ratios(beta * hbar * eta, beta * hbar * alpha,
                                          std::cos(eta * at), std::sin(eta * at));
  const double ea = std::exp(-alpha * at);

  const double block1 = hbar * mass / (2.0 * eta) * (eta * eta - alpha * alpha) * ea *
                        (big / q * tr.r1 - 2.0 * alpha * eta / q * tr.r2);
  const double block2 =
      hbar * mass * alpha * ea * (big / q * tr.r2 + 2.0 * alpha * eta / q * tr.r1);
  const double relax = -2.0 * mass * alpha / beta * delta * std::exp(-delta * at) / q;

  const DrudeSum sum{at, alpha, delta, alpha * alpha + eta * eta, bath.drude_cutoff, 3};
  const double nu1 = matsubara_frequency(1, params);
  SeriesResult r = sum_matsubara(ctrl, [&](int n) { return sum.term(nu1 * n); });
  r.value = block1 + block2 + relax + 2.0 * mass * bath.gamma / beta * r.value;
  return r;
}

double drude_momentum_a(double t, const OscillatorParams& params, const BathSpec& bath) {
  params.validate();
  bath.validate(params);
  if (bath.kind == BathKind::Ohmic)
    throw UnsupportedObservableError(
        "drude_momentum_a: momentum correlators require a Drude cutoff or gamma == 0");
  if (t == 0.0) return 0.0;  // the closed form cancels only to roundoff here
  const double at = std::abs(t);
  double mag;
  if (bath.kind == BathKind::None || bath.gamma == 0.0) {
    mag = free_momentum_a(at, params);
  } else {
    const DrudeCoefficients c = drude_coefficients(params, bath);
    const double alpha = c.alpha, eta = c.eta, delta = c.delta;
    const double q = (alpha - delta) * (alpha - delta) + eta * eta;
    const double ea = std::exp(-alpha * at);
    const double ce = std::cos(eta * at), se = std::sin(eta * at);
    mag = params.hbar * params.mass / (2.0 * eta) *
          (2.0 * alpha * eta / q *
               (delta * delta * std::exp(-delta * at) +
                (eta * eta - alpha * alpha) * ea * ce - 2.0 * alpha * eta * ea * se) -
           (delta * delta - alpha * alpha + eta * eta) / q * ea *
               ((eta * eta - alpha * alpha) * se + 2.0 * alpha * eta * ce));
  }
  return t < 0.0 ? -mag : mag;
}

CorrelatorSet::CorrelatorSet(Observable obs, const OscillatorParams& params,
                             const BathSpec& bath, const SeriesControl& ctrl)
    : observable_(obs), params_(params), bath_(bath), ctrl_(ctrl) {
  s0_ = S(0.0);
}

CorrelatorSet CorrelatorSet::position(const OscillatorParams& params, const BathSpec& bath,
                                      const SeriesControl& ctrl) {
  params.validate();
  bath.validate(params);
  ctrl.validate();
  return CorrelatorSet(Observable::Position, params, bath, ctrl);
}

CorrelatorSet CorrelatorSet::momentum(const OscillatorParams& params, const BathSpec& bath,
                                      const SeriesControl& ctrl) {
  params.validate();
  bath.validate(params);
  ctrl.validate();
  if (bath.kind == BathKind::Ohmic)
    throw UnsupportedObservableError(
        "CorrelatorSet::momentum: strictly Ohmic momentum correlators diverge at t = 0; "
        "use a Drude bath or gamma == 0");
  return CorrelatorSet(Observable::Momentum, params, bath, ctrl);
}

double CorrelatorSet::S(double t) const {
  if (observable_ == Observable::Position) {
    if (bath_.kind == BathKind::Drude) return drude_position_s(t, params_, bath_, ctrl_).value;
    return ohmic_position_s(t, params_, bath_, ctrl_).value;
  }
  return drude_momentum_s(t, params_, bath_, ctrl_).value;
}

double CorrelatorSet::A(double t) const {
  if (classical_) return 0.0;
  if (observable_ == Observable::Position) {
    if (bath_.kind == BathKind::Drude) return drude_position_a(t, params_, bath_);
    return ohmic_position_a(t, params_, bath_);
  }
  return drude_momentum_a(t, params_, bath_);
}

CorrelatorSet CorrelatorSet::classical() const {
  CorrelatorSet c = *this;
  c.classical_ = true;
  return c;
}

}  // namespace qbm
