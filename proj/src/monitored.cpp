#include "qbm/monitored.hpp"

#include <cmath>
#include <numbers>

namespace qbm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_matching_observable(const MeasurementProtocol& protocol,
                                 const CorrelatorSet& correlators, const char* fn) {
  if (protocol.observable != correlators.observable())
    throw DomainError(std::string(fn) + ": correlator set does not match the protocol observable");
}

}  // namespace

double zeta0_sq(const MeasurementProtocol& protocol, const CorrelatorSet& correlators) {
  protocol.validate();
  require_matching_observable(protocol, correlators, "zeta0_sq");
  return correlators.S0() + protocol.slit_width * protocol.slit_width;
}

double zeta_sq(double t_bar, const MeasurementProtocol& protocol,
               const CorrelatorSet& correlators) {
  protocol.validate_elapsed(t_bar);
  require_matching_observable(protocol, correlators, "zeta_sq");
  const double sigma_sq = protocol.slit_width * protocol.slit_width;
  double backaction = 0.0;
  for (int k = 0; k <= protocol.intermediate_count; ++k) {
    const double a = correlators.A(t_bar - k * protocol.spacing);
    backaction += a * a;
  }
  return correlators.S0() + sigma_sq + backaction / sigma_sq;
}

JointTwoPoint joint_gaussian(double t_bar, const MeasurementProtocol& protocol,
                             const CorrelatorSet& correlators) {
  JointTwoPoint j;
  j.zeta0_sq = zeta0_sq(protocol, correlators);
  j.zeta_sq = zeta_sq(t_bar, protocol, correlators);
  j.s = correlators.S(t_bar);
  if (!(j.determinant() > 0.0))
    throw ConsistencyError("joint_gaussian: covariance determinant is not positive; "
                           "the correlator bound |S(t)| <= S(0) must be violated");
  return j;
}

double log_joint_two_point(double x0, double x_final, double t_bar,
                           const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators) {
  const JointTwoPoint j = joint_gaussian(t_bar, protocol, correlators);
  const double det = j.determinant();
  const double quad =
      j.zeta_sq * x0 * x0 - 2.0 * j.s * x0 * x_final + j.zeta0_sq * x_final * x_final;
  return -std::log(kTwoPi) - 0.5 * std::log(det) - quad / (2.0 * det);
}

double joint_two_point(double x0, double x_final, double t_bar,
                       const MeasurementProtocol& protocol,
                       const CorrelatorSet& correlators) {
  return std::exp(log_joint_two_point(x0, x_final, t_bar, protocol, correlators));
}

double marginal_first(double x0, const MeasurementProtocol& protocol,
                      const CorrelatorSet& correlators) {
  const double z0 = zeta0_sq(protocol, correlators);
  return std::exp(-0.5 * x0 * x0 / z0 - 0.5 * std::log(kTwoPi * z0));
}

double conditional_mean(double t_bar, const MeasurementProtocol& protocol,
                        const CorrelatorSet& correlators) {
  protocol.validate_elapsed(t_bar);
  require_matching_observable(protocol, correlators, "conditional_mean");
  // independent of n and tau by construction: only S(t_bar) and zeta0^2 enter
  return protocol.first_outcome * correlators.S(t_bar) /
         (correlators.S0() + protocol.slit_width * protocol.slit_width);
}

double conditional_variance(double t_bar, const MeasurementProtocol& protocol,
                            const CorrelatorSet& correlators) {
  protocol.validate_elapsed(t_bar);
  require_matching_observable(protocol, correlators, "conditional_variance");
  const double sigma_sq = protocol.slit_width * protocol.slit_width;
  const double z0 = correlators.S0() + sigma_sq;
  const double st = correlators.S(t_bar);
  double backaction = 0.0;
  for (int k = 0; k <= protocol.intermediate_count; ++k) {
    const double a = correlators.A(t_bar - k * protocol.spacing);
    backaction += a * a;
  }
  return (z0 * z0 - st * st) / z0 + backaction / sigma_sq;
}

ConditionalGaussian conditional_gaussian(double t_bar, const MeasurementProtocol& protocol,
                                         const CorrelatorSet& correlators) {
  ConditionalGaussian g;
  g.mean = conditional_mean(t_bar, protocol, correlators);
  g.variance = conditional_variance(t_bar, protocol, correlators);
  g.far_tail_condition =
      std::abs(protocol.first_outcome) > 6.0 * std::sqrt(zeta0_sq(protocol, correlators));
  return g;
}

double conditional_density(double x_final, double t_bar,
                           const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators) {
  const ConditionalGaussian g = conditional_gaussian(t_bar, protocol, correlators);
  const double d = x_final - g.mean;
  return std::exp(-0.5 * d * d / g.variance - 0.5 * std::log(kTwoPi * g.variance));
}

double small_tau_variance(double t_bar, const MeasurementProtocol& protocol,
                          const CorrelatorSet& correlators) {
  protocol.validate();
  require_matching_observable(protocol, correlators, "small_tau_variance");
  if (protocol.observable != Observable::Position)
    throw UnsupportedObservableError(
        "small_tau_variance: closed form available for position measurements only");
  const BathSpec& bath = correlators.bath();
  if (bath.kind == BathKind::Drude)
    throw DomainError("small_tau_variance: closed form is Ohmic-specific");
  if (!(t_bar >= 0.0)) throw DomainError("small_tau_variance: t_bar must be >= 0");

  const OscillatorParams& p = correlators.params();
  const double sigma_sq = protocol.slit_width * protocol.slit_width;
  const double z0 = correlators.S0() + sigma_sq;
  const double st = correlators.S(t_bar);
  const double base = (z0 * z0 - st * st) / z0;

  const double gamma = bath.gamma;
  const double wr = bath.kind == BathKind::None ? p.omega0 : bath.effective_frequency(p);
  const double pref = p.hbar * p.hbar /
                      (8.0 * protocol.spacing * sigma_sq * p.mass * p.mass * wr * wr);
  double bracket;
  if (gamma == 0.0) {
    bracket = t_bar - std::sin(2.0 * wr * t_bar) / (2.0 * wr);
  } else {
    const double eg = std::exp(-gamma * t_bar);
    bracket = -std::expm1(-gamma * t_bar) / gamma -
              (gamma + (2.0 * wr * std::sin(2.0 * wr * t_bar) -
                        gamma * std::cos(2.0 * wr * t_bar)) *
                           eg) /
                  (4.0 * wr * wr + gamma * gamma);
  }
  return base + pref * bracket;
}

double frictionless_limit_variance(double t_bar, const MeasurementProtocol& protocol,
                                   const OscillatorParams& params) {
  protocol.validate();
  params.validate();
  if (protocol.observable != Observable::Position)
    throw UnsupportedObservableError(
        "frictionless_limit_variance: closed form available for position only");
  if (!(t_bar >= 0.0)) throw DomainError("frictionless_limit_variance: t_bar must be >= 0");

  const double w0 = params.omega0;
  const double sigma_sq = protocol.slit_width * protocol.slit_width;
  // gamma = 0 correlator closed forms: S(t) = S(0) cos(w0 t)
  const double e = std::exp(-params.beta() * params.hbar * w0);
  const double s0 = params.hbar / (2.0 * params.mass * w0) * (1.0 + e) / (1.0 - e);
  const double z0 = s0 + sigma_sq;
  const double st = s0 * std::cos(w0 * t_bar);
  const double growth = params.hbar * params.hbar /
                        (8.0 * protocol.spacing * sigma_sq * params.mass * params.mass *
                         w0 * w0 * w0) *
                        (w0 * t_bar - 0.5 * std::sin(2.0 * w0 * t_bar));
  return (z0 * z0 - st * st) / z0 + growth;
}

double asymptotic_variance(const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators) {
  protocol.validate();
  require_matching_observable(protocol, correlators, "asymptotic_variance");
  if (protocol.observable != Observable::Position)
    throw UnsupportedObservableError(
        "asymptotic_variance: closed form available for position only");
  const BathSpec& bath = correlators.bath();
  const OscillatorParams& p = correlators.params();
  if (!(bath.gamma > 0.0))
    throw UnsupportedRegimeError(
        "asymptotic_variance: diverges at gamma == 0 (no stationary width "
        "without dissipation)");
  const double wr = bath.effective_frequency(p);
  const double sigma_sq = protocol.slit_width * protocol.slit_width;
  return correlators.S0() + sigma_sq +
         p.hbar * p.hbar /
             (2.0 * protocol.spacing * sigma_sq * p.mass * p.mass * bath.gamma *
              (4.0 * wr * wr + bath.gamma * bath.gamma));
}

}  // namespace qbm
