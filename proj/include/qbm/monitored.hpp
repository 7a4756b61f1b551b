#ifndef QBM_MONITORED_HPP
#define QBM_MONITORED_HPP

#include <Eigen/Dense>

#include "qbm/correlators.hpp"

namespace qbm {

/// Repeated-measurement protocol: a first selective Gaussian measurement with
/// outcome first_outcome, n equally spaced nonselective measurements of the
/// same width, and a final selective measurement after elapsed time t_bar.
///
/// slit_width is in length units for position and momentum units for momentum
/// measurements. slit_width == 0 (projective limit) is rejected: the
/// conditional variance diverges there.
struct MeasurementProtocol {
  Observable observable = Observable::Position;
  double slit_width = 0.0;      ///< sigma
  double first_outcome = 0.0;   ///< x0 (or p0)
  double spacing = 1.0;         ///< tau, time between successive measurements
  int intermediate_count = 0;   ///< n >= 0

  void validate() const {
    if (!(slit_width > 0.0))
      throw DomainError("MeasurementProtocol: slit_width must be > 0 "
                        "(the projective limit sigma -> 0 has divergent variance)");
    if (!(spacing > 0.0)) throw DomainError("MeasurementProtocol: spacing must be > 0");
    if (intermediate_count < 0)
      throw DomainError("MeasurementProtocol: intermediate_count must be >= 0");
  }

  /// The final measurement must fall within one spacing after the last
  /// nonselective one: t_bar - n*tau in [0, tau] for n >= 1. The lower
  /// boundary is admitted since A(0) = 0 makes it coincide with the n-1 case.
  void validate_elapsed(double t_bar) const {
    validate();
    if (!(t_bar >= 0.0)) throw DomainError("MeasurementProtocol: t_bar must be >= 0");
    if (intermediate_count >= 1) {
      const double rem = t_bar - intermediate_count * spacing;
      const double slack = 1e-9 * spacing;
      if (rem < -slack || rem > spacing + slack)
        throw DomainError("MeasurementProtocol: t_bar - n*tau must lie in [0, tau]");
    }
  }
};

/// Zero-mean bivariate Gaussian of the first and final outcomes with the
/// intermediate measurements integrated out.
struct JointTwoPoint {
  double zeta0_sq = 0.0;  ///< variance of the first outcome, S(0) + sigma^2
  double zeta_sq = 0.0;   ///< variance of the final outcome
  double s = 0.0;         ///< cross covariance S(t_bar)

  Eigen::Matrix2d covariance() const {
    Eigen::Matrix2d m;
    m << zeta0_sq, s, s, zeta_sq;
    return m;
  }
  double determinant() const { return zeta0_sq * zeta_sq - s * s; }
};

/// Mean and variance of the final-outcome density conditioned on the first
/// outcome. far_tail_condition flags |x0| > 6*zeta0: the conditional stays
/// exact but the conditioning event itself has negligible marginal weight.
struct ConditionalGaussian {
  double mean = 0.0;
  double variance = 0.0;
  bool far_tail_condition = false;
};

/// zeta0^2 = S(0) + sigma^2.
double zeta0_sq(const MeasurementProtocol& protocol, const CorrelatorSet& correlators);

/// zeta^2(t_bar) = zeta0^2 + (1/sigma^2) * sum_{k=0}^{n} A^2(t_bar - k*tau).
double zeta_sq(double t_bar, const MeasurementProtocol& protocol,
               const CorrelatorSet& correlators);

/// Covariance data of the two-point joint density; throws ConsistencyError if
/// the determinant is not positive.
JointTwoPoint joint_gaussian(double t_bar, const MeasurementProtocol& protocol,
                             const CorrelatorSet& correlators);

double log_joint_two_point(double x0, double x_final, double t_bar,
                           const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators);

/// Joint density of first and final outcomes (intermediates integrated out).
double joint_two_point(double x0, double x_final, double t_bar,
                       const MeasurementProtocol& protocol,
                       const CorrelatorSet& correlators);

/// Marginal density of the first outcome: zero-mean Gaussian, variance zeta0^2.
double marginal_first(double x0, const MeasurementProtocol& protocol,
                      const CorrelatorSet& correlators);

/// Conditional mean x0 * S(t_bar) / (S(0) + sigma^2). Independent of n and tau.
double conditional_mean(double t_bar, const MeasurementProtocol& protocol,
                        const CorrelatorSet& correlators);

/// Conditional variance
///   [(S(0)+sigma^2)^2 - S^2(t_bar)]/(S(0)+sigma^2)
///     + (1/sigma^2) * sum_{k=0}^{n} A^2(t_bar - k*tau).
double conditional_variance(double t_bar, const MeasurementProtocol& protocol,
                            const CorrelatorSet& correlators);

ConditionalGaussian conditional_gaussian(double t_bar, const MeasurementProtocol& protocol,
                                         const CorrelatorSet& correlators);

/// Gaussian density with conditional mean and variance; equals
/// joint_two_point / marginal_first pointwise. Evaluated in log space.
double conditional_density(double x_final, double t_bar,
                           const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators);

/// Small-spacing closed form of the conditional variance, valid for position
/// measurements with an Ohmic (or absent) bath and derived under the
/// convention t_bar = (n+1)*tau.
double small_tau_variance(double t_bar, const MeasurementProtocol& protocol,
                          const CorrelatorSet& correlators);

/// gamma -> 0 limit of the small-spacing variance: linear-plus-oscillatory
/// growth with slope hbar^2/(8*tau*sigma^2*M^2*omega0^2).
double frictionless_limit_variance(double t_bar, const MeasurementProtocol& protocol,
                                   const OscillatorParams& params);

/// t -> infinity limit of the conditional variance for gamma > 0:
/// S(0) + sigma^2 + hbar^2 / (2*tau*sigma^2*M^2*gamma*(4*omega_r^2+gamma^2)).
/// Throws UnsupportedRegimeError at gamma == 0 (no stationary width).
double asymptotic_variance(const MeasurementProtocol& protocol,
                           const CorrelatorSet& correlators);

}  // namespace qbm

#endif  // QBM_MONITORED_HPP
