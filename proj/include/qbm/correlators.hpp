#ifndef QBM_CORRELATORS_HPP
#define QBM_CORRELATORS_HPP

#include "qbm/params.hpp"
#include "qbm/series.hpp"

namespace qbm {

enum class Observable { Position, Momentum };

/// Exponents of the three damped modes of the Drude-regularized oscillator.
/// The complex pair is alpha +- i*eta, the real relaxation rate is delta.
/// They satisfy
///   2*alpha + delta          = omega_D
///   alpha^2 + eta^2          = omega0^2 * omega_D / delta
///   alpha^2 + eta^2 + 2*alpha*delta = omega0^2 + gamma*omega_D
struct DrudeCoefficients {
  double alpha = 0.0;
  double eta = 0.0;
  double delta = 0.0;
};

/// Solves the implicit relations above exactly (relative residuals <= 1e-12),
/// seeded with their first-order-in-gamma/omega_D approximations.
DrudeCoefficients drude_coefficients(const OscillatorParams& params,
                                     const BathSpec& bath);

// Equilibrium correlation functions. S is the symmetrized and A the
// antisymmetrized correlator of the chosen observable; both accept any real t
// and apply S(-t) = S(t), A(-t) = -A(t).

/// Ohmic (or free, gamma = 0) symmetrized position correlator: resonant term
/// plus Matsubara sum truncated per ctrl.
SeriesResult ohmic_position_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl);

/// Ohmic antisymmetrized position correlator (closed form, no series).
double ohmic_position_a(double t, const OscillatorParams& params,
                        const BathSpec& bath);

/// Drude-regularized symmetrized position correlator.
SeriesResult drude_position_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl);

/// Drude-regularized antisymmetrized position correlator (closed form).
double drude_position_a(double t, const OscillatorParams& params,
                        const BathSpec& bath);

/// Drude-regularized symmetrized momentum correlator. Finite at t = 0; the
/// strictly Ohmic counterpart diverges logarithmically there and is rejected.
SeriesResult drude_momentum_s(double t, const OscillatorParams& params,
                              const BathSpec& bath, const SeriesControl& ctrl);

/// Drude-regularized antisymmetrized momentum correlator (closed form).
double drude_momentum_a(double t, const OscillatorParams& params,
                        const BathSpec& bath);

/// Callable pair (S, A) for one observable and bath, with S(0) cached.
///
/// Evaluation is a pure function of the stored immutable parameter records;
/// instances are freely copyable and safe to use from multiple threads.
class CorrelatorSet {
 public:
  static CorrelatorSet position(const OscillatorParams& params, const BathSpec& bath,
                                const SeriesControl& ctrl = SeriesControl::adaptive());
  /// Momentum correlators require a Drude bath or gamma == 0 (free forms);
  /// throws UnsupportedObservableError for a strictly Ohmic bath.
  static CorrelatorSet momentum(const OscillatorParams& params, const BathSpec& bath,
                                const SeriesControl& ctrl = SeriesControl::adaptive());

  double S(double t) const;
  double A(double t) const;
  double S0() const { return s0_; }

  Observable observable() const { return observable_; }
  const OscillatorParams& params() const { return params_; }
  const BathSpec& bath() const { return bath_; }
  const SeriesControl& series_control() const { return ctrl_; }

  /// Classical-limit hook: same S, identically zero A. With it, the joint
  /// density loses all dependence on the intermediate measurements.
  CorrelatorSet classical() const;

 private:
  CorrelatorSet(Observable obs, const OscillatorParams& params,
                const BathSpec& bath, const SeriesControl& ctrl);

  Observable observable_;
  OscillatorParams params_;
  BathSpec bath_;
  SeriesControl ctrl_;
  double s0_ = 0.0;
  bool classical_ = false;
};

}  // namespace qbm

#endif  // QBM_CORRELATORS_HPP
