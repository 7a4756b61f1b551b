#ifndef QBM_PARAMS_HPP
#define QBM_PARAMS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

/// Parameters of the central harmonic oscillator and the unit system.
///
/// Defaults establish natural units hbar = M = omega0 = k_B = 1, so that
/// temperatures are in units of hbar*omega0/k_B and times in 1/omega0.
struct OscillatorParams {
  double mass = 1.0;         ///< M, mass units
  double omega0 = 1.0;       ///< bare angular frequency, rad/time
  double temperature = 1.0;  ///< T, energy/k_B
  double hbar = 1.0;         ///< action units

  void validate() const {
    if (!(mass > 0.0)) throw DomainError("OscillatorParams: mass must be > 0");
    if (!(omega0 > 0.0)) throw DomainError("OscillatorParams: omega0 must be > 0");
    if (!(temperature > 0.0)) throw DomainError("OscillatorParams: temperature must be > 0");
    if (!(hbar > 0.0)) throw DomainError("OscillatorParams: hbar must be > 0");
  }

  /// Inverse temperature 1/(k_B T).
  double beta() const { return 1.0 / temperature; }

  /// Ground-state width of the free oscillator, (2 M omega0 / hbar)^(-1/2).
  double ground_state_width() const { return std::sqrt(hbar / (2.0 * mass * omega0)); }
};

enum class BathKind { None, Ohmic, Drude };

/// Coupling spectrum of the heat bath.
///
/// Ohmic: J(w) = gamma*M*w (no cutoff). Drude: J(w) = gamma*M*w/(1+w^2/wD^2).
/// kind == None means an isolated oscillator (gamma == 0).
struct BathSpec {
  BathKind kind = BathKind::None;
  double gamma = 0.0;        ///< friction, rad/time
  double drude_cutoff = 0.0; ///< omega_D, rad/time (Drude only)

  static BathSpec none() { return BathSpec{BathKind::None, 0.0, 0.0}; }

  /// gamma == 0 normalizes to kind None.
  static BathSpec ohmic(double gamma) {
    if (gamma == 0.0) return none();
    return BathSpec{BathKind::Ohmic, gamma, 0.0};
  }

  /// gamma == 0 is permitted with a Drude bath; the correlators then reduce
  /// to the free-oscillator closed forms.
  static BathSpec drude(double gamma, double omega_d) {
    return BathSpec{BathKind::Drude, gamma, omega_d};
  }

  void validate(const OscillatorParams& params) const {
    if (!(gamma >= 0.0)) throw DomainError("BathSpec: gamma must be >= 0");
    if (kind == BathKind::None && gamma != 0.0)
      throw DomainError("BathSpec: kind None requires gamma == 0");
    if (kind == BathKind::Ohmic && gamma == 0.0)
      throw DomainError("BathSpec: Ohmic with gamma == 0 must use kind None");
    if (kind == BathKind::Drude && !(drude_cutoff > 0.0))
      throw DomainError("BathSpec: Drude requires drude_cutoff > 0");
    if (kind != BathKind::None && !(gamma < 2.0 * params.omega0))
      throw UnsupportedRegimeError(
          "BathSpec: overdamped regime gamma >= 2*omega0 is not supported "
          "(the closed forms assume a real effective frequency)");
  }

  /// Cutoff-separation advisories (omega_D >> gamma, omega0). Violations are
  /// warnings, not errors.
  std::vector<std::string> warnings(const OscillatorParams& params) const {
    std::vector<std::string> out;
    if (kind == BathKind::Drude &&
        drude_cutoff < 10.0 * std::max(gamma, params.omega0)) {
      out.push_back("BathSpec: drude_cutoff < 10*max(gamma, omega0); "
                    "the Drude expressions assume a well-separated cutoff");
    }
    return out;
  }

  /// Effective damped frequency omega_r = sqrt(omega0^2 - gamma^2/4).
  double effective_frequency(const OscillatorParams& params) const {
    const double d = params.omega0 * params.omega0 - 0.25 * gamma * gamma;
    if (!(d > 0.0))
      throw UnsupportedRegimeError("effective_frequency: gamma >= 2*omega0");
    return std::sqrt(d);
  }
};

}  // namespace qbm

#endif  // QBM_PARAMS_HPP
