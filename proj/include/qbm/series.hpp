#ifndef QBM_SERIES_HPP
#define QBM_SERIES_HPP

#include <numbers>

#include "qbm/params.hpp"

namespace qbm {

enum class SeriesMode { FixedCount, Adaptive };

/// Truncation control for the Matsubara series.
///
/// FixedCount sums exactly max_terms terms. Adaptive stops once the last
/// term's magnitude relative to the running partial sum drops below
/// relative_tolerance, capped at max_terms.
struct SeriesControl {
  SeriesMode mode = SeriesMode::Adaptive;
  int max_terms = 20000;
  double relative_tolerance = 1e-10;

  static SeriesControl fixed(int n) { return {SeriesMode::FixedCount, n, 0.0}; }
  static SeriesControl adaptive(double rtol = 1e-10, int cap = 20000) {
    return {SeriesMode::Adaptive, cap, rtol};
  }
  /// Truncation used for the density-surface figures.
  static SeriesControl figure_surface() { return fixed(150); }
  /// Truncation used for the variance-curve figures.
  static SeriesControl figure_variance() { return fixed(2000); }

  void validate() const {
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
    if (mode == SeriesMode::Adaptive && !(relative_tolerance > 0.0))
      throw DomainError("SeriesControl: relative_tolerance must be > 0");
  }
};

/// Value of a truncated series together with convergence diagnostics.
/// converged == false means Adaptive mode hit max_terms before the stopping
/// criterion was met; the value is still the best available partial sum.
struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;
  bool converged = true;
};

/// Matsubara frequency nu_n = 2*pi*n*k_B*T/hbar, n >= 1.
inline double matsubara_frequency(int n, const OscillatorParams& params) {
  if (n < 1) throw DomainError("matsubara_frequency: n must be >= 1");
  return 2.0 * std::numbers::pi * n * params.temperature / params.hbar;
}

}  // namespace qbm

#endif  // QBM_SERIES_HPP
