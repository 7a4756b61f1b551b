#ifndef QBM_ORACLE_HPP
#define QBM_ORACLE_HPP

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "qbm/correlators.hpp"

// Independent numerical routes used to validate the closed forms: the
// multi-time characteristic function with commutator shifts, quadrature
// marginalization, and finite-difference derivative checks. Linked into the
// test binaries only; not part of the public library surface.

namespace qbm::oracle {

/// Input of the (n+2)-point characteristic function: one wavenumber per
/// measurement, at strictly increasing times.
struct CharFunctionInput {
  Eigen::VectorXd wavenumbers;  ///< k_0 .. k_F
  Eigen::VectorXd times;        ///< t_0 .. t_F, strictly increasing
  double slit_width = 0.0;
  const CorrelatorSet* correlators = nullptr;

  void validate() const;
};

/// Commutator shifts s_j = sum_{l>j} k_l * A(t_j - t_l); s_F = 0 exactly.
Eigen::VectorXd commutator_shifts(const CharFunctionInput& input);

/// Characteristic function of the joint outcome distribution: the product of
/// slit integrals (performed by adaptive numerical quadrature, deliberately
/// not by the analytic Gaussian integral) times the thermal Gaussian
/// expectation exp(-1/2 sum_lm k_l k_m S(t_l - t_m)).
std::complex<double> characteristic_function(const CharFunctionInput& input);

/// Repeated evaluation of the characteristic function at fixed measurement
/// times: the correlator Gram matrices only depend on the times, so they are
/// computed once here and reused for every wavenumber vector. Equivalent to
/// characteristic_function call by call.
class CharFunctionEvaluator {
 public:
  CharFunctionEvaluator(const Eigen::VectorXd& times, double slit_width,
                        const CorrelatorSet& correlators);

  std::complex<double> operator()(const Eigen::VectorXd& wavenumbers) const;

 private:
  Eigen::VectorXd times_;
  double slit_width_;
  double bound_;         // slit integration half-width
  Eigen::MatrixXd s_gram_;  // S(t_l - t_m)
  Eigen::MatrixXd a_gram_;  // A(t_j - t_l)
};

/// Composite-Simpson integral of a density sampled on a uniform grid.
/// No coverage check; see quadrature_marginalize.
double integrate_grid(const Eigen::VectorXd& x, const Eigen::VectorXd& density);

/// Same integral, but requires the grid to cover mean +- 4*stddev on both
/// sides (8 standard deviations total); throws CoverageError otherwise.
double quadrature_marginalize(const Eigen::VectorXd& x, const Eigen::VectorXd& density,
                              double mean, double stddev);

/// Richardson-extrapolated central second difference of f at t with base
/// step h. Throws StepSizeError when h is below the roundoff floor.
double second_derivative(const std::function<double(double)>& f, double t, double h);

}  // namespace qbm::oracle

#endif  // QBM_ORACLE_HPP
