#include "qbm/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qbm::oracle {
namespace {

using ComplexL = std::complex<long double>;

// Adaptive Simpson in extended precision. The slit integrands are smooth
// Gaussians times a phase, so this converges fast; the tight tolerance keeps
// the oracle's own error well below the thresholds it is used to check.
struct AdaptiveSimpson {
  const std::function<ComplexL(long double)>& f;
  long double abs_tol;
  int max_depth;
  long long evals = 0;

  ComplexL run(long double a, long double b) {
    const ComplexL fa = eval(a), fb = eval(b), fm = eval((a + b) / 2);
    const ComplexL whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, abs_tol, max_depth);
  }

  ComplexL eval(long double x) {
    ++evals;
    return f(x);
  }

  ComplexL recurse(long double a, long double b, ComplexL fa, ComplexL fm, ComplexL fb,
                   ComplexL whole, long double tol, int depth) {
    const long double m = (a + b) / 2;
    const ComplexL fl = eval((a + m) / 2), fr = eval((m + b) / 2);
    const ComplexL left = (m - a) / 6.0L * (fa + 4.0L * fl + fm);
    const ComplexL right = (b - m) / 6.0L * (fm + 4.0L * fr + fb);
    const ComplexL delta = left + right - whole;
    if (std::abs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
    if (depth <= 0) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << static_cast<double>(a) << ", "
          << static_cast<double>(b) << "]; error estimate "
          << static_cast<double>(std::abs(delta) / 15.0L) << " after " << evals
          << " evaluations";
      throw QuadratureError(msg.str());
    }
    return recurse(a, m, fa, fl, fm, left, tol / 2, depth - 1) +
           recurse(m, b, fm, fr, fb, right, tol / 2, depth - 1);
  }
};

ComplexL integrate_complex(const std::function<ComplexL(long double)>& f, long double a,
                           long double b, long double abs_tol) {
  AdaptiveSimpson s{f, abs_tol, 40};
  return s.run(a, b);
}

}  // namespace

void CharFunctionInput::validate() const {
  if (wavenumbers.size() < 2 || wavenumbers.size() != times.size())
    throw DomainError("CharFunctionInput: need matching wavenumber/time vectors of length >= 2");
  for (Eigen::Index i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw DomainError("CharFunctionInput: times must be strictly increasing");
  if (!(slit_width > 0.0)) throw DomainError("CharFunctionInput: slit_width must be > 0");
  if (correlators == nullptr) throw DomainError("CharFunctionInput: correlators missing");
}

Eigen::VectorXd commutator_shifts(const CharFunctionInput& input) {
  input.validate();
  const Eigen::Index count = input.wavenumbers.size();
  Eigen::VectorXd shifts = Eigen::VectorXd::Zero(count);
  // <[q(t_j), q(t_l)]>/2i = A(t_j - t_l), by time-translation invariance of
  // the equilibrium state
  for (Eigen::Index j = 0; j + 1 < count; ++j)
    for (Eigen::Index l = j + 1; l < count; ++l)
      shifts[j] += input.wavenumbers[l] * input.correlators->A(input.times[j] - input.times[l]);
  shifts[count - 1] = 0.0;
  return shifts;
}

CharFunctionEvaluator::CharFunctionEvaluator(const Eigen::VectorXd& times, double slit_width,
                                             const CorrelatorSet& correlators)
    : times_(times), slit_width_(slit_width) {
  CharFunctionInput probe;
  probe.wavenumbers = Eigen::VectorXd::Zero(times.size());
  probe.times = times;
  probe.slit_width = slit_width;
  probe.correlators = &correlators;
  probe.validate();

  bound_ = 10.0 * std::sqrt(correlators.S0() + slit_width * slit_width);
  const Eigen::Index count = times.size();
  s_gram_.resize(count, count);
  a_gram_.resize(count, count);
  for (Eigen::Index l = 0; l < count; ++l)
    for (Eigen::Index m = 0; m < count; ++m) {
      s_gram_(l, m) = correlators.S(times[l] - times[m]);
      a_gram_(l, m) = correlators.A(times[l] - times[m]);
    }
}

std::complex<double> CharFunctionEvaluator::operator()(
    const Eigen::VectorXd& wavenumbers) const {
  const Eigen::Index count = times_.size();
  if (wavenumbers.size() != count)
    throw DomainError("CharFunctionEvaluator: wavenumber count mismatch");

  const long double sigma = slit_width_;
  const long double norm = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double> *
                                            sigma * sigma);
  ComplexL product = 1.0L;
  for (Eigen::Index j = 0; j < count; ++j) {
    long double s = 0.0L;
    for (Eigen::Index l = j + 1; l < count; ++l) s += wavenumbers[l] * a_gram_(j, l);
    if (j + 1 == count) s = 0.0L;
    const long double k = wavenumbers[j];
    // f*(s - x) f(-s - x) e^{ikx} with the Gaussian slit f; the slit factor
    // collapses to norm * exp(-(s^2 + x^2) / (2 sigma^2))
    auto integrand = [&](long double x) -> ComplexL {
      const long double amp = norm * std::exp(-(s * s + x * x) / (2.0L * sigma * sigma));
      return amp * ComplexL(std::cos(k * x), std::sin(k * x));
    };
    product *= integrate_complex(integrand, -bound_, bound_, 1e-14L);
  }

  long double thermal = 0.0L;
  for (Eigen::Index l = 0; l < count; ++l)
    for (Eigen::Index m = 0; m < count; ++m)
      thermal +=
          static_cast<long double>(wavenumbers[l]) * wavenumbers[m] * s_gram_(l, m);
  product *= std::exp(-thermal / 2.0L);
  return {static_cast<double>(product.real()), static_cast<double>(product.imag())};
}

std::complex<double> characteristic_function(const CharFunctionInput& input) {
  input.validate();
  const CharFunctionEvaluator eval(input.times, input.slit_width, *input.correlators);
  return eval(input.wavenumbers);
}

double integrate_grid(const Eigen::VectorXd& x, const Eigen::VectorXd& density) {
  const Eigen::Index n = x.size();
  if (n < 3 || density.size() != n)
    throw DomainError("integrate_grid: need matching grids of length >= 3");
  const double h = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
  // composite Simpson over even interval counts; trapezoid for a trailing odd
  // interval
  long double sum = 0.0L;
  Eigen::Index i = 0;
  for (; i + 2 < n; i += 2) sum += h / 3.0L * (density[i] + 4.0L * density[i + 1] + density[i + 2]);
  if (i + 1 < n) sum += h / 2.0L * (density[i] + density[i + 1]);
  return static_cast<double>(sum);
}

double quadrature_marginalize(const Eigen::VectorXd& x, const Eigen::VectorXd& density,
                              double mean, double stddev) {
  if (!(stddev > 0.0)) throw DomainError("quadrature_marginalize: stddev must be > 0");
  if (x.size() < 3) throw DomainError("quadrature_marginalize: grid too short");
  if (x[0] > mean - 4.0 * stddev || x[x.size() - 1] < mean + 4.0 * stddev) {
    std::ostringstream msg;
    msg << "quadrature_marginalize: grid [" << x[0] << ", " << x[x.size() - 1]
        << "] does not cover mean +- 4*stddev = [" << mean - 4.0 * stddev << ", "
        << mean + 4.0 * stddev << "]";
    throw CoverageError(msg.str());
  }
  return integrate_grid(x, density);
}

double second_derivative(const std::function<double(double)>& f, double t, double h) {
  const double floor_h =
      std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(t));
  if (!(h > floor_h))
    throw StepSizeError("second_derivative: step below the roundoff floor");
  auto central = [&](double step) {
    return (f(t + step) - 2.0 * f(t) + f(t - step)) / (step * step);
  };
  const double coarse = central(h);
  const double fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace qbm::oracle
