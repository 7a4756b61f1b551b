#ifndef QBM_RUNNER_HPP
#define QBM_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qbm/monitored.hpp"

namespace qbm {

enum class OutputFormat { Csv, Json };

/// Uniform sweep grid, lo < hi, at least two points, strictly increasing.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  std::vector<double> values() const;
  void validate(const char* name) const;
};

/// One figure-reproduction run. Quantities use the units the paper's figure
/// captions are written in: gamma in omega0, mu in omega0/(2*pi), times in
/// 1/omega0, sigma and outcome grids in ground-state units (sigma_GS for
/// position, M*omega0*sigma_GS for momentum). Internally everything is
/// converted to the physical units fixed by `oscillator`.
struct RunConfig {
  OscillatorParams oscillator;
  BathKind bath_kind = BathKind::Ohmic;
  double drude_cutoff = 100.0;      ///< omega_D in omega0 units
  bool compare_drude = false;       ///< add Drude comparison columns
  Observable observable = Observable::Position;
  double sigma = 0.5;               ///< slit width, ground-state units
  double x0 = 0.0;                  ///< first outcome, ground-state units
  std::vector<double> gamma_list;   ///< omega0 units, strictly increasing, >= 0
  std::vector<double> mu_list;      ///< omega0/(2*pi) units, strictly increasing, > 0
  bool include_unmonitored = false; ///< prepend the n = 0 (no intermediate) rows
  GridSpec t_grid;                  ///< elapsed-time grid, 1/omega0 units
  GridSpec x_grid;                  ///< final-outcome grid, ground-state units
  SeriesControl series = SeriesControl::adaptive();
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;

  void validate() const;
};

/// Column-labeled numeric table; the deterministic output unit of every run.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Conditional-density surface P(x_F, t_bar), row-major over
/// (gamma, mu, t_bar, x_F). The intermediate count is derived per t_bar so
/// that the final measurement falls within one spacing of the last
/// nonselective one.
Table run_density_surface(const RunConfig& config, int threads = 1);

/// Conditional-variance curves over (gamma, mu, t_bar) with the small-spacing
/// and asymptotic closed forms alongside (NaN where no closed form applies).
Table run_variance_curve(const RunConfig& config, int threads = 1);

/// Equilibrium correlator dump over (gamma, t).
Table run_correlators(const RunConfig& config, int threads = 1);

void write_table(const Table& table, std::ostream& out, OutputFormat format);

/// Parses a table previously written as CSV (for golden-data regression and
/// round-trip checks).
Table read_csv_table(std::istream& in);

// Config file I/O (JSON; unknown keys are errors).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string save_config(const RunConfig& config);

}  // namespace qbm

#endif  // QBM_RUNNER_HPP
