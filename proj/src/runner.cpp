#include "qbm/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace qbm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 17 significant digits: enough to round-trip an IEEE double exactly, so
// re-reading and re-emitting a table is byte-identical.
std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int n = std::min(threads, count);
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

struct SweepCell {
  double gamma_w0;  // in omega0 units
  double mu_w0;     // in omega0/(2pi) units; 0 encodes the unmonitored mode
};

std::vector<SweepCell> sweep_cells(const RunConfig& c) {
  std::vector<SweepCell> cells;
  for (double g : c.gamma_list) {
    if (c.include_unmonitored) cells.push_back({g, 0.0});
    for (double mu : c.mu_list) cells.push_back({g, mu});
  }
  return cells;
}

// Per-cell physical setup shared by the surface and variance runners.
struct CellContext {
  CorrelatorSet correlators;
  MeasurementProtocol protocol;  // spacing/intermediate_count set per t_bar
  double tau = 0.0;              // physical spacing; 0 for unmonitored
  double gs = 0.0;               // ground-state unit of the observable
};

BathSpec make_bath(const RunConfig& c, double gamma_w0) {
  const double gamma = gamma_w0 * c.oscillator.omega0;
  if (gamma == 0.0 && c.bath_kind != BathKind::Drude) return BathSpec::none();
  switch (c.bath_kind) {
    case BathKind::None:
      return BathSpec::none();
    case BathKind::Ohmic:
      return BathSpec::ohmic(gamma);
    case BathKind::Drude:
      return BathSpec::drude(gamma, c.drude_cutoff * c.oscillator.omega0);
  }
  throw ConfigError("invalid bath kind");
}

double ground_state_unit(const RunConfig& c) {
  const double gs = c.oscillator.ground_state_width();
  return c.observable == Observable::Position
             ? gs
             : c.oscillator.mass * c.oscillator.omega0 * gs;
}

CellContext make_cell_context(const RunConfig& c, const SweepCell& cell,
                              const BathSpec& bath) {
  const double gs = ground_state_unit(c);
  CorrelatorSet corr = c.observable == Observable::Position
                           ? CorrelatorSet::position(c.oscillator, bath, c.series)
                           : CorrelatorSet::momentum(c.oscillator, bath, c.series);
  MeasurementProtocol proto;
  proto.observable = c.observable;
  proto.slit_width = c.sigma * gs;
  proto.first_outcome = c.x0 * gs;
  const double tau = cell.mu_w0 > 0.0 ? kTwoPi / (cell.mu_w0 * c.oscillator.omega0) : 0.0;
  proto.spacing = tau > 0.0 ? tau : 1.0;  // unused when intermediate_count stays 0
  proto.intermediate_count = 0;
  return CellContext{std::move(corr), proto, tau, gs};
}

// Number of nonselective measurements that happened strictly before t_bar,
// such that t_bar - n*tau stays in (0, tau] (n = 0 at t_bar = 0).
int intermediate_count_at(double t_bar, double tau) {
  if (tau <= 0.0 || t_bar <= tau) return 0;
  return static_cast<int>(std::ceil(t_bar / tau)) - 1;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    v[static_cast<size_t>(i)] = lo + (hi - lo) * i / static_cast<double>(points - 1);
  return v;
}

void GridSpec::validate(const char* name) const {
  if (points < 2)
    throw ConfigError(std::string(name) + ": grid needs at least 2 points");
  if (!(lo < hi))
    throw ConfigError(std::string(name) + ": grid must be strictly increasing (min < max)");
}

void RunConfig::validate() const {
  oscillator.validate();
  if (!(sigma > 0.0)) throw ConfigError("measurement.sigma must be > 0");
  if (gamma_list.empty()) throw ConfigError("sweep.gamma must be non-empty");
  for (size_t i = 0; i < gamma_list.size(); ++i) {
    if (!(gamma_list[i] >= 0.0)) throw ConfigError("sweep.gamma entries must be >= 0");
    if (i > 0 && !(gamma_list[i] > gamma_list[i - 1]))
      throw ConfigError("sweep.gamma must be strictly increasing");
  }
  if (mu_list.empty() && !include_unmonitored)
    throw ConfigError("sweep.mu must be non-empty (or include_unmonitored set)");
  for (size_t i = 0; i < mu_list.size(); ++i) {
    if (!(mu_list[i] > 0.0))
      throw ConfigError("sweep.mu entries must be > 0 "
                        "(no intermediate measurements is include_unmonitored, not mu = 0)");
    if (i > 0 && !(mu_list[i] > mu_list[i - 1]))
      throw ConfigError("sweep.mu must be strictly increasing");
  }
  t_grid.validate("sweep.t_grid");
  if (bath_kind == BathKind::Drude && !(drude_cutoff > 0.0))
    throw ConfigError("bath.drude_cutoff must be > 0");
  if (bath_kind == BathKind::None) {
    for (double g : gamma_list)
      if (g != 0.0) throw ConfigError("bath.kind none requires all sweep.gamma == 0");
  }
  if (observable == Observable::Momentum && bath_kind == BathKind::Ohmic) {
    for (double g : gamma_list)
      if (g != 0.0)
        throw ConfigError("momentum runs require a Drude bath (or gamma == 0): "
                          "strictly Ohmic momentum correlators diverge");
  }
  series.validate();
  // bath sanity for every swept gamma (underdamped domain etc.)
  for (double g : gamma_list) make_bath(*this, g).validate(oscillator);
}

Table run_density_surface(const RunConfig& config, int threads) {
  config.validate();
  if (config.observable != Observable::Position)
    throw ConfigError("surface runs support the position observable only");
  config.x_grid.validate("sweep.x_grid");

  const auto cells = sweep_cells(config);
  const auto t_values = config.t_grid.values();
  const auto x_values = config.x_grid.values();
  const double w0 = config.oscillator.omega0;

  Table table;
  table.columns = {"gamma[omega0]", "mu[omega0/2pi]", "tbar[1/omega0]", "xF[gs]", "P[1/gs]"};
  const size_t rows_per_cell = t_values.size() * x_values.size();
  table.rows.assign(cells.size() * rows_per_cell, {});

  parallel_for(static_cast<int>(cells.size()), threads, [&](int ci) {
    const SweepCell& cell = cells[static_cast<size_t>(ci)];
    CellContext ctx = make_cell_context(config, cell, make_bath(config, cell.gamma_w0));
    size_t row = static_cast<size_t>(ci) * rows_per_cell;
    for (double t_w0 : t_values) {
      const double t_bar = t_w0 / w0;
      ctx.protocol.intermediate_count = intermediate_count_at(t_bar, ctx.tau);
      const ConditionalGaussian g = conditional_gaussian(t_bar, ctx.protocol, ctx.correlators);
      const double log_norm = -0.5 * std::log(kTwoPi * g.variance);
      for (double x_gs : x_values) {
        const double d = x_gs * ctx.gs - g.mean;
        const double density = std::exp(log_norm - 0.5 * d * d / g.variance) * ctx.gs;
        table.rows[row++] = {cell.gamma_w0, cell.mu_w0, t_w0, x_gs, density};
      }
    }
  });
  return table;
}

Table run_variance_curve(const RunConfig& config, int threads) {
  config.validate();

  const auto cells = sweep_cells(config);
  const auto t_values = config.t_grid.values();
  const double w0 = config.oscillator.omega0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool position_run = config.observable == Observable::Position;
  const bool with_drude =
      config.compare_drude && config.bath_kind != BathKind::Drude && position_run;

  Table table;
  table.columns = {"gamma[omega0]", "mu[omega0/2pi]", "tbar[1/omega0]",
                   "var[gs2]",      "var_small_tau[gs2]", "var_asymptotic[gs2]"};
  if (with_drude) table.columns.push_back("var_drude[gs2]");
  table.rows.assign(cells.size() * t_values.size(), {});

  parallel_for(static_cast<int>(cells.size()), threads, [&](int ci) {
    const SweepCell& cell = cells[static_cast<size_t>(ci)];
    CellContext ctx = make_cell_context(config, cell, make_bath(config, cell.gamma_w0));
    RunConfig drude_cfg = config;
    drude_cfg.bath_kind = BathKind::Drude;
    CellContext drude_ctx =
        with_drude ? make_cell_context(config, cell, make_bath(drude_cfg, cell.gamma_w0))
                   : ctx;

    const double gs_sq = ctx.gs * ctx.gs;
    const bool monitored = ctx.tau > 0.0;
    const bool closed_forms = position_run && config.bath_kind != BathKind::Drude && monitored;
    const double asym =
        closed_forms && cell.gamma_w0 > 0.0
            ? asymptotic_variance(ctx.protocol, ctx.correlators) / gs_sq
            : nan;

    size_t row = static_cast<size_t>(ci) * t_values.size();
    for (double t_w0 : t_values) {
      const double t_bar = t_w0 / w0;
      ctx.protocol.intermediate_count = intermediate_count_at(t_bar, ctx.tau);
      const double var = conditional_variance(t_bar, ctx.protocol, ctx.correlators) / gs_sq;
      const double small =
          closed_forms ? small_tau_variance(t_bar, ctx.protocol, ctx.correlators) / gs_sq : nan;
      std::vector<double> r = {cell.gamma_w0, cell.mu_w0, t_w0, var, small, asym};
      if (with_drude) {
        drude_ctx.protocol.intermediate_count = ctx.protocol.intermediate_count;
        r.push_back(conditional_variance(t_bar, drude_ctx.protocol, drude_ctx.correlators) /
                    gs_sq);
      }
      table.rows[row++] = std::move(r);
    }
  });
  return table;
}

Table run_correlators(const RunConfig& config, int threads) {
  config.validate();
  const auto t_values = config.t_grid.values();
  const double w0 = config.oscillator.omega0;
  const double gs_sq = ground_state_unit(config) * ground_state_unit(config);
  const bool with_drude = config.compare_drude && config.bath_kind != BathKind::Drude &&
                          config.observable == Observable::Position;

  Table table;
  table.columns = {"gamma[omega0]", "t[1/omega0]", "S[gs2]", "A[gs2]"};
  if (with_drude) {
    table.columns.push_back("S_drude[gs2]");
    table.columns.push_back("A_drude[gs2]");
  }
  table.rows.assign(config.gamma_list.size() * t_values.size(), {});

  parallel_for(static_cast<int>(config.gamma_list.size()), threads, [&](int gi) {
    const double gamma_w0 = config.gamma_list[static_cast<size_t>(gi)];
    const BathSpec bath = make_bath(config, gamma_w0);
    const CorrelatorSet corr =
        config.observable == Observable::Position
            ? CorrelatorSet::position(config.oscillator, bath, config.series)
            : CorrelatorSet::momentum(config.oscillator, bath, config.series);
    RunConfig drude_cfg = config;
    drude_cfg.bath_kind = BathKind::Drude;
    const CorrelatorSet drude_corr =
        with_drude
            ? CorrelatorSet::position(config.oscillator, make_bath(drude_cfg, gamma_w0),
                                      config.series)
            : corr;

    size_t row = static_cast<size_t>(gi) * t_values.size();
    for (double t_w0 : t_values) {
      const double t = t_w0 / w0;
      std::vector<double> r = {gamma_w0, t_w0, corr.S(t) / gs_sq, corr.A(t) / gs_sq};
      if (with_drude) {
        r.push_back(drude_corr.S(t) / gs_sq);
        r.push_back(drude_corr.A(t) / gs_sq);
      }
      table.rows[row++] = std::move(r);
    }
  });
  return table;
}

void write_table(const Table& table, std::ostream& out, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    for (size_t i = 0; i < table.columns.size(); ++i) {
      if (i > 0) out << ',';
      out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out << ',';
        out << format_value(row[i]);
      }
      out << '\n';
    }
    return;
  }
  // JSON: columns array plus row-major value array; NaN serializes as null
  out << "{\n  \"columns\": [";
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out << ", ";
    out << '"' << table.columns[i] << '"';
  }
  out << "],\n  \"rows\": [\n";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out << "    [";
    for (size_t i = 0; i < table.rows[r].size(); ++i) {
      if (i > 0) out << ", ";
      const double v = table.rows[r][i];
      if (std::isnan(v))
        out << "null";
      else
        out << format_value(v);
    }
    out << (r + 1 < table.rows.size() ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
}

Table read_csv_table(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_csv_table: empty input");
  std::stringstream header(line);
  std::string field;
  while (std::getline(header, field, ',')) table.columns.push_back(field);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    while (std::getline(cells, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
    if (row.size() != table.columns.size())
      throw ConfigError("read_csv_table: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace qbm
