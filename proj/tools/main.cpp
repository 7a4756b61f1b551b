// qbm: statistics of a damped harmonic oscillator under repeated Gaussian
// measurements. Subcommands produce the tables behind the figure plots.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qbm/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->required();
  cmd->add_option("--out", args.out_path, "output path (default: config output.path or stdout)");
  cmd->add_option("--format", args.format, "csv or json (overrides config)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
}

qbm::RunConfig load(const CommonArgs& args) {
  qbm::RunConfig config = qbm::load_config(args.config_path);
  if (!args.out_path.empty()) config.out_path = args.out_path;
  if (args.format == "csv") config.format = qbm::OutputFormat::Csv;
  if (args.format == "json") config.format = qbm::OutputFormat::Json;
  if (const char* env = std::getenv("QBM_MAX_TERMS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1)
      throw qbm::ConfigError("QBM_MAX_TERMS must be a positive integer");
    config.series.max_terms = static_cast<int>(n);
  }
  return config;
}

void emit(const qbm::Table& table, const qbm::RunConfig& config) {
  if (config.out_path.empty()) {
    qbm::write_table(table, std::cout, config.format);
    return;
  }
  std::ofstream out(config.out_path);
  if (!out) throw qbm::ConfigError("cannot open output path " + config.out_path);
  qbm::write_table(table, out, config.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monitored damped-oscillator statistics"};
  app.require_subcommand(1);

  CommonArgs surface_args, variance_args, correlator_args;
  CLI::App* surface =
      app.add_subcommand("surface", "conditional density P(x_F, t_bar) over a sweep");
  add_common(surface, surface_args);
  CLI::App* variance =
      app.add_subcommand("variance", "conditional variance curves with closed-form limits");
  add_common(variance, variance_args);
  CLI::App* correlators =
      app.add_subcommand("correlators", "equilibrium correlation kernels S(t), A(t)");
  add_common(correlators, correlator_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (surface->parsed()) {
      const qbm::RunConfig config = load(surface_args);
      emit(qbm::run_density_surface(config, surface_args.threads), config);
    } else if (variance->parsed()) {
      const qbm::RunConfig config = load(variance_args);
      emit(qbm::run_variance_curve(config, variance_args.threads), config);
    } else {
      const qbm::RunConfig config = load(correlator_args);
      emit(qbm::run_correlators(config, correlator_args.threads), config);
    }
  } catch (const qbm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qbm::UnsupportedRegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const qbm::UnsupportedObservableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const qbm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qbm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
