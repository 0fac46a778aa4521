#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "kaon/sweep.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBound = 3;

struct Options {
  std::string preset = "kaon-like";
  std::string params_file;
  std::string observables = "S@p S@q";
  std::string mode = "distinguishable";
  std::string ta_range = "0:10:21";
  std::string tb_range = "0:10:21";
  double p_mom = 0.0;
  double q_mom = 0.0;
  std::string out;
  std::optional<double> tau_max;
};

void add_source_flags(CLI::App& cmd, Options& opt) {
  auto* preset = cmd.add_option("--preset", opt.preset, "named parameter set")
                     ->default_str("kaon-like");
  auto* file = cmd.add_option("--params", opt.params_file, "JSON parameter file");
  preset->excludes(file);
}

void add_sweep_flags(CLI::App& cmd, Options& opt) {
  add_source_flags(cmd, opt);
  cmd.add_option("--mode", opt.mode, "distinguishable | identical")
      ->check(CLI::IsMember({"distinguishable", "identical"}));
  cmd.add_option("--ta-range", opt.ta_range, "Alice's lab times lo:hi:n");
  cmd.add_option("--tb-range", opt.tb_range, "Bob's lab times lo:hi:n");
  cmd.add_option("--p-mom", opt.p_mom, "|p| of Alice's particle (along +z)");
  cmd.add_option("--q-mom", opt.q_mom, "|q| of Bob's particle (along -z)");
  cmd.add_option("--out", opt.out, "output CSV (default: stdout)");
}

kaon::cli::SweepConfig to_config(const Options& opt) {
  kaon::cli::SweepConfig config;
  config.preset = opt.preset;
  if (!opt.params_file.empty()) {
    config.params_file = opt.params_file;
  }
  config.observables = opt.observables;
  try {
    config.mode = kaon::parse_mode(opt.mode);
  } catch (const std::invalid_argument& e) {
    throw kaon::cli::ConfigError(e.what());
  }
  config.ta = kaon::cli::parse_range(opt.ta_range);
  config.tb = kaon::cli::parse_range(opt.tb_range);
  config.p_mom = opt.p_mom;
  config.q_mom = opt.q_mom;
  return config;
}

template <typename Writer>
int emit(const Options& opt, Writer writer) {
  const kaon::cli::SweepConfig config = to_config(opt);
  if (opt.out.empty()) {
    writer(config, std::cout);
    return 0;
  }
  // Render fully before touching the file so a failed run leaves no partial CSV.
  std::ostringstream buffer;
  writer(config, buffer);
  std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw kaon::cli::ConfigError("cannot open output file '" + opt.out + "'");
  }
  file << buffer.str();
  return 0;
}

int validate(const Options& opt) {
  kaon::cli::SweepConfig config;
  config.preset = opt.preset;
  if (!opt.params_file.empty()) {
    config.params_file = opt.params_file;
  }
  const kaon::ParamSource source = kaon::cli::resolve_params(config);
  std::cout << "parameters: " << source.name << '\n';
  const auto report = kaon::cli::run_validation(source.params, opt.tau_max);
  std::cout << report.text();
  return report.ok() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unstable neutral meson pairs under completely positive decoherent dynamics"};
  app.require_subcommand(1);

  Options opt;
  auto* correlate = app.add_subcommand("correlate", "correlation function over a time grid");
  add_sweep_flags(*correlate, opt);
  correlate->add_option("--observables", opt.observables, "pair such as \"D+@p D-@q\"");

  auto* probabilities =
      app.add_subcommand("probabilities", "joint flavor-detection probabilities over a grid");
  add_sweep_flags(*probabilities, opt);

  auto* validate_cmd = app.add_subcommand("validate", "run every invariant check");
  add_source_flags(*validate_cmd, opt);
  validate_cmd->add_option("--tau-max", opt.tau_max,
                           "upper end of the positivity scan (default 20/gamma_l)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*correlate) {
      return emit(opt, kaon::cli::write_correlations);
    }
    if (*probabilities) {
      return emit(opt, kaon::cli::write_probabilities);
    }
    return validate(opt);
  } catch (const kaon::BoundViolation& e) {
    std::cerr << "error: " << e.what() << '\n'
              << "minimizing tau = " << kaon::cli::format_double(e.tau()) << '\n';
    return kExitBound;
  } catch (const kaon::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
