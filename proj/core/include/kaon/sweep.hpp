#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kaon/evolution.hpp"
#include "kaon/observables.hpp"
#include "kaon/params.hpp"

namespace kaon::cli {

/// Bad user configuration (maps to exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inclusive linear grid "lo:hi:n"; n = 1 yields just lo.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  std::vector<double> points() const;
};

GridRange parse_range(std::string_view text);

struct SweepConfig {
  std::string preset;                           ///< used when params_file is empty
  std::optional<std::filesystem::path> params_file;
  std::string observables = "S@p S@q";
  Mode mode = Mode::distinguishable;
  GridRange ta{};
  GridRange tb{};
  double p_mom = 0.0;  ///< |p| of Alice's kaon, along +z
  double q_mom = 0.0;  ///< |q| of Bob's kaon, along -z
};

ParamSource resolve_params(const SweepConfig& config);

/// "S@p S@q" -> (Alice's, Bob's) observable; Alice must sit at p, Bob at q.
std::pair<ObservableSpec, ObservableSpec> parse_observable_pair(std::string_view text);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Writes the correlation CSV. Throws ConfigError or BoundViolation.
void write_correlations(const SweepConfig& config, std::ostream& out);
/// Writes the joint-probability CSV for the four flavor pairs.
void write_probabilities(const SweepConfig& config, std::ostream& out);

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const;
  std::string text() const;
};

/// Runs every invariant suite for a parameter set. tau_max bounds the
/// complete-positivity scan; defaults to 20 / gamma_l.
ValidationReport run_validation(const PhysicalParams& params,
                                std::optional<double> tau_max = std::nullopt);

}  // namespace kaon::cli
