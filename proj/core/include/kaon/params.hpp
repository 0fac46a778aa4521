#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kaon {

/// Physical inputs of the neutral-meson model in a single natural-unit system.
///
/// Widths and lambda are inverse times, masses are energies. Only the mass
/// difference enters the dynamics, so masses may be quoted relative to any
/// reference energy. Construction validates the invariants and throws
/// std::invalid_argument on violation; the object is immutable afterwards.
class PhysicalParams {
 public:
  PhysicalParams(double gamma_s, double gamma_l, double m_s, double m_l,
                 std::complex<double> epsilon, double lambda);

  double gamma_s() const noexcept { return gamma_s_; }
  double gamma_l() const noexcept { return gamma_l_; }
  double m_s() const noexcept { return m_s_; }
  double m_l() const noexcept { return m_l_; }
  std::complex<double> epsilon() const noexcept { return epsilon_; }
  double lambda() const noexcept { return lambda_; }

  /// (gamma_s + gamma_l) / 2
  double gamma_bar() const noexcept { return 0.5 * (gamma_s_ + gamma_l_); }
  /// m_l - m_s
  double delta_m() const noexcept { return m_l_ - m_s_; }
  /// 2 Re(epsilon) / (1 + |epsilon|^2)
  double delta_l() const noexcept {
    return 2.0 * epsilon_.real() / (1.0 + std::norm(epsilon_));
  }

  /// Copy with a different decoherence rate.
  PhysicalParams with_lambda(double lambda) const;

 private:
  double gamma_s_;
  double gamma_l_;
  double m_s_;
  double m_l_;
  std::complex<double> epsilon_;
  double lambda_;
};

/// Below small_tau_threshold = kSmallTauScale / gamma_l the 0/0 ratios of the
/// decay Kraus operators are evaluated through their series form.
inline constexpr double kSmallTauScale = 1e-6;
double small_tau_threshold(const PhysicalParams& params);

/// Radicand of the square root in the E2 Kraus operator at proper time tau:
///   1 - exp(-tau G_S) - dL^2 |1 - exp(-tau (G + lambda - i dm))|^2 / (1 - exp(-tau G_L))
/// Evaluated without cancellation for small tau; exactly 0 at tau = 0.
double decay_radicand(const PhysicalParams& params, double tau);

/// Result of scanning the complete-positivity radicand over (0, tau_max].
struct BoundReport {
  bool ok = true;
  double tau_at_min = 0.0;
  double min_radicand = 0.0;
  double tau_max = 0.0;
  std::size_t points = 0;

  std::string message() const;
};

inline constexpr double kRadicandTolerance = 1e-12;
inline constexpr std::size_t kBoundGridPoints = 100000;

/// Scans decay_radicand on a log-spaced grid over [1e-9 tau_max, tau_max].
/// Passes iff the minimum is >= -kRadicandTolerance. Throws
/// std::invalid_argument if tau_max <= 0 or points < 2.
BoundReport check_decoherence_bound(const PhysicalParams& params, double tau_max,
                                    std::size_t points = kBoundGridPoints);

/// Raised when lambda is too large for the Kraus operators to exist.
class BoundViolation : public std::runtime_error {
 public:
  BoundViolation(double tau, double radicand);
  double tau() const noexcept { return tau_; }
  double radicand() const noexcept { return radicand_; }

 private:
  double tau_;
  double radicand_;
};

/// A parameter set plus the rest mass used for Lorentz factors.
struct ParamSource {
  std::string name;
  PhysicalParams params;
  double rest_mass;
};

/// Named presets: "kaon-like" and "b-meson-like". Units: time in units of the
/// short-lived lifetime (kaon) or of the mean lifetime (B meson).
std::vector<std::string> preset_names();
ParamSource preset(std::string_view name);

/// Flat JSON object with keys gamma_s, gamma_l, m_s, m_l, epsilon_re,
/// epsilon_im, lambda and optional rest_mass. Throws std::invalid_argument on
/// malformed input.
ParamSource parse_params_json(std::string_view text);
ParamSource load_params_file(const std::filesystem::path& path);
std::string params_to_json(const ParamSource& source);

}  // namespace kaon
