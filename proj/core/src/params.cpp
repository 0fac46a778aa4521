#include "kaon/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "expm1.hpp"

namespace kaon {

namespace {

std::string format_number(double value) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << value;
  return os.str();
}

}  // namespace

PhysicalParams::PhysicalParams(double gamma_s, double gamma_l, double m_s, double m_l,
                               std::complex<double> epsilon, double lambda)
    : gamma_s_(gamma_s),
      gamma_l_(gamma_l),
      m_s_(m_s),
      m_l_(m_l),
      epsilon_(epsilon),
      lambda_(lambda) {
  if (!std::isfinite(gamma_s) || gamma_s <= 0.0) {
    throw std::invalid_argument("gamma_s must be a positive finite width");
  }
  if (!std::isfinite(gamma_l) || gamma_l <= 0.0) {
    throw std::invalid_argument("gamma_l must be a positive finite width");
  }
  if (!std::isfinite(m_s) || !std::isfinite(m_l)) {
    throw std::invalid_argument("masses must be finite");
  }
  if (!std::isfinite(epsilon.real()) || !std::isfinite(epsilon.imag()) ||
      std::abs(epsilon) >= 1.0) {
    throw std::invalid_argument("|epsilon| must be < 1");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("lambda must be nonnegative and finite");
  }
}

PhysicalParams PhysicalParams::with_lambda(double lambda) const {
  return {gamma_s_, gamma_l_, m_s_, m_l_, epsilon_, lambda};
}

double small_tau_threshold(const PhysicalParams& params) {
  return kSmallTauScale / params.gamma_l();
}

double decay_radicand(const PhysicalParams& params, double tau) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("radicand defined for nonnegative proper time only");
  }
  if (tau == 0.0) {
    return 0.0;
  }
  const double dl = params.delta_l();
  const std::complex<double> rate{params.gamma_bar() + params.lambda(), -params.delta_m()};
  const double short_decayed = -std::expm1(-tau * params.gamma_s());

  // |1 - exp(-tau rate)|^2 / (1 - exp(-tau gamma_l))
  double ratio = 0.0;
  if (tau < small_tau_threshold(params)) {
    ratio = tau * std::norm(rate * detail::exprel(-tau * rate)) /
            (params.gamma_l() * detail::exprel(-tau * params.gamma_l()));
  } else {
    ratio = std::norm(detail::expm1(-tau * rate)) / (-std::expm1(-tau * params.gamma_l()));
  }
  return short_decayed - dl * dl * ratio;
}

std::string BoundReport::message() const {
  std::ostringstream os;
  if (ok) {
    os << "complete-positivity bound satisfied on (0, " << format_number(tau_max)
       << "]: min radicand " << format_number(min_radicand) << " at tau = "
       << format_number(tau_at_min);
  } else {
    os << "lambda exceeds complete-positivity bound for these parameters: radicand "
       << format_number(min_radicand) << " at tau = " << format_number(tau_at_min);
  }
  return os.str();
}

BoundReport check_decoherence_bound(const PhysicalParams& params, double tau_max,
                                    std::size_t points) {
  if (!std::isfinite(tau_max) || tau_max <= 0.0) {
    throw std::invalid_argument("tau_max must be positive");
  }
  if (points < 2) {
    throw std::invalid_argument("bound scan needs at least two grid points");
  }
  BoundReport report;
  report.tau_max = tau_max;
  report.points = points;
  report.min_radicand = std::numeric_limits<double>::infinity();

  const double lo = 1e-9 * tau_max;
  const double log_span = std::log(tau_max / lo);
  for (std::size_t i = 0; i < points; ++i) {
    const double tau = (i + 1 == points)
                           ? tau_max
                           : lo * std::exp(log_span * static_cast<double>(i) /
                                           static_cast<double>(points - 1));
    const double r = decay_radicand(params, tau);
    if (r < report.min_radicand) {
      report.min_radicand = r;
      report.tau_at_min = tau;
    }
  }
  report.ok = report.min_radicand >= -kRadicandTolerance;
  return report;
}

BoundViolation::BoundViolation(double tau, double radicand)
    : std::runtime_error("lambda exceeds complete-positivity bound for these parameters: "
                         "radicand " + format_number(radicand) + " at tau = " +
                         format_number(tau)),
      tau_(tau),
      radicand_(radicand) {}

std::vector<std::string> preset_names() { return {"kaon-like", "b-meson-like"}; }

ParamSource preset(std::string_view name) {
  // External reference values (PDG-style averages), not model output.
  if (name == "kaon-like") {
    // Time unit: K_S lifetime 0.8954e-10 s; energy unit hbar / tau_S.
    // tau_L = 5.116e-8 s, dm = 0.5293e10 hbar/s, |eps| = 2.228e-3 at 43.52 deg,
    // m_K = 497.611 MeV.
    constexpr double dm = 0.47393522;
    return {"kaon-like",
            PhysicalParams(1.0, 1.7501954652071928e-3, -0.5 * dm, 0.5 * dm,
                           {1.6155986539298712e-3, 1.5342180384221758e-3}, 0.0),
            6.7692615536562e13};
  }
  if (name == "b-meson-like") {
    // Time unit: B0 lifetime 1.519e-12 s; dGamma/Gamma = 1e-3, x_d = 0.769,
    // |q/p| - 1 ~ 5e-4, m_B = 5279.65 MeV.
    constexpr double dm = 0.769;
    return {"b-meson-like",
            PhysicalParams(1.0005, 0.9995, -0.5 * dm, 0.5 * dm, {2.5e-4, 0.0}, 0.0),
            1.2184203379974e13};
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace kaon
