#include "kaon/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace kaon::analytic {

namespace {

// Shared exponentials, named by what they multiply.
struct Terms {
  double dl;
  // exp(-(G + lambda)(tau_a + tau_b)) cos(dm dtau)
  double interference;
  // exp(-G_S tau_a - G_L tau_b) + exp(-G_L tau_a - G_S tau_b)
  double crossed_decays;
};

Terms terms(const PhysicalParams& p, const ProperTimePair& t) {
  const double g = p.gamma_bar() + p.lambda();
  return {p.delta_l(),
          std::exp(-g * (t.tau_a() + t.tau_b())) * std::cos(p.delta_m() * t.delta_tau()),
          std::exp(-p.gamma_s() * t.tau_a() - p.gamma_l() * t.tau_b()) +
              std::exp(-p.gamma_l() * t.tau_a() - p.gamma_s() * t.tau_b())};
}

// exp(-(G + lambda) tau) cos(dm tau)
double damped_oscillation(const PhysicalParams& p, double tau) {
  return std::exp(-(p.gamma_bar() + p.lambda()) * tau) * std::cos(p.delta_m() * tau);
}

}  // namespace

ProperTimePair::ProperTimePair(double tau_a, double tau_b) : tau_a_(tau_a), tau_b_(tau_b) {
  if (!(tau_a >= 0.0) || !(tau_b >= 0.0)) {
    throw std::invalid_argument("proper times must be nonnegative");
  }
}

double c_strangeness(const PhysicalParams& params, const ProperTimePair& times) {
  const Terms t = terms(params, times);
  const double prefactor = -1.0 / (1.0 - t.dl * t.dl);
  const double bracket = t.interference - 0.5 * t.dl * t.dl * t.crossed_decays;
  return prefactor * bracket;
}

double c_dplus_dplus(const PhysicalParams& params, const ProperTimePair& times) {
  const Terms t = terms(params, times);
  const double ta = times.tau_a();
  const double tb = times.tau_b();
  const double gs = params.gamma_s();
  const double gl = params.gamma_l();

  const double line1 = 1.0 - (1.0 + t.dl) / (1.0 - t.dl) * (t.interference - 0.5 * t.crossed_decays);
  const double line2 = -1.0 / (2.0 * (1.0 - t.dl)) *
                       (std::exp(-gs * ta) + std::exp(-gs * tb) + std::exp(-gl * ta) +
                        std::exp(-gl * tb));
  const double line3 =
      t.dl / (1.0 - t.dl) * (damped_oscillation(params, ta) + damped_oscillation(params, tb));
  return line1 + line2 + line3;
}

double c_dplus_dminus(const PhysicalParams& params, const ProperTimePair& times) {
  const Terms t = terms(params, times);
  const double ta = times.tau_a();
  const double tb = times.tau_b();
  const double gs = params.gamma_s();
  const double gl = params.gamma_l();

  const double line1 = 1.0 + t.interference;
  const double line2 = -1.0 / (2.0 * (1.0 - t.dl)) *
                       (std::exp(-ta * gs) + std::exp(-ta * gl) -
                        2.0 * t.dl * damped_oscillation(params, ta));
  const double line3 = -1.0 / (2.0 * (1.0 + t.dl)) *
                       (std::exp(-tb * gs) + std::exp(-tb * gl) +
                        2.0 * t.dl * damped_oscillation(params, tb));
  const double line4 = 0.5 * t.crossed_decays;
  return line1 + line2 + line3 + line4;
}

double joint_prob_analytic(const PhysicalParams& params, const ProperTimePair& times,
                           Flavor alice, Flavor bob) {
  const Terms t = terms(params, times);
  if (alice == bob) {
    const double bracket = t.crossed_decays - 2.0 * t.interference;
    const double ratio = alice == Flavor::K0 ? (1.0 + t.dl) / (1.0 - t.dl)
                                             : (1.0 - t.dl) / (1.0 + t.dl);
    return 0.125 * ratio * bracket;
  }
  return 0.125 * (t.crossed_decays + 2.0 * t.interference);
}

}  // namespace kaon::analytic
