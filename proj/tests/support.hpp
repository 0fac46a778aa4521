#pragma once

// Shared fixtures and independent reference formulas for the tests. Nothing
// here calls into kaon::build_kraus or kaon::analytic, so it can be used to
// cross-check both.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "kaon/params.hpp"

namespace kaon::test {

using Mat3 = Eigen::Matrix3cd;
using cd = std::complex<double>;

// Real epsilon with 2 eps / (1 + eps^2) = delta_l.
inline double epsilon_for(double delta_l) {
  if (delta_l == 0.0) return 0.0;
  return (1.0 - std::sqrt(1.0 - delta_l * delta_l)) / delta_l;
}

inline PhysicalParams make_params(double gamma_s, double gamma_l, double delta_m, double delta_l,
                                  double lambda) {
  return {gamma_s, gamma_l, -0.5 * delta_m, 0.5 * delta_m, {epsilon_for(delta_l), 0.0}, lambda};
}

// The reference parameter set used throughout: Gamma_S = 1, Gamma_L = 0.002,
// dm = 0.47.
inline PhysicalParams reference_params(double delta_l, double lambda) {
  return make_params(1.0, 0.002, 0.47, delta_l, lambda);
}

// Random parameters that satisfy the positivity bound on [0, 20 / gamma_l].
inline PhysicalParams random_valid_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double gs = 0.5 + 1.5 * u(rng);
    const double gl = gs * (0.002 + 0.6 * u(rng));
    const double dm = 0.1 + 1.9 * u(rng);
    const double ms = -1.0 + 2.0 * u(rng);
    const double lambda = u(rng) < 0.3 ? 0.0 : 0.3 * gs * u(rng);
    const std::complex<double> w(0.5 * (gs + gl) + lambda, -dm);
    const double dl_max = std::sqrt(gs * gl) / std::abs(w);
    const double re = epsilon_for(0.95 * dl_max * (2.0 * u(rng) - 1.0));
    const double im = 0.02 * (2.0 * u(rng) - 1.0);
    PhysicalParams p(gs, gl, ms, ms + dm, {re, im}, lambda);
    if (check_decoherence_bound(p, 20.0 / gl, 4000).ok) {
      return p;
    }
  }
}

// Appendix formulas written out literally on the basis {vacuum, K0, K0bar},
// with absolute masses and no small-tau rewriting. Valid for tau > 0 only.
inline std::array<Mat3, 6> literal_kraus(const PhysicalParams& p, double tau) {
  const cd eps = p.epsilon();
  const double gs = p.gamma_s();
  const double gl = p.gamma_l();
  const double lam = p.lambda();
  const double dl = p.delta_l();
  const cd i(0.0, 1.0);
  const cd r = (1.0 + eps) / (1.0 - eps);
  const cd z = std::exp(-tau * (p.gamma_bar() + lam - i * p.delta_m()));

  std::array<Mat3, 6> e;
  for (auto& m : e) m.setZero();
  e[0](0, 0) = 1.0;

  const cd es = std::exp(-tau * (lam + 2.0 * i * p.m_s() + gs) / 2.0);
  const cd el = std::exp(-tau * (lam + 2.0 * i * p.m_l() + gl) / 2.0);
  e[1](1, 1) = e[1](2, 2) = 0.5 * (es + el);
  e[1](1, 2) = 0.5 * (es - el) * r;
  e[1](2, 1) = 0.5 * (es - el) / r;

  const double dL = 1.0 - std::exp(-tau * gl);
  const double radicand = 1.0 - std::exp(-tau * gs) - dl * dl * std::norm(1.0 - z) / dL;
  const double c2 = std::sqrt((1.0 + std::norm(eps)) / 2.0) * std::sqrt(std::max(radicand, 0.0));
  e[2](0, 1) = c2 / (1.0 + eps);
  e[2](0, 2) = c2 / (1.0 - eps);

  const double c3 = std::sqrt((1.0 + std::norm(eps)) / (2.0 * dL));
  e[3](0, 1) = c3 * (dL + dl - z * dl) / (1.0 + eps);
  e[3](0, 2) = -c3 * (dL - dl + z * dl) / (1.0 - eps);

  const double s = std::sqrt(1.0 - std::exp(-tau * lam));
  const double c4 = 0.5 * std::exp(-tau * gs / 2.0) * s;
  const double c5 = 0.5 * std::exp(-tau * gl / 2.0) * s;
  e[4] << 0, 0, 0, 0, c4, c4 * r, 0, c4 / r, c4;
  e[5] << 0, 0, 0, 0, c5, -c5 * r, 0, -c5 / r, c5;
  return e;
}

inline Mat3 literal_dual(const PhysicalParams& p, double tau, const Mat3& a) {
  if (tau == 0.0) {
    // identity channel on the flavor block, vacuum kept
    Mat3 out = Mat3::Zero();
    out(0, 0) = a(0, 0);
    out.block<2, 2>(1, 1) = a.block<2, 2>(1, 1);
    return out;
  }
  Mat3 out = Mat3::Zero();
  for (const auto& e : literal_kraus(p, tau)) out += e.adjoint() * a * e;
  return out;
}

// <psi| A(tau_a) (x) B(tau_b) |psi> on the 9-dimensional singlet
// (|K0,p>|K0bar,q> - |K0bar,p>|K0,q>) / sqrt 2.
inline double singlet_correlation(const PhysicalParams& p, const Mat3& a, const Mat3& b,
                                  double tau_a, double tau_b) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
  psi(1 * 3 + 2) = 1.0 / std::sqrt(2.0);
  psi(2 * 3 + 1) = -1.0 / std::sqrt(2.0);
  const Mat3 at = literal_dual(p, tau_a, a);
  const Mat3 bt = literal_dual(p, tau_b, b);
  Eigen::MatrixXcd k(9, 9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) k.block(3 * r, 3 * c, 3, 3) = at(r, c) * bt;
  return (psi.adjoint() * k * psi)(0, 0).real();
}

inline Mat3 strangeness3() {
  Mat3 s = Mat3::Zero();
  s(1, 1) = 1.0;
  s(2, 2) = -1.0;
  return s;
}

// D+ = |K0><K0| - |K0bar><K0bar| - |0><0|, D- with the flavor terms flipped.
inline Mat3 dplus3() {
  Mat3 d = strangeness3();
  d(0, 0) = -1.0;
  return d;
}

inline Mat3 dminus3() {
  Mat3 d = -strangeness3();
  d(0, 0) = -1.0;
  return d;
}

// delta_l = lambda = 0 strangeness correlation.
inline double bertlmann(const PhysicalParams& p, double tau_a, double tau_b) {
  return -std::exp(-p.gamma_bar() * (tau_a + tau_b)) * std::cos(p.delta_m() * (tau_b - tau_a));
}

}  // namespace kaon::test
