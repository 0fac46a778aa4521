#include "kaon/kraus.hpp"

#include <cmath>
#include <stdexcept>

#include "expm1.hpp"

namespace kaon {

double proper_time(double t, const Momentum& k) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("evolution defined for nonnegative time only");
  }
  return t / k.gamma();
}

RestFrameKraus rest_frame_kraus(const PhysicalParams& params, double tau) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("evolution defined for nonnegative time only");
  }
  const Complex eps = params.epsilon();
  const Complex one{1.0};
  const Complex ratio = (one + eps) / (one - eps);
  const double dl = params.delta_l();
  const double dm = params.delta_m();
  const double lambda = params.lambda();

  RestFrameKraus k;
  k.tau = tau;

  // exp(-tau (lambda + 2i m + G) / 2) for S and L with the common mean-mass
  // phase pulled out so only tau*dm sets the relative phase.
  const double mean_mass = 0.5 * (params.m_s() + params.m_l());
  const Complex common = std::polar(1.0, -tau * mean_mass);
  const Complex e_s = common * std::exp(Complex(-0.5 * tau * (lambda + params.gamma_s()), 0.5 * tau * dm));
  const Complex e_l = common * std::exp(Complex(-0.5 * tau * (lambda + params.gamma_l()), -0.5 * tau * dm));
  const Complex sum = 0.5 * (e_s + e_l);
  const Complex diff = 0.5 * (e_s - e_l);
  k.e1 << sum, diff * ratio, diff / ratio, sum;

  const double radicand = decay_radicand(params, tau);
  if (radicand < -kRadicandTolerance) {
    throw BoundViolation(tau, radicand);
  }
  const double norm_factor = std::sqrt(0.5 * (1.0 + std::norm(eps)));
  const double c2 = norm_factor * std::sqrt(std::max(radicand, 0.0));
  k.e2 << c2 / (one + eps), c2 / (one - eps);

  // sqrt(1 - exp(-tau G_L)) and (1 - exp(-tau w)) / sqrt(1 - exp(-tau G_L)),
  // w = G + lambda - i dm. Both vanish like sqrt(tau).
  const Complex rate{params.gamma_bar() + lambda, -dm};
  double root_d = 0.0;
  Complex u_over_root_d{0.0};
  if (tau < small_tau_threshold(params)) {
    const double d_over_tau = params.gamma_l() * detail::exprel(-tau * params.gamma_l());
    root_d = std::sqrt(tau * d_over_tau);
    u_over_root_d = std::sqrt(tau) * rate * detail::exprel(-tau * rate) / std::sqrt(d_over_tau);
  } else {
    root_d = std::sqrt(-std::expm1(-tau * params.gamma_l()));
    u_over_root_d = -detail::expm1(-tau * rate) / root_d;
  }
  k.e3 << norm_factor * (root_d + dl * u_over_root_d) / (one + eps),
      -norm_factor * (root_d - dl * u_over_root_d) / (one - eps);

  const double decohered = std::sqrt(-std::expm1(-tau * lambda));
  const double c4 = 0.5 * std::exp(-0.5 * tau * params.gamma_s()) * decohered;
  const double c5 = 0.5 * std::exp(-0.5 * tau * params.gamma_l()) * decohered;
  k.e4 << c4, c4 * ratio, c4 / ratio, c4;
  k.e5 << c5, -c5 * ratio, -c5 / ratio, c5;
  return k;
}

const Operator& KrausSet::at(int i, std::size_t position) const {
  const std::size_t n = momentum_count();
  if (i < 1 || i > 5 || position >= n) {
    throw std::out_of_range("Kraus index out of range");
  }
  return operators[1 + static_cast<std::size_t>(i - 1) * n + position];
}

KrausSet build_kraus(const PhysicalParams& params, const SpaceLayout& layout, double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("evolution defined for nonnegative time only");
  }
  KrausSet set{Layout(layout), t, {}};
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  const std::size_t n = layout.momenta().size();

  std::vector<RestFrameKraus> blocks;
  blocks.reserve(n);
  for (const auto& k : layout.momenta()) {
    blocks.push_back(rest_frame_kraus(params, proper_time(t, k)));
  }

  set.operators.reserve(1 + 5 * n);
  set.operators.push_back(Operator::projector(set.layout, SpaceLayout::kVacuum));
  for (int i = 1; i <= 5; ++i) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto off = static_cast<Eigen::Index>(SpaceLayout::block_offset(pos));
      const RestFrameKraus& b = blocks[pos];
      Matrix m = Matrix::Zero(dim, dim);
      switch (i) {
        case 1: m.block(off, off, 2, 2) = b.e1; break;
        case 2: m.block(SpaceLayout::kVacuum, off, 1, 2) = b.e2; break;
        case 3: m.block(SpaceLayout::kVacuum, off, 1, 2) = b.e3; break;
        case 4: m.block(off, off, 2, 2) = b.e4; break;
        case 5: m.block(off, off, 2, 2) = b.e5; break;
      }
      set.operators.emplace_back(set.layout, std::move(m));
    }
  }
  return set;
}

std::vector<Operator> two_particle_kraus(const KrausSet& a, const KrausSet& b) {
  const Layout composite(a.layout.factor(0), b.layout.factor(0));
  std::vector<Operator> out;
  out.reserve(a.operators.size() * b.operators.size());
  for (const auto& ea : a.operators) {
    for (const auto& eb : b.operators) {
      out.push_back(tensor(ea, eb, composite));
    }
  }
  return out;
}

double verify_normalization(std::span<const Operator> family) {
  if (family.empty()) {
    throw std::invalid_argument("empty Kraus family");
  }
  const Layout& layout = family.front().layout();
  Matrix total = Matrix::Zero(static_cast<Eigen::Index>(layout.dimension()),
                              static_cast<Eigen::Index>(layout.dimension()));
  for (const auto& e : family) {
    if (!(e.layout() == layout)) {
      throw std::invalid_argument("layout mismatch in Kraus family");
    }
    total.noalias() += e.matrix().adjoint() * e.matrix();
  }
  total -= Matrix::Identity(total.rows(), total.cols());
  return total.cwiseAbs().maxCoeff();
}

}  // namespace kaon
