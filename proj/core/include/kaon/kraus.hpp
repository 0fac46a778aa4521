#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kaon/hilbert.hpp"
#include "kaon/params.hpp"

namespace kaon {

/// tau = t / gamma(k). Throws std::invalid_argument for t < 0.
double proper_time(double t, const Momentum& k);

/// Rest-frame matrix elements of the five particle Kraus operators at proper
/// time tau, in the flavor basis (K0, K0bar). E1, E4, E5 act within the
/// flavor block; E2, E3 map it onto the vacuum.
struct RestFrameKraus {
  double tau = 0.0;
  Eigen::Matrix2cd e1;
  Eigen::RowVector2cd e2;
  Eigen::RowVector2cd e3;
  Eigen::Matrix2cd e4;
  Eigen::Matrix2cd e5;
};

/// Throws BoundViolation if the E2 radicand is below -kRadicandTolerance.
RestFrameKraus rest_frame_kraus(const PhysicalParams& params, double tau);

/// One-particle Kraus family at lab time t.
///
/// Ordering: operators[0] is the vacuum projector E0; then E1..E5 i-major,
/// each over the layout's momenta in order, evaluated at tau_k = t / gamma_k.
struct KrausSet {
  Layout layout;
  double lab_time = 0.0;
  std::vector<Operator> operators;

  std::size_t momentum_count() const { return layout.factor(0).momenta().size(); }
  /// E_i for the momentum at `position`; i in 1..5.
  const Operator& at(int i, std::size_t position) const;
};

KrausSet build_kraus(const PhysicalParams& params, const SpaceLayout& layout, double t);

/// All products a (x) b over the two families, first-factor-major.
std::vector<Operator> two_particle_kraus(const KrausSet& a, const KrausSet& b);

/// ||sum E^dagger E - 1||_max
double verify_normalization(std::span<const Operator> family);
inline double verify_normalization(const KrausSet& set) {
  return verify_normalization(set.operators);
}

}  // namespace kaon
