#pragma once

#include "kaon/hilbert.hpp"
#include "kaon/params.hpp"

namespace kaon::analytic {

/// Proper times of Alice's (momentum p) and Bob's (momentum q) detections.
class ProperTimePair {
 public:
  ProperTimePair(double tau_a, double tau_b);

  double tau_a() const noexcept { return tau_a_; }
  double tau_b() const noexcept { return tau_b_; }
  double delta_tau() const noexcept { return tau_b_ - tau_a_; }

 private:
  double tau_a_;
  double tau_b_;
};

// Closed forms for the flavor singlet of distinguishable kaons. Each is
// transcribed term by term; do not simplify.

/// Strangeness correlation C_{S S}.
double c_strangeness(const PhysicalParams& params, const ProperTimePair& times);
/// C_{D+ D+}
double c_dplus_dplus(const PhysicalParams& params, const ProperTimePair& times);
/// C_{D+ D-}
double c_dplus_dminus(const PhysicalParams& params, const ProperTimePair& times);

/// Probability that Alice registers `alice` at tau_a and Bob registers `bob`
/// at tau_b.
double joint_prob_analytic(const PhysicalParams& params, const ProperTimePair& times,
                           Flavor alice, Flavor bob);

}  // namespace kaon::analytic
