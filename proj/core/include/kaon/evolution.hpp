#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kaon/hilbert.hpp"
#include "kaon/params.hpp"

namespace kaon {

/// Particle statistics of a two-particle layout.
enum class Mode { distinguishable, identical };

std::string_view to_string(Mode mode);
/// "distinguishable" | "identical"; throws std::invalid_argument otherwise.
Mode parse_mode(std::string_view text);

/// Eigenvalues closer than this form one measurement outcome.
inline constexpr double kEigenGroupTolerance = 1e-9;
/// Outcomes below this probability carry no post-measurement state.
inline constexpr double kMinOutcomeProbability = 1e-14;

/// Kraus family of the lab-frame channel at time t: the one-particle family
/// for a single layout, the product family for a composite one.
std::vector<Operator> channel_kraus(const PhysicalParams& params, const Layout& layout, double t);

/// sum_i E_i rho E_i^dagger
DensityOperator apply_channel(const DensityOperator& rho, std::span<const Operator> kraus);
DensityOperator evolve(const DensityOperator& rho, const PhysicalParams& params, double t);

/// Dual channel: sum_i E_i^dagger obs E_i.
Operator heisenberg_observable(const Operator& obs, std::span<const Operator> kraus);

struct SpectralProjector {
  double eigenvalue;
  Operator projector;
};

/// Distinct eigenvalues (ascending) with their spectral projectors. The
/// observable must be Hermitian.
std::vector<SpectralProjector> spectral_decomposition(const Operator& observable,
                                                      double group_tol = kEigenGroupTolerance);

struct MeasurementOutcome {
  double eigenvalue;
  double probability;
  std::optional<DensityOperator> post_state;  ///< empty when probability <= 1e-14
};

/// Projective measurement of a Hermitian observable. On identical-factor
/// layouts the observable must commute with the swap operator.
std::vector<MeasurementOutcome> measure(const DensityOperator& rho, const Operator& observable);

/// Sequential route: evolve to t_a, collapse on proj_a, evolve by t_b - t_a,
/// apply proj_b; returns p_a * p_{b|a}. Requires 0 <= t_a <= t_b.
double joint_probability(const DensityOperator& rho0, const Operator& proj_a,
                         const Operator& proj_b, const PhysicalParams& params, double t_a,
                         double t_b);

/// Heisenberg route: tr[rho0 A(t_a) B(t_b)] with each projector evolved by the
/// dual channel (local one-particle duals in distinguishable mode, the
/// two-particle dual in identical mode). No ordering requirement.
double joint_probability_heisenberg(const DensityOperator& rho0, const Operator& proj_a,
                                    const Operator& proj_b, const PhysicalParams& params,
                                    double t_a, double t_b, Mode mode);

struct CorrelationResult {
  double t_a = 0.0;
  double t_b = 0.0;
  double tau_a = 0.0;
  double tau_b = 0.0;
  double value = 0.0;
  std::optional<double> analytic;
  std::optional<double> deviation;

  void set_analytic(double reference) {
    analytic = reference;
    deviation = std::abs(value - reference);
  }
};

/// Correlation of Alice's obs_a (momentum p) and Bob's obs_b (momentum q).
///
/// Distinguishable mode: obs_a = A (x) 1 and obs_b = 1 (x) B on a layout with
/// Q = {p}, Q' = {q}; the value is tr{rho0 [A(tau_a) (x) B(tau_b)]} with
/// one-particle dual channels. Identical mode: Q = Q' = {p, q}, symmetric
/// commuting observables, value tr[rho0 A(t_a) B(t_b)] with the two-particle
/// dual channel. tau_a / tau_b are the proper times of p and q.
CorrelationResult correlation(const DensityOperator& rho0, const Operator& obs_a,
                              const Operator& obs_b, const PhysicalParams& params, double t_a,
                              double t_b, Mode mode);

/// Same as correlation() over a grid; rows are t_a-major. Dual-channel images
/// are computed once per grid time.
std::vector<CorrelationResult> correlation_grid(const DensityOperator& rho0,
                                                const Operator& obs_a, const Operator& obs_b,
                                                const PhysicalParams& params,
                                                std::span<const double> t_a,
                                                std::span<const double> t_b, Mode mode);

/// sum_ab a b p_ab through the sequential route. Requires t_a <= t_b.
double correlation_from_probabilities(const DensityOperator& rho0, const Operator& obs_a,
                                      const Operator& obs_b, const PhysicalParams& params,
                                      double t_a, double t_b);

/// Local factor of a composite operator of the form A (x) 1 (slot 0) or
/// 1 (x) B (slot 1). Throws std::invalid_argument if the operator is not local.
Operator local_factor(const Operator& op, std::size_t slot);

/// Proper times (tau_p, tau_q) of the two detector momenta for a pair layout.
std::pair<double, double> detector_proper_times(const Layout& layout, double t_a, double t_b,
                                                Mode mode);

}  // namespace kaon
