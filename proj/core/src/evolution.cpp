#include "kaon/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kaon/kraus.hpp"

namespace kaon {

namespace {

constexpr double kLocalityTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

Matrix apply_kraus(const Matrix& rho, std::span<const Operator> kraus) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  Matrix tmp(rho.rows(), rho.cols());
  for (const auto& e : kraus) {
    tmp.noalias() = e.matrix() * rho;
    out.noalias() += tmp * e.matrix().adjoint();
  }
  return out;
}

Matrix apply_dual(const Matrix& obs, std::span<const Operator> kraus) {
  Matrix out = Matrix::Zero(obs.rows(), obs.cols());
  Matrix tmp(obs.rows(), obs.cols());
  for (const auto& e : kraus) {
    tmp.noalias() = obs * e.matrix();
    out.noalias() += e.matrix().adjoint() * tmp;
  }
  return out;
}

void require_layout(const Layout& expected, const Operator& op, const char* what) {
  if (!(op.layout() == expected)) {
    throw std::invalid_argument(std::string("layout mismatch: ") + what);
  }
}

void require_mode_layout(const Layout& layout, Mode mode) {
  if (!layout.is_composite()) {
    throw std::invalid_argument("pair correlations need a two-particle layout");
  }
  if (mode == Mode::distinguishable) {
    if (layout.factor(0).momenta().size() != 1 || layout.factor(1).momenta().size() != 1) {
      throw std::invalid_argument(
          "distinguishable mode expects one momentum per particle (Q = {p}, Q' = {q})");
    }
  } else {
    if (!layout.identical_factors() || layout.factor(0).momenta().size() != 2) {
      throw std::invalid_argument("identical mode expects Q = Q' = {p, q}");
    }
  }
}

void require_symmetric_pair(const Operator& a, const Operator& b) {
  if (!is_symmetric(a, kSymmetryTolerance) || !is_symmetric(b, kSymmetryTolerance)) {
    throw std::invalid_argument("observable violates permutation symmetry");
  }
  if (!commute(a, b, kSymmetryTolerance)) {
    throw std::invalid_argument("Alice's and Bob's observables must commute");
  }
}

// Dual-channel images of one observable at each of the given times.
std::vector<Matrix> evolved_observables(const Operator& obs, std::size_t slot,
                                        const PhysicalParams& params,
                                        std::span<const double> times, Mode mode) {
  const Layout& layout = obs.layout();
  std::vector<Matrix> out;
  out.reserve(times.size());
  if (mode == Mode::distinguishable) {
    const Operator local = local_factor(obs, slot);
    const Operator id = Operator::identity(Layout(layout.factor(1 - slot)));
    for (double t : times) {
      const KrausSet set = build_kraus(params, layout.factor(slot), t);
      const Operator evolved(local.layout(), apply_dual(local.matrix(), set.operators));
      out.push_back(slot == 0 ? tensor(evolved, id, layout).matrix()
                              : tensor(id, evolved, layout).matrix());
    }
  } else {
    for (double t : times) {
      const auto kraus = channel_kraus(params, layout, t);
      out.push_back(apply_dual(obs.matrix(), kraus));
    }
  }
  return out;
}

double trace_product(const Matrix& rho, const Matrix& a, const Matrix& b) {
  const Matrix ab = a * b;
  return (rho.transpose().cwiseProduct(ab)).sum().real();
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::distinguishable ? "distinguishable" : "identical";
}

Mode parse_mode(std::string_view text) {
  if (text == "distinguishable") return Mode::distinguishable;
  if (text == "identical") return Mode::identical;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected distinguishable|identical)");
}

std::vector<Operator> channel_kraus(const PhysicalParams& params, const Layout& layout, double t) {
  if (!layout.is_composite()) {
    return build_kraus(params, layout.factor(0), t).operators;
  }
  return two_particle_kraus(build_kraus(params, layout.factor(0), t),
                            build_kraus(params, layout.factor(1), t));
}

DensityOperator apply_channel(const DensityOperator& rho, std::span<const Operator> kraus) {
  for (const auto& e : kraus) {
    require_layout(rho.layout(), e, "Kraus operator vs state");
  }
  return DensityOperator::unchecked(Operator(rho.layout(), apply_kraus(rho.matrix(), kraus)));
}

DensityOperator evolve(const DensityOperator& rho, const PhysicalParams& params, double t) {
  const auto kraus = channel_kraus(params, rho.layout(), t);
  return apply_channel(rho, kraus);
}

Operator heisenberg_observable(const Operator& obs, std::span<const Operator> kraus) {
  for (const auto& e : kraus) {
    require_layout(obs.layout(), e, "Kraus operator vs observable");
  }
  return {obs.layout(), apply_dual(obs.matrix(), kraus)};
}

std::vector<SpectralProjector> spectral_decomposition(const Operator& observable,
                                                      double group_tol) {
  if (!observable.is_hermitian(1e-12)) {
    throw std::invalid_argument("observable is not Hermitian");
  }
  const Matrix herm = 0.5 * (observable.matrix() + observable.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();

  std::vector<SpectralProjector> out;
  Eigen::Index start = 0;
  const Eigen::Index n = values.size();
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end) - values(start) <= group_tol) {
      ++end;
    }
    const auto cols = vectors.middleCols(start, end - start);
    const double mean = values.segment(start, end - start).mean();
    out.push_back({mean, Operator(observable.layout(), cols * cols.adjoint())});
    start = end;
  }
  return out;
}

std::vector<MeasurementOutcome> measure(const DensityOperator& rho, const Operator& observable) {
  require_layout(rho.layout(), observable, "observable vs state");
  if (rho.layout().identical_factors() && !is_symmetric(observable, kSymmetryTolerance)) {
    throw std::invalid_argument("observable violates permutation symmetry");
  }
  std::vector<MeasurementOutcome> out;
  for (const auto& [value, proj] : spectral_decomposition(observable)) {
    const Matrix collapsed = proj.matrix() * rho.matrix() * proj.matrix();
    const double p = collapsed.trace().real();
    MeasurementOutcome outcome{value, p, std::nullopt};
    if (p > kMinOutcomeProbability) {
      outcome.post_state = DensityOperator::unchecked(Operator(rho.layout(), collapsed / p));
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

double joint_probability(const DensityOperator& rho0, const Operator& proj_a,
                         const Operator& proj_b, const PhysicalParams& params, double t_a,
                         double t_b) {
  if (!(t_a >= 0.0)) {
    throw std::invalid_argument("evolution defined for nonnegative time only");
  }
  if (t_b < t_a) {
    throw std::invalid_argument("sequential measurement needs t_b >= t_a (Alice measures first)");
  }
  require_layout(rho0.layout(), proj_a, "first projector vs state");
  require_layout(rho0.layout(), proj_b, "second projector vs state");

  const Matrix& pa = proj_a.matrix();
  const Matrix& pb = proj_b.matrix();
  const Matrix rho_ta = apply_kraus(rho0.matrix(), channel_kraus(params, rho0.layout(), t_a));
  const Matrix collapsed = pa * rho_ta * pa;
  const double p_a = collapsed.trace().real();
  const auto later = channel_kraus(params, rho0.layout(), t_b - t_a);

  if (p_a <= kMinOutcomeProbability) {
    // Unnormalized route; equals p_a * p_{b|a} without dividing by ~0.
    const Matrix rho_tb = apply_kraus(collapsed, later);
    return (pb * rho_tb * pb).trace().real();
  }
  const Matrix rho_tb = apply_kraus(collapsed / p_a, later);
  const double p_b_given_a = (pb * rho_tb * pb).trace().real();
  return p_a * p_b_given_a;
}

double joint_probability_heisenberg(const DensityOperator& rho0, const Operator& proj_a,
                                    const Operator& proj_b, const PhysicalParams& params,
                                    double t_a, double t_b, Mode mode) {
  return correlation(rho0, proj_a, proj_b, params, t_a, t_b, mode).value;
}

std::pair<double, double> detector_proper_times(const Layout& layout, double t_a, double t_b,
                                                Mode mode) {
  require_mode_layout(layout, mode);
  if (mode == Mode::distinguishable) {
    return {proper_time(t_a, layout.factor(0).momenta()[0]),
            proper_time(t_b, layout.factor(1).momenta()[0])};
  }
  return {proper_time(t_a, layout.factor(0).momenta()[0]),
          proper_time(t_b, layout.factor(0).momenta()[1])};
}

CorrelationResult correlation(const DensityOperator& rho0, const Operator& obs_a,
                              const Operator& obs_b, const PhysicalParams& params, double t_a,
                              double t_b, Mode mode) {
  const double ta[] = {t_a};
  const double tb[] = {t_b};
  return correlation_grid(rho0, obs_a, obs_b, params, ta, tb, mode).front();
}

std::vector<CorrelationResult> correlation_grid(const DensityOperator& rho0,
                                                const Operator& obs_a, const Operator& obs_b,
                                                const PhysicalParams& params,
                                                std::span<const double> t_a,
                                                std::span<const double> t_b, Mode mode) {
  const Layout& layout = rho0.layout();
  require_mode_layout(layout, mode);
  require_layout(layout, obs_a, "Alice's observable vs state");
  require_layout(layout, obs_b, "Bob's observable vs state");
  if (mode == Mode::identical) {
    require_symmetric_pair(obs_a, obs_b);
  }

  const auto evolved_a = evolved_observables(obs_a, 0, params, t_a, mode);
  const auto evolved_b = evolved_observables(obs_b, 1, params, t_b, mode);

  std::vector<CorrelationResult> rows;
  rows.reserve(t_a.size() * t_b.size());
  for (std::size_t i = 0; i < t_a.size(); ++i) {
    for (std::size_t j = 0; j < t_b.size(); ++j) {
      CorrelationResult r;
      r.t_a = t_a[i];
      r.t_b = t_b[j];
      std::tie(r.tau_a, r.tau_b) = detector_proper_times(layout, t_a[i], t_b[j], mode);
      r.value = trace_product(rho0.matrix(), evolved_a[i], evolved_b[j]);
      rows.push_back(r);
    }
  }
  return rows;
}

double correlation_from_probabilities(const DensityOperator& rho0, const Operator& obs_a,
                                      const Operator& obs_b, const PhysicalParams& params,
                                      double t_a, double t_b) {
  double total = 0.0;
  const auto spec_a = spectral_decomposition(obs_a);
  const auto spec_b = spectral_decomposition(obs_b);
  for (const auto& a : spec_a) {
    if (std::abs(a.eigenvalue) <= kEigenGroupTolerance) continue;
    for (const auto& b : spec_b) {
      if (std::abs(b.eigenvalue) <= kEigenGroupTolerance) continue;
      total += a.eigenvalue * b.eigenvalue *
               joint_probability(rho0, a.projector, b.projector, params, t_a, t_b);
    }
  }
  return total;
}

Operator local_factor(const Operator& op, std::size_t slot) {
  const Layout& layout = op.layout();
  if (!layout.is_composite() || slot > 1) {
    throw std::invalid_argument("local_factor needs a two-particle operator and slot 0 or 1");
  }
  const auto da = static_cast<Eigen::Index>(layout.factor(0).dimension());
  const auto db = static_cast<Eigen::Index>(layout.factor(1).dimension());
  const Layout single(layout.factor(slot));
  Matrix local;
  if (slot == 0) {
    local.resize(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index j = 0; j < da; ++j) {
        local(i, j) = op.matrix()(i * db, j * db);
      }
    }
  } else {
    local = op.matrix().topLeftCorner(db, db);
  }
  Operator factor(single, std::move(local));
  const Operator id = Operator::identity(Layout(layout.factor(1 - slot)));
  const Operator rebuilt = slot == 0 ? tensor(factor, id, layout) : tensor(id, factor, layout);
  if (max_abs_diff(rebuilt, op) > kLocalityTolerance) {
    throw std::invalid_argument(slot == 0 ? "observable is not of the form A (x) 1"
                                          : "observable is not of the form 1 (x) B");
  }
  return factor;
}

}  // namespace kaon
