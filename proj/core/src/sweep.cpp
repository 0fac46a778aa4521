#include "kaon/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "kaon/analytic.hpp"
#include "kaon/kraus.hpp"

namespace kaon::cli {

namespace {

struct PairSetup {
  ParamSource source;
  Layout layout;
  DensityOperator rho0;
};

double parse_number(std::string_view text, const char* what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

PairSetup make_setup(const SweepConfig& config) {
  ParamSource source = resolve_params(config);
  if (!(config.p_mom >= 0.0) || !(config.q_mom >= 0.0) || !std::isfinite(config.p_mom) ||
      !std::isfinite(config.q_mom)) {
    throw ConfigError("momentum magnitudes must be finite and nonnegative");
  }
  double mass = source.rest_mass;
  if (!(mass > 0.0)) {
    if (config.p_mom != 0.0 || config.q_mom != 0.0) {
      throw ConfigError("parameter set needs a positive rest_mass for nonzero momenta");
    }
    mass = 1.0;  // gamma = 1 regardless of mass
  }
  const Momentum p = Momentum::along_z("p", mass, config.p_mom);
  const Momentum q = Momentum::along_z("q", mass, -config.q_mom);
  Layout layout = config.mode == Mode::distinguishable ? distinguishable_layout(p, q)
                                                       : identical_layout(p, q);
  DensityOperator rho0 = singlet_state(layout, config.mode);
  return {std::move(source), std::move(layout), std::move(rho0)};
}

// Rejects parameter sets whose Kraus operators do not exist on the grid.
void enforce_bound(const PhysicalParams& params, const std::vector<double>& ta,
                   const std::vector<double>& tb) {
  double t_max = 0.0;
  for (double t : ta) t_max = std::max(t_max, t);
  for (double t : tb) t_max = std::max(t_max, t);
  if (t_max <= 0.0) {
    return;
  }
  const BoundReport report = check_decoherence_bound(params, t_max);
  if (!report.ok) {
    throw BoundViolation(report.tau_at_min, report.min_radicand);
  }
}

std::optional<double> closed_form(const ObservableSpec& a, const ObservableSpec& b,
                                  const PhysicalParams& params,
                                  const analytic::ProperTimePair& times) {
  using K = ObservableKind;
  if (a.kind == K::strangeness && b.kind == K::strangeness) {
    return analytic::c_strangeness(params, times);
  }
  if (a.kind == K::detect_kaon && b.kind == K::detect_kaon) {
    return analytic::c_dplus_dplus(params, times);
  }
  if (a.kind == K::detect_kaon && b.kind == K::detect_antikaon) {
    return analytic::c_dplus_dminus(params, times);
  }
  return std::nullopt;
}

CheckResult make_check(std::string name, double deviation, double tolerance,
                       std::string detail = {}) {
  return {std::move(name), deviation, tolerance, deviation <= tolerance, std::move(detail)};
}

std::vector<double> validation_times(double t_max, std::size_t count) {
  std::vector<double> times{0.0};
  for (std::size_t i = 1; i < count; ++i) {
    // quadratic spacing: dense near t = 0 where the decay operators switch form
    const double x = static_cast<double>(i) / static_cast<double>(count - 1);
    times.push_back(t_max * x * x);
  }
  return times;
}

}  // namespace

std::vector<double> GridRange::points() const {
  if (n == 1) {
    return {lo};
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

GridRange parse_range(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw ConfigError("range '" + std::string(text) + "' must look like lo:hi:n");
  }
  GridRange r;
  r.lo = parse_number(text.substr(0, first), "range start");
  r.hi = parse_number(text.substr(first + 1, second - first - 1), "range end");
  const std::string_view count = text.substr(second + 1);
  unsigned long long n = 0;
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (ec != std::errc{} || ptr != count.data() + count.size() || n < 1) {
    throw ConfigError("range step count must be an integer >= 1");
  }
  r.n = static_cast<std::size_t>(n);
  if (r.lo < 0.0 || r.hi < r.lo) {
    throw ConfigError("range must satisfy 0 <= lo <= hi");
  }
  return r;
}

ParamSource resolve_params(const SweepConfig& config) {
  try {
    if (config.params_file) {
      return load_params_file(*config.params_file);
    }
    return preset(config.preset);
  } catch (const BoundViolation&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::pair<ObservableSpec, ObservableSpec> parse_observable_pair(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string a;
  std::string b;
  std::string extra;
  if (!(in >> a >> b) || (in >> extra)) {
    throw ConfigError("observables must be two entries, e.g. \"S@p S@q\"");
  }
  std::pair<ObservableSpec, ObservableSpec> pair;
  try {
    pair = {parse_observable(a), parse_observable(b)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (pair.first.momentum != "p" || pair.second.momentum != "q") {
    throw ConfigError("Alice's observable must be at p and Bob's at q");
  }
  return pair;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("number formatting failed");
  }
  return {buf, ptr};
}

void write_correlations(const SweepConfig& config, std::ostream& out) {
  const auto [spec_a, spec_b] = parse_observable_pair(config.observables);
  const PairSetup setup = make_setup(config);
  const PhysicalParams& params = setup.source.params;
  const auto ta = config.ta.points();
  const auto tb = config.tb.points();
  enforce_bound(params, ta, tb);

  const Operator obs_a = pair_observable(setup.layout, spec_a, config.mode);
  const Operator obs_b = pair_observable(setup.layout, spec_b, config.mode);
  auto rows = correlation_grid(setup.rho0, obs_a, obs_b, params, ta, tb, config.mode);

  const std::string label = to_string(spec_a) + " " + to_string(spec_b);
  out << "t_a,t_b,tau_a,tau_b,mode,observable,value,analytic,abs_diff\n";
  for (auto& row : rows) {
    if (auto reference = closed_form(spec_a, spec_b, params, {row.tau_a, row.tau_b})) {
      row.set_analytic(*reference);
    }
    out << format_double(row.t_a) << ',' << format_double(row.t_b) << ','
        << format_double(row.tau_a) << ',' << format_double(row.tau_b) << ','
        << to_string(config.mode) << ',' << label << ',' << format_double(row.value) << ','
        << (row.analytic ? format_double(*row.analytic) : "") << ','
        << (row.deviation ? format_double(*row.deviation) : "") << '\n';
  }
}

void write_probabilities(const SweepConfig& config, std::ostream& out) {
  const PairSetup setup = make_setup(config);
  const PhysicalParams& params = setup.source.params;
  const auto ta = config.ta.points();
  const auto tb = config.tb.points();
  enforce_bound(params, ta, tb);

  struct FlavorPair {
    Flavor alice;
    Flavor bob;
    const char* name;
  };
  constexpr FlavorPair pairs[] = {{Flavor::K0, Flavor::K0, "K0:K0"},
                                  {Flavor::K0bar, Flavor::K0bar, "K0bar:K0bar"},
                                  {Flavor::K0, Flavor::K0bar, "K0:K0bar"},
                                  {Flavor::K0bar, Flavor::K0, "K0bar:K0"}};

  out << "t_a,t_b,pair,pipeline,analytic,abs_diff\n";
  for (double t_a : ta) {
    for (double t_b : tb) {
      const auto [tau_a, tau_b] = detector_proper_times(setup.layout, t_a, t_b, config.mode);
      for (const auto& pair : pairs) {
        const Operator proj_a = detection_projector(setup.layout, pair.alice, "p", config.mode);
        const Operator proj_b = detection_projector(setup.layout, pair.bob, "q", config.mode);
        // Whoever measures first collapses the state first.
        const double pipeline =
            t_a <= t_b ? joint_probability(setup.rho0, proj_a, proj_b, params, t_a, t_b)
                       : joint_probability(setup.rho0, proj_b, proj_a, params, t_b, t_a);
        const double reference =
            analytic::joint_prob_analytic(params, {tau_a, tau_b}, pair.alice, pair.bob);
        out << format_double(t_a) << ',' << format_double(t_b) << ',' << pair.name << ','
            << format_double(pipeline) << ',' << format_double(reference) << ','
            << format_double(std::abs(pipeline - reference)) << '\n';
      }
    }
  }
}

bool ValidationReport::ok() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << "  max_dev=" << format_double(c.deviation)
       << "  tol=" << format_double(c.tolerance);
    if (!c.detail.empty()) {
      os << "  (" << c.detail << ')';
    }
    os << '\n';
  }
  os << (ok() ? "all checks passed" : "validation FAILED") << '\n';
  return os.str();
}

ValidationReport run_validation(const PhysicalParams& params, std::optional<double> tau_max) {
  ValidationReport report;
  const double scan_max = tau_max.value_or(20.0 / params.gamma_l());

  const BoundReport bound = check_decoherence_bound(params, scan_max);
  report.checks.push_back({"complete-positivity bound", std::max(0.0, -bound.min_radicand),
                           kRadicandTolerance, bound.ok, bound.message()});
  if (!bound.ok) {
    report.checks.push_back({"operator suites", 0.0, 0.0, false,
                             "skipped: Kraus operators undefined for these parameters"});
    return report;
  }

  // Layout momenta in units of the mass: gamma_p = 1, gamma_q = 1.25.
  const Momentum p = Momentum::along_z("p", 1.0, 0.0);
  const Momentum q = Momentum::along_z("q", 1.0, -0.75);
  const Layout one_p(SpaceLayout({p}));
  const Layout one_pq(SpaceLayout({p, q}));
  const Layout dist = distinguishable_layout(p, q);
  const Layout ident = identical_layout(p, q);
  const double t_long = std::min(scan_max, 20.0 / params.gamma_l());
  const double t_short = 10.0 / params.gamma_s();

  {
    double dev = 0.0;
    for (double t : validation_times(t_long, 50)) {
      dev = std::max(dev, verify_normalization(build_kraus(params, one_p.factor(0), t)));
      dev = std::max(dev, verify_normalization(build_kraus(params, one_pq.factor(0), t)));
    }
    report.checks.push_back(make_check("one-particle Kraus normalization", dev, 1e-12,
                                       "50 times in [0, 20/gamma_l], t=0 included"));
  }
  {
    double dev = 0.0;
    for (double t : validation_times(t_long, 12)) {
      dev = std::max(dev, verify_normalization(channel_kraus(params, dist, t)));
      dev = std::max(dev, verify_normalization(channel_kraus(params, ident, t)));
    }
    report.checks.push_back(make_check("two-particle Kraus normalization", dev, 1e-12,
                                       "distinguishable and identical families"));
  }

  std::mt19937_64 rng(20061);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  {
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Layout& layout = trial % 2 == 0 ? one_pq : ident;
      const DensityOperator rho = random_density_operator(layout, rng);
      const double t1 = t_short * unit(rng);
      const double t2 = t_short * unit(rng);
      const DensityOperator direct = evolve(rho, params, t1 + t2);
      const DensityOperator stepped = evolve(evolve(rho, params, t1), params, t2);
      dev = std::max(dev, max_abs_diff(direct.op(), stepped.op()));
    }
    report.checks.push_back(make_check("semigroup composition", dev, 1e-10,
                                       "20 random states and time splits"));
  }
  {
    double herm = 0.0;
    double neg = 0.0;
    double trace = 0.0;
    double swap = 0.0;
    const Operator perm = permutation_operator(ident);
    const DensityOperator singlet_d = singlet_state(dist, Mode::distinguishable);
    const DensityOperator singlet_i = singlet_state(ident, Mode::identical);
    for (double t : validation_times(t_short, 10)) {
      for (const auto* rho0 : {&singlet_d, &singlet_i}) {
        const DensityOperator rho = evolve(*rho0, params, t);
        const StateHealth h = state_health(rho.op());
        herm = std::max(herm, h.hermiticity_error);
        neg = std::max(neg, -h.min_eigenvalue);
        trace = std::max(trace, h.trace_error);
        if (rho0 == &singlet_i) {
          swap = std::max(swap, max_abs_diff(perm * rho.op() * perm, rho.op()));
        }
      }
    }
    report.checks.push_back(make_check("evolved state Hermitian", herm, 1e-12));
    report.checks.push_back(make_check("evolved state PSD (-min eigenvalue)", neg, 1e-12));
    report.checks.push_back(make_check("evolved state unit trace", trace, 1e-12));
    report.checks.push_back(make_check("identical state swap symmetry", swap, 1e-12));
  }
  {
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Layout& layout = trial % 2 == 0 ? one_pq : dist;
      const DensityOperator rho = random_density_operator(layout, rng);
      const Operator a = random_operator(layout, rng);
      const double t = t_short * unit(rng);
      const auto kraus = channel_kraus(params, layout, t);
      const Complex schroedinger = expectation(apply_channel(rho, kraus), a);
      const Complex heisenberg = expectation(rho, heisenberg_observable(a, kraus));
      dev = std::max(dev, std::abs(schroedinger - heisenberg));
    }
    report.checks.push_back(make_check("Schroedinger/Heisenberg duality", dev, 1e-12));
  }

  const std::vector<double> grid = validation_times(t_short, 6);
  const DensityOperator singlet_d = singlet_state(dist, Mode::distinguishable);
  const DensityOperator singlet_i = singlet_state(ident, Mode::identical);
  {
    double closed = 0.0;
    double stats = 0.0;
    const char* pairs[] = {"S@p S@q", "D+@p D+@q", "D+@p D-@q"};
    for (const char* text : pairs) {
      const auto [sa, sb] = parse_observable_pair(text);
      const auto rows_d =
          correlation_grid(singlet_d, pair_observable(dist, sa, Mode::distinguishable),
                           pair_observable(dist, sb, Mode::distinguishable), params, grid, grid,
                           Mode::distinguishable);
      const auto rows_i = correlation_grid(
          singlet_i, pair_observable(ident, sa, Mode::identical),
          pair_observable(ident, sb, Mode::identical), params, grid, grid, Mode::identical);
      for (std::size_t i = 0; i < rows_d.size(); ++i) {
        const double ref = *closed_form(sa, sb, params, {rows_d[i].tau_a, rows_d[i].tau_b});
        closed = std::max(closed, std::abs(rows_d[i].value - ref));
        stats = std::max(stats, std::abs(rows_d[i].value - rows_i[i].value));
      }
    }
    report.checks.push_back(make_check("matrix vs closed-form correlations", closed, 1e-9,
                                       "S S, D+ D+, D+ D- on a 6x6 grid"));
    report.checks.push_back(make_check("identical vs distinguishable correlations", stats,
                                       1e-10, "gamma_p != gamma_q"));
  }
  {
    double routes = 0.0;
    double closed = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i; j < grid.size(); ++j) {
        for (Flavor fa : {Flavor::K0, Flavor::K0bar}) {
          for (Flavor fb : {Flavor::K0, Flavor::K0bar}) {
            const Operator pa = detection_projector(dist, fa, "p", Mode::distinguishable);
            const Operator pb = detection_projector(dist, fb, "q", Mode::distinguishable);
            const double seq = joint_probability(singlet_d, pa, pb, params, grid[i], grid[j]);
            const double heis = joint_probability_heisenberg(singlet_d, pa, pb, params, grid[i],
                                                             grid[j], Mode::distinguishable);
            const auto [tau_a, tau_b] =
                detector_proper_times(dist, grid[i], grid[j], Mode::distinguishable);
            routes = std::max(routes, std::abs(seq - heis));
            closed = std::max(
                closed, std::abs(seq - analytic::joint_prob_analytic(params, {tau_a, tau_b}, fa, fb)));
          }
        }
      }
    }
    report.checks.push_back(make_check("sequential vs Heisenberg joint probabilities", routes,
                                       1e-12));
    report.checks.push_back(make_check("joint probabilities vs closed form", closed, 1e-9));
  }
  return report;
}

}  // namespace kaon::cli
