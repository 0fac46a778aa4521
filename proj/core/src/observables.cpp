#include "kaon/observables.hpp"

#include <stdexcept>

namespace kaon {

namespace {

void require_identical(const Layout& composite) {
  if (!composite.identical_factors()) {
    throw std::invalid_argument("symmetrized observables need an identical-particle layout");
  }
}

void require_momentum(const SpaceLayout& layout, std::string_view k) {
  if (!layout.contains(k)) {
    throw std::invalid_argument("unknown momentum '" + std::string(k) + "'");
  }
}

Flavor detected_flavor(Sign sign) { return sign == Sign::plus ? Flavor::K0 : Flavor::K0bar; }

Operator one_particle(const ObservableSpec& spec, const SpaceLayout& layout) {
  switch (spec.kind) {
    case ObservableKind::strangeness:
      return strangeness(layout, spec.momentum);
    case ObservableKind::detect_kaon:
      return dichotomic(layout, spec.momentum, Sign::plus);
    case ObservableKind::detect_antikaon:
      return dichotomic(layout, spec.momentum, Sign::minus);
  }
  throw std::logic_error("unhandled observable kind");
}

std::size_t slot_holding(const Layout& layout, std::string_view k) {
  for (std::size_t slot = 0; slot < layout.factor_count(); ++slot) {
    if (layout.factor(slot).contains(k)) {
      return slot;
    }
  }
  throw std::invalid_argument("unknown momentum '" + std::string(k) + "'");
}

Operator in_slot(const Operator& local, const Layout& layout, std::size_t slot) {
  const Operator id = Operator::identity(Layout(layout.factor(1 - slot)));
  return slot == 0 ? tensor(local, id, layout) : tensor(id, local, layout);
}

}  // namespace

ObservableSpec parse_observable(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos || at + 1 >= text.size()) {
    throw std::invalid_argument("observable '" + std::string(text) +
                                "' must look like S@p, D+@p or D-@q");
  }
  const std::string_view kind = text.substr(0, at);
  ObservableSpec spec{ObservableKind::strangeness, std::string(text.substr(at + 1))};
  if (kind == "S") {
    spec.kind = ObservableKind::strangeness;
  } else if (kind == "D+") {
    spec.kind = ObservableKind::detect_kaon;
  } else if (kind == "D-") {
    spec.kind = ObservableKind::detect_antikaon;
  } else {
    throw std::invalid_argument("unknown observable kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::string to_string(const ObservableSpec& spec) {
  switch (spec.kind) {
    case ObservableKind::strangeness: return "S@" + spec.momentum;
    case ObservableKind::detect_kaon: return "D+@" + spec.momentum;
    case ObservableKind::detect_antikaon: return "D-@" + spec.momentum;
  }
  throw std::logic_error("unhandled observable kind");
}

Layout distinguishable_layout(const Momentum& p, const Momentum& q) {
  return Layout(SpaceLayout({p}), SpaceLayout({q}));
}

Layout identical_layout(const Momentum& p, const Momentum& q) {
  SpaceLayout both({p, q});
  return Layout(both, both);
}

Operator flavor_projector(const SpaceLayout& layout, Flavor flavor, std::string_view k) {
  return Operator::projector(Layout(layout), layout.index(flavor, k));
}

Operator strangeness(const SpaceLayout& layout, std::string_view k) {
  require_momentum(layout, k);
  return flavor_projector(layout, Flavor::K0, k) - flavor_projector(layout, Flavor::K0bar, k);
}

Operator dichotomic(const SpaceLayout& layout, std::string_view k, Sign sign) {
  require_momentum(layout, k);
  const Layout single(layout);
  return Complex(2.0) * flavor_projector(layout, detected_flavor(sign), k) -
         Operator::identity(single);
}

Operator symmetrized_strangeness(const Layout& composite, std::string_view k) {
  require_identical(composite);
  const Operator s = strangeness(composite.factor(0), k);
  const Operator id = Operator::identity(Layout(composite.factor(0)));
  return tensor(s, id, composite) + tensor(id, s, composite);
}

Operator symmetrized_dichotomic(const Layout& composite, std::string_view k, Sign sign) {
  require_identical(composite);
  const Operator p = flavor_projector(composite.factor(0), detected_flavor(sign), k);
  const Operator id = Operator::identity(Layout(composite.factor(0)));
  return Complex(2.0) * (tensor(p, id, composite) + tensor(id, p, composite)) -
         Operator::identity(composite) - tensor(p, p, composite);
}

Operator pair_observable(const Layout& layout, const ObservableSpec& spec, Mode mode) {
  if (!layout.is_composite()) {
    throw std::invalid_argument("pair observables need a two-particle layout");
  }
  if (mode == Mode::identical) {
    switch (spec.kind) {
      case ObservableKind::strangeness:
        return symmetrized_strangeness(layout, spec.momentum);
      case ObservableKind::detect_kaon:
        return symmetrized_dichotomic(layout, spec.momentum, Sign::plus);
      case ObservableKind::detect_antikaon:
        return symmetrized_dichotomic(layout, spec.momentum, Sign::minus);
    }
  }
  const std::size_t slot = slot_holding(layout, spec.momentum);
  return in_slot(one_particle(spec, layout.factor(slot)), layout, slot);
}

Operator detection_projector(const Layout& layout, Flavor flavor, std::string_view k, Mode mode) {
  if (!layout.is_composite()) {
    throw std::invalid_argument("detection projectors need a two-particle layout");
  }
  if (mode == Mode::identical) {
    require_identical(layout);
    const Operator p = flavor_projector(layout.factor(0), flavor, k);
    const Operator miss = Operator::identity(Layout(layout.factor(0))) - p;
    return Operator::identity(layout) - tensor(miss, miss, layout);
  }
  const std::size_t slot = slot_holding(layout, k);
  return in_slot(flavor_projector(layout.factor(slot), flavor, k), layout, slot);
}

namespace {

// Unnormalized singlet with coefficients +-1, so that the density matrix
// entries (+-1/2 or +-1/4) come out exact.
Vector singlet_amplitudes(const Layout& layout, Mode mode) {
  if (!layout.is_composite()) {
    throw std::invalid_argument("singlet needs a two-particle layout");
  }
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  auto add = [&](const SpaceLayout& a, Flavor fa, const std::string& ka, const SpaceLayout& b,
                 Flavor fb, const std::string& kb, double coeff) {
    psi(static_cast<Eigen::Index>(layout.index(a.index(fa, ka), b.index(fb, kb)))) += coeff;
  };

  if (mode == Mode::distinguishable) {
    const SpaceLayout& a = layout.factor(0);
    const SpaceLayout& b = layout.factor(1);
    if (a.momenta().size() != 1 || b.momenta().size() != 1) {
      throw std::invalid_argument("distinguishable singlet expects Q = {p}, Q' = {q}");
    }
    const std::string& p = a.momenta()[0].label();
    const std::string& q = b.momenta()[0].label();
    add(a, Flavor::K0, p, b, Flavor::K0bar, q, 1.0);
    add(a, Flavor::K0bar, p, b, Flavor::K0, q, -1.0);
    return psi;
  }

  if (!layout.identical_factors() || layout.factor(0).momenta().size() != 2) {
    throw std::invalid_argument("identical singlet expects Q = Q' = {p, q}");
  }
  const SpaceLayout& s = layout.factor(0);
  const std::string& p = s.momenta()[0].label();
  const std::string& q = s.momenta()[1].label();
  add(s, Flavor::K0, p, s, Flavor::K0bar, q, 1.0);
  add(s, Flavor::K0bar, q, s, Flavor::K0, p, 1.0);
  add(s, Flavor::K0bar, p, s, Flavor::K0, q, -1.0);
  add(s, Flavor::K0, q, s, Flavor::K0bar, p, -1.0);
  return psi;
}

}  // namespace

Vector singlet_vector(const Layout& layout, Mode mode) {
  return singlet_amplitudes(layout, mode).normalized();
}

DensityOperator singlet_state(const Layout& layout, Mode mode) {
  const Vector psi = singlet_amplitudes(layout, mode);
  return DensityOperator(Operator(layout, psi * psi.adjoint() / psi.squaredNorm()));
}

}  // namespace kaon
