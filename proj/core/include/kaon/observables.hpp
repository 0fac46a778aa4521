#pragma once

#include <string>
#include <string_view>

#include "kaon/evolution.hpp"
#include "kaon/hilbert.hpp"

namespace kaon {

enum class ObservableKind { strangeness, detect_kaon, detect_antikaon };
enum class Sign { plus, minus };

/// An observable kind bound to a momentum label, e.g. "S@p", "D+@q", "D-@p".
struct ObservableSpec {
  ObservableKind kind;
  std::string momentum;

  friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;
};

ObservableSpec parse_observable(std::string_view text);
std::string to_string(const ObservableSpec& spec);

/// Two-particle layouts for a pair with detector momenta p (Alice) and q (Bob).
Layout distinguishable_layout(const Momentum& p, const Momentum& q);
Layout identical_layout(const Momentum& p, const Momentum& q);

/// |f,k><f,k| on a one-particle layout.
Operator flavor_projector(const SpaceLayout& layout, Flavor flavor, std::string_view k);

/// |K0,k><K0,k| - |K0bar,k><K0bar,k|
Operator strangeness(const SpaceLayout& layout, std::string_view k);

/// D+ answers "is a kaon registered at k" (+1) or not (-1); D- the same for
/// an antikaon. Vacuum and any other momentum block get -1, so on a
/// single-momentum layout D+ = |K0><K0| - |K0bar><K0bar| - |0><0|.
Operator dichotomic(const SpaceLayout& layout, std::string_view k, Sign sign);

/// S^k (x) 1 + 1 (x) S^k on an identical-factor layout.
Operator symmetrized_strangeness(const Layout& composite, std::string_view k);

/// 2(P (x) 1 + 1 (x) P) - 1 (x) 1 - P (x) P with P the flavor projector at k
/// (K0 for plus, K0bar for minus). Eigenvalues: +2 (two such particles),
/// +1 (exactly one), -1 (none).
Operator symmetrized_dichotomic(const Layout& composite, std::string_view k, Sign sign);

/// Observable for the detector at the spec's momentum: in distinguishable mode
/// the one-particle observable tensored into the slot holding that momentum,
/// in identical mode the symmetrized form.
Operator pair_observable(const Layout& layout, const ObservableSpec& spec, Mode mode);

/// Projector onto "the detector at k registers flavor f". Identical mode uses
/// 1 - (1 - P) (x) (1 - P), i.e. at least one such particle.
Operator detection_projector(const Layout& layout, Flavor flavor, std::string_view k, Mode mode);

/// Flavor singlet of a pair. Distinguishable:
///   (|K0,p>|K0bar,q> - |K0bar,p>|K0,q>) / sqrt(2)
/// Identical (Q = {p, q}):
///   (|K0,p>|K0bar,q> + |K0bar,q>|K0,p> - |K0bar,p>|K0,q> - |K0,q>|K0bar,p>) / 2
Vector singlet_vector(const Layout& layout, Mode mode);
DensityOperator singlet_state(const Layout& layout, Mode mode);

}  // namespace kaon
