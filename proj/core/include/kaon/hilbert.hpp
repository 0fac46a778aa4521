#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace kaon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance used for the Hermitian / PSD / unit-trace state invariants.
inline constexpr double kStateTolerance = 1e-12;

enum class Flavor { K0, K0bar };

std::string_view to_string(Flavor flavor);

/// Lab-frame four-momentum of a scalar particle, identified by its label.
class Momentum {
 public:
  Momentum(std::string label, double mass, std::array<double, 3> three_momentum);

  static Momentum along_z(std::string label, double mass, double pz) {
    return {std::move(label), mass, {0.0, 0.0, pz}};
  }

  const std::string& label() const noexcept { return label_; }
  double mass() const noexcept { return mass_; }
  const std::array<double, 3>& three_momentum() const noexcept { return p_; }
  /// sqrt(1 + |p|^2 / m^2)
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const Momentum&, const Momentum&) = default;

 private:
  std::string label_;
  double mass_;
  std::array<double, 3> p_;
  double gamma_;
};

/// One-particle space: basis [vacuum, (K0,q1), (K0bar,q1), (K0,q2), ...] with
/// momenta in insertion order. Momentum labels must be unique.
class SpaceLayout {
 public:
  static constexpr std::size_t kVacuum = 0;

  explicit SpaceLayout(std::vector<Momentum> momenta);

  std::size_t dimension() const noexcept { return 1 + 2 * momenta_.size(); }
  const std::vector<Momentum>& momenta() const noexcept { return momenta_; }

  bool contains(std::string_view label) const noexcept;
  /// Position of the momentum in Q; throws std::invalid_argument if unknown.
  std::size_t position(std::string_view label) const;
  const Momentum& momentum(std::string_view label) const { return momenta_[position(label)]; }

  /// Index of (flavor, momentum) in the basis.
  std::size_t index(Flavor flavor, std::string_view label) const;
  static constexpr std::size_t block_offset(std::size_t position) noexcept {
    return 1 + 2 * position;
  }

  /// "vac", "K0@p", "K0bar@p", ...
  std::string basis_label(std::size_t index) const;

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

 private:
  std::vector<Momentum> momenta_;
};

/// Ordered tensor factors (one for a single particle, two for a pair).
/// Cheap to copy; the factor list is shared.
class Layout {
 public:
  explicit Layout(SpaceLayout single);
  Layout(SpaceLayout first, SpaceLayout second);

  std::size_t factor_count() const noexcept { return factors_->size(); }
  bool is_composite() const noexcept { return factor_count() == 2; }
  const SpaceLayout& factor(std::size_t i) const { return factors_->at(i); }
  bool identical_factors() const noexcept;
  std::size_t dimension() const noexcept { return dimension_; }

  /// Composite index of |first> (x) |second>; left factor is the slow index.
  std::size_t index(std::size_t first, std::size_t second) const;

  friend bool operator==(const Layout& a, const Layout& b) {
    return a.factors_ == b.factors_ || *a.factors_ == *b.factors_;
  }

 private:
  std::shared_ptr<const std::vector<SpaceLayout>> factors_;
  std::size_t dimension_;
};

/// Dense square matrix over a layout.
class Operator {
 public:
  Operator(Layout layout, Matrix entries);

  static Operator identity(const Layout& layout);
  static Operator zero(const Layout& layout);
  /// |index><index|
  static Operator projector(const Layout& layout, std::size_t index);
  /// |ket><bra|
  static Operator outer(const Layout& layout, const Vector& ket, const Vector& bra);

  const Layout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  Operator adjoint() const { return {layout_, m_.adjoint()}; }
  Complex trace() const { return m_.trace(); }
  bool is_hermitian(double tol) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex scale) {
    m_ *= scale;
    return *this;
  }

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Complex scale, Operator op) { return op *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  Layout layout_;
  Matrix m_;
};

/// Max-norm distance; throws on layout mismatch.
double max_abs_diff(const Operator& a, const Operator& b);

/// Kronecker product of two one-particle operators onto the composite layout.
Operator tensor(const Operator& a, const Operator& b);
/// As above, but the result must live on `composite`.
Operator tensor(const Operator& a, const Operator& b, const Layout& composite);

/// Swap operator on a composite layout with identical factors.
Operator permutation_operator(const Layout& composite);
/// ||P op P - op||_max <= tol
bool is_symmetric(const Operator& op, double tol);
/// ||[a, b]||_max <= tol
bool commute(const Operator& a, const Operator& b, double tol);

struct StateHealth {
  double hermiticity_error = 0.0;  ///< ||rho - rho^dagger||_max
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;  ///< |tr rho - 1|

  bool ok(double tol = kStateTolerance) const {
    return hermiticity_error <= tol && min_eigenvalue >= -tol && trace_error <= tol;
  }
};

StateHealth state_health(const Operator& rho);

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
 public:
  /// Throws std::invalid_argument if `op` is not a valid state within tol.
  explicit DensityOperator(Operator op, double tol = kStateTolerance);

  /// |psi><psi| for a normalized vector.
  static DensityOperator pure(const Layout& layout, const Vector& psi);
  /// Wraps without checking; for outputs of trace-preserving CP maps.
  static DensityOperator unchecked(Operator op) { return DensityOperator(std::move(op), Unchecked{}); }

  const Operator& op() const noexcept { return op_; }
  const Layout& layout() const noexcept { return op_.layout(); }
  const Matrix& matrix() const noexcept { return op_.matrix(); }

 private:
  struct Unchecked {};
  DensityOperator(Operator op, Unchecked) : op_(std::move(op)) {}

  Operator op_;
};

/// tr(rho op); throws on layout mismatch.
Complex expectation(const DensityOperator& rho, const Operator& op);

Vector basis_vector(const Layout& layout, std::size_t index);

/// Random mixed state (Ginibre construction) with full rank unless `rank` > 0.
DensityOperator random_density_operator(const Layout& layout, std::mt19937_64& rng,
                                        std::size_t rank = 0);
/// Random operator with standard complex normal entries.
Operator random_operator(const Layout& layout, std::mt19937_64& rng);

}  // namespace kaon
