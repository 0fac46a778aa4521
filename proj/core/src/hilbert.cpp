#include "kaon/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kaon {

namespace {

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_same_layout(const Layout& a, const Layout& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string("layout mismatch in ") + what);
  }
}

}  // namespace

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::K0 ? "K0" : "K0bar";
}

Momentum::Momentum(std::string label, double mass, std::array<double, 3> three_momentum)
    : label_(std::move(label)), mass_(mass), p_(three_momentum) {
  if (label_.empty()) {
    throw std::invalid_argument("momentum label must not be empty");
  }
  if (!std::isfinite(mass_) || mass_ <= 0.0) {
    throw std::invalid_argument("momentum '" + label_ + "' needs a positive rest mass");
  }
  double p2 = 0.0;
  for (double c : p_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("momentum components must be finite");
    }
    p2 += c * c;
  }
  gamma_ = std::sqrt(1.0 + p2 / (mass_ * mass_));
}

SpaceLayout::SpaceLayout(std::vector<Momentum> momenta) : momenta_(std::move(momenta)) {
  std::set<std::string_view> seen;
  for (const auto& k : momenta_) {
    if (!seen.insert(k.label()).second) {
      throw std::invalid_argument("duplicate momentum label '" + k.label() + "'");
    }
  }
}

bool SpaceLayout::contains(std::string_view label) const noexcept {
  return std::any_of(momenta_.begin(), momenta_.end(),
                     [&](const Momentum& k) { return k.label() == label; });
}

std::size_t SpaceLayout::position(std::string_view label) const {
  for (std::size_t i = 0; i < momenta_.size(); ++i) {
    if (momenta_[i].label() == label) {
      return i;
    }
  }
  throw std::invalid_argument("unknown momentum '" + std::string(label) + "'");
}

std::size_t SpaceLayout::index(Flavor flavor, std::string_view label) const {
  return block_offset(position(label)) + (flavor == Flavor::K0 ? 0 : 1);
}

std::string SpaceLayout::basis_label(std::size_t index) const {
  if (index == kVacuum) {
    return "vac";
  }
  if (index >= dimension()) {
    throw std::out_of_range("basis index out of range");
  }
  const std::size_t pos = (index - 1) / 2;
  const Flavor flavor = (index - 1) % 2 == 0 ? Flavor::K0 : Flavor::K0bar;
  return std::string(to_string(flavor)) + "@" + momenta_[pos].label();
}

Layout::Layout(SpaceLayout single)
    : factors_(std::make_shared<const std::vector<SpaceLayout>>(
          std::vector<SpaceLayout>{std::move(single)})),
      dimension_(factors_->front().dimension()) {}

Layout::Layout(SpaceLayout first, SpaceLayout second)
    : factors_(std::make_shared<const std::vector<SpaceLayout>>(
          std::vector<SpaceLayout>{std::move(first), std::move(second)})),
      dimension_((*factors_)[0].dimension() * (*factors_)[1].dimension()) {}

bool Layout::identical_factors() const noexcept {
  return is_composite() && (*factors_)[0] == (*factors_)[1];
}

std::size_t Layout::index(std::size_t first, std::size_t second) const {
  if (!is_composite()) {
    throw std::invalid_argument("composite index requested on a one-particle layout");
  }
  const std::size_t db = (*factors_)[1].dimension();
  if (first >= (*factors_)[0].dimension() || second >= db) {
    throw std::out_of_range("basis index out of range");
  }
  return first * db + second;
}

Operator::Operator(Layout layout, Matrix entries) : layout_(std::move(layout)), m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  if (static_cast<std::size_t>(m_.rows()) != layout_.dimension()) {
    throw std::invalid_argument("operator dimension does not match its layout");
  }
}

Operator Operator::identity(const Layout& layout) {
  const auto d = as_index(layout.dimension());
  return {layout, Matrix::Identity(d, d)};
}

Operator Operator::zero(const Layout& layout) {
  const auto d = as_index(layout.dimension());
  return {layout, Matrix::Zero(d, d)};
}

Operator Operator::projector(const Layout& layout, std::size_t index) {
  if (index >= layout.dimension()) {
    throw std::out_of_range("basis index out of range");
  }
  Operator p = zero(layout);
  p.m_(as_index(index), as_index(index)) = 1.0;
  return p;
}

Operator Operator::outer(const Layout& layout, const Vector& ket, const Vector& bra) {
  return {layout, ket * bra.adjoint()};
}

bool Operator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_layout(layout_, rhs.layout_, "operator sum");
  m_ += rhs.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_layout(layout_, rhs.layout_, "operator difference");
  m_ -= rhs.m_;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_layout(lhs.layout_, rhs.layout_, "operator product");
  return {lhs.layout_, lhs.m_ * rhs.m_};
}

double max_abs_diff(const Operator& a, const Operator& b) {
  require_same_layout(a.layout(), b.layout(), "max_abs_diff");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

Operator tensor(const Operator& a, const Operator& b) {
  if (a.layout().is_composite() || b.layout().is_composite()) {
    throw std::invalid_argument("tensor expects one-particle operands");
  }
  return tensor(a, b, Layout(a.layout().factor(0), b.layout().factor(0)));
}

Operator tensor(const Operator& a, const Operator& b, const Layout& composite) {
  if (a.layout().is_composite() || b.layout().is_composite()) {
    throw std::invalid_argument("tensor expects one-particle operands");
  }
  if (!composite.is_composite() || !(composite.factor(0) == a.layout().factor(0)) ||
      !(composite.factor(1) == b.layout().factor(0))) {
    throw std::invalid_argument("layout mismatch with declared composite layout");
  }
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return {composite, std::move(out)};
}

Operator permutation_operator(const Layout& composite) {
  if (!composite.identical_factors()) {
    throw std::invalid_argument("permutation defined only on identical factor spaces");
  }
  const std::size_t d = composite.factor(0).dimension();
  Matrix m = Matrix::Zero(as_index(d * d), as_index(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(as_index(composite.index(j, i)), as_index(composite.index(i, j))) = 1.0;
    }
  }
  return {composite, std::move(m)};
}

bool is_symmetric(const Operator& op, double tol) {
  if (!op.layout().identical_factors()) {
    return false;
  }
  const Operator p = permutation_operator(op.layout());
  return max_abs_diff(p * op * p, op) <= tol;
}

bool commute(const Operator& a, const Operator& b, double tol) {
  return max_abs_diff(a * b, b * a) <= tol;
}

StateHealth state_health(const Operator& rho) {
  StateHealth h;
  const Matrix& m = rho.matrix();
  h.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  h.min_eigenvalue = solver.eigenvalues().minCoeff();
  h.trace_error = std::abs(m.trace() - Complex(1.0));
  return h;
}

DensityOperator::DensityOperator(Operator op, double tol) : op_(std::move(op)) {
  const StateHealth h = state_health(op_);
  if (!h.ok(tol)) {
    throw std::invalid_argument("not a density operator: hermiticity error " +
                                std::to_string(h.hermiticity_error) + ", min eigenvalue " +
                                std::to_string(h.min_eigenvalue) + ", trace error " +
                                std::to_string(h.trace_error));
  }
}

DensityOperator DensityOperator::pure(const Layout& layout, const Vector& psi) {
  if (static_cast<std::size_t>(psi.size()) != layout.dimension()) {
    throw std::invalid_argument("state vector dimension does not match layout");
  }
  if (std::abs(psi.norm() - 1.0) > kStateTolerance) {
    throw std::invalid_argument("state vector must be normalized");
  }
  return DensityOperator(Operator::outer(layout, psi, psi));
}

Complex expectation(const DensityOperator& rho, const Operator& op) {
  require_same_layout(rho.layout(), op.layout(), "expectation");
  // tr(AB) = sum_ij A_ij B_ji
  return (rho.matrix().transpose().cwiseProduct(op.matrix())).sum();
}

Vector basis_vector(const Layout& layout, std::size_t index) {
  if (index >= layout.dimension()) {
    throw std::out_of_range("basis index out of range");
  }
  Vector v = Vector::Zero(as_index(layout.dimension()));
  v(as_index(index)) = 1.0;
  return v;
}

Operator random_operator(const Layout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = as_index(layout.dimension());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return {layout, std::move(m)};
}

DensityOperator random_density_operator(const Layout& layout, std::mt19937_64& rng,
                                        std::size_t rank) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = as_index(layout.dimension());
  const auto r = rank == 0 ? d : as_index(std::min(rank, layout.dimension()));
  Matrix g(d, r);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityOperator(Operator(layout, std::move(rho)));
}

}  // namespace kaon
