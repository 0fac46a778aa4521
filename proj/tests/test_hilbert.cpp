#include <doctest.h>

#include <random>

#include "kaon/hilbert.hpp"
#include "kaon/observables.hpp"

using namespace kaon;

namespace {

const Momentum kP = Momentum::along_z("p", 1.0, 0.0);
const Momentum kQ = Momentum::along_z("q", 1.0, -0.75);

Operator random_one(const SpaceLayout& s, std::mt19937_64& rng) {
  return random_operator(Layout(s), rng);
}

}  // namespace

TEST_CASE("momentum and gamma factor") {
  CHECK(Momentum("k", 1.0, {0.0, 0.0, 0.0}).gamma() == 1.0);
  CHECK(Momentum("k", 1.0, {1.0, 1.0, 1.0}).gamma() == doctest::Approx(2.0));
  CHECK(kQ.gamma() == doctest::Approx(1.25));
  CHECK_THROWS_AS(Momentum("k", 0.0, {0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Momentum("k", -1.0, {0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("space layout basis ordering") {
  const SpaceLayout s({kP, kQ});
  CHECK(s.dimension() == 5);
  CHECK(s.index(Flavor::K0, "p") == 1);
  CHECK(s.index(Flavor::K0bar, "p") == 2);
  CHECK(s.index(Flavor::K0, "q") == 3);
  CHECK(s.index(Flavor::K0bar, "q") == 4);
  CHECK(s.contains("q"));
  CHECK_FALSE(s.contains("r"));
  CHECK_THROWS(s.position("r"));
  CHECK_THROWS_AS(SpaceLayout({kP, kP}), std::invalid_argument);

  // same components, different label: distinct slot
  const Momentum p2 = Momentum::along_z("p2", 1.0, 0.0);
  CHECK(SpaceLayout({kP, p2}).dimension() == 5);
}

TEST_CASE("operator dimension is checked against the layout") {
  const Layout one(SpaceLayout({kP}));
  CHECK_THROWS_AS(Operator(one, Matrix::Zero(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(Operator(one, Matrix::Zero(3, 2)), std::invalid_argument);
  const Layout two(SpaceLayout({kP, kQ}));
  CHECK_THROWS(Operator::identity(one) * Operator::identity(two));
}

TEST_CASE("tensor product") {
  const SpaceLayout a({kP});
  const SpaceLayout b({kQ});
  const Layout composite(a, b);

  const Operator id = tensor(Operator::identity(Layout(a)), Operator::identity(Layout(b)));
  CHECK(id.dimension() == 9);
  CHECK(max_abs_diff(id, Operator::identity(composite)) == 0.0);

  const Operator pk = Operator::projector(Layout(a), a.index(Flavor::K0, "p"));
  const Operator pkb = Operator::projector(Layout(b), b.index(Flavor::K0bar, "q"));
  const Operator rank1 = tensor(pk, pkb);
  const std::size_t target = composite.index(1, 2);
  CHECK(rank1(target, target) == Complex(1.0));
  CHECK(rank1.matrix().cwiseAbs().sum() == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  const Operator x = random_one(a, rng);
  const Operator y = random_one(b, rng);
  const Operator xy = tensor(x, y);
  CHECK(std::abs(xy.trace() - x.trace() * y.trace()) < 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          CHECK(std::abs(xy(3 * i + k, 3 * j + l) - x(i, j) * y(k, l)) < 1e-15);

  const Layout wrong(b, a);
  CHECK_THROWS_WITH(tensor(x, y, wrong), "layout mismatch with declared composite layout");
}

TEST_CASE("algebra identities on random operators") {
  std::mt19937_64 rng(11);
  const Layout l(SpaceLayout({kP, kQ}));
  const Operator x = random_operator(l, rng);
  const Operator y = random_operator(l, rng);
  CHECK(max_abs_diff(x.adjoint().adjoint(), x) == 0.0);
  CHECK(std::abs((x * y).trace() - (y * x).trace()) < 1e-12);
}

TEST_CASE("permutation operator") {
  const SpaceLayout s({kP, kQ});
  const Layout l(s, s);
  const Operator perm = permutation_operator(l);

  const std::size_t kp = s.index(Flavor::K0, "p");
  const std::size_t kbq = s.index(Flavor::K0bar, "q");
  const Vector v = perm.matrix() * basis_vector(l, l.index(kp, kbq));
  CHECK((v - basis_vector(l, l.index(kbq, kp))).cwiseAbs().maxCoeff() == 0.0);
  const Vector w = perm.matrix() * basis_vector(l, l.index(kp, kp));
  CHECK((w - basis_vector(l, l.index(kp, kp))).cwiseAbs().maxCoeff() == 0.0);
  // vacuum slot swaps like any other basis vector
  const Vector u = perm.matrix() * basis_vector(l, l.index(SpaceLayout::kVacuum, kp));
  CHECK((u - basis_vector(l, l.index(kp, SpaceLayout::kVacuum))).cwiseAbs().maxCoeff() == 0.0);

  CHECK(max_abs_diff(perm * perm, Operator::identity(l)) == 0.0);
  CHECK(perm.is_hermitian(0.0));

  std::mt19937_64 rng(5);
  const Operator x = random_operator(l, rng);
  const Operator y = random_operator(l, rng);
  CHECK(max_abs_diff(perm * (x * y) * perm, (perm * x * perm) * (perm * y * perm)) < 1e-12);

  const Layout mixed(SpaceLayout({kP}), SpaceLayout({kQ}));
  CHECK_THROWS_WITH(permutation_operator(mixed),
                    "permutation defined only on identical factor spaces");
}

TEST_CASE("symmetry predicate") {
  const Layout l = identical_layout(kP, kQ);
  CHECK(is_symmetric(symmetrized_strangeness(l, "p"), 1e-12));
  CHECK(is_symmetric(Operator::identity(l), 0.0));
  const Operator s = strangeness(l.factor(0), "p");
  const Operator lopsided = tensor(s, Operator::identity(Layout(l.factor(1))), l);
  CHECK_FALSE(is_symmetric(lopsided, 1e-12));
}

TEST_CASE("expectation values") {
  std::mt19937_64 rng(9);
  const Layout l(SpaceLayout({kP, kQ}));
  const DensityOperator rho = random_density_operator(l, rng);
  CHECK(std::abs(expectation(rho, Operator::identity(l)) - 1.0) < 1e-12);

  Vector psi = Vector::Random(5);
  psi.normalize();
  const DensityOperator pure = DensityOperator::pure(l, psi);
  CHECK(std::abs(expectation(pure, Operator::outer(l, psi, psi)) - 1.0) < 1e-12);

  const Operator h = random_operator(l, rng);
  const Operator herm = Complex(0.5) * (h + h.adjoint());
  CHECK(std::abs(expectation(rho, herm).imag()) < 1e-12);

  const Layout d = distinguishable_layout(kP, kQ);
  const DensityOperator singlet = singlet_state(d, Mode::distinguishable);
  const Operator ss =
      tensor(strangeness(d.factor(0), "p"), strangeness(d.factor(1), "q"), d);
  CHECK(expectation(singlet, ss).real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS(expectation(singlet, Operator::identity(l)));
}

TEST_CASE("density operator validation") {
  const Layout l(SpaceLayout({kP}));
  CHECK_THROWS_AS(DensityOperator(Operator::identity(l)), std::invalid_argument);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(Operator(l, m)), std::invalid_argument);
  m.setZero();
  m(0, 0) = 1.0;
  m(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityOperator(Operator(l, m)), std::invalid_argument);

  std::mt19937_64 rng(1);
  for (std::size_t rank : {1u, 2u, 0u}) {
    const DensityOperator rho = random_density_operator(l, rng, rank);
    CHECK(state_health(rho.op()).ok());
  }
}
