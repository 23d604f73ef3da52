#include <doctest.h>

#include "causal/grassmann.hpp"
#include "grassmann_props.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

GrassmannPoly th(int g, int gens = 4, int order = 1) {
  return GrassmannPoly::generator(gens, g, 1, order);
}

}  // namespace

TEST_SUITE("grassmann") {
  TEST_CASE("merge signs") {
    CHECK(merge_sign(0b01, 0b10) == 1);
    CHECK(merge_sign(0b10, 0b01) == -1);
    CHECK(merge_sign(0b11, 0b01) == 0);
    CHECK(merge_sign(0b100, 0b011) == 1);  // two transpositions
    CHECK(merge_sign(0b010, 0b101) == -1);
  }

  TEST_CASE("nilpotency and anticommutativity") {
    CHECK((th(1) * th(1)).is_zero());
    CHECK((th(1) * th(2) + th(2) * th(1)).is_zero());
    const auto t12 = th(1) * th(2);
    CHECK((t12 * th(3) - th(3) * t12).is_zero());
    CHECK(t12.parity() == 0);
    CHECK(th(0).parity() == 1);
    CHECK((th(0) + t12).parity() == -1);
  }

  TEST_CASE("dense model at N = 1") {
    // the model itself is an algebra map on generators
    const auto c0 = oracle::jw(0, 4), c1 = oracle::jw(1, 4);
    CHECK((c0 * c1 + c1 * c0).norm() == 0.0);
    CHECK((c0 * c0).norm() == 0.0);
    CHECK(oracle::dense_equivalence(4, 300, 40) < 1e-12);
  }

  TEST_CASE("laws on random sparse elements at N = 3") {
    const oracle::LawDefects d = oracle::grassmann_laws(12, 1000, 41);
    CHECK(d.cases == 1000);
    CHECK(d.associativity < 1e-10);
    CHECK(d.anticommutativity < 1e-10);
    CHECK(d.leibniz < 1e-10);
    CHECK(d.nilpotency < 1e-10);
  }

  TEST_CASE("x-derivative and body coordinates") {
    const auto x1 = GrassmannPoly::coordinate(4, 1, 1, 2);
    const auto f = x1 * x1 * th(0, 4, 2);
    const auto df = f.derive_x(1);
    CHECK(df.order() == 1);
    CHECK((df - 2.0 * GrassmannPoly::coordinate(4, 1, 1, 1) * th(0, 4, 1)).is_zero(1e-14));
    CHECK(oracle::thrown([] { th(0, 4, 0).derive_x(0); }) == ErrorKind::DerivativeUnavailable);
  }

  TEST_CASE("grade, restriction and origin") {
    const auto f = GrassmannPoly::scalar(4, 2.0, 1, 1) + th(0) + th(1) * th(2) +
                   GrassmannPoly::coordinate(4, 0, 1, 1) * th(3);
    CHECK(f.max_degree() == 2);
    CHECK(f.grade(1).terms().size() == 2);
    CHECK(f.restricted(0b0001).terms().size() == 2);
    CHECK(f.at_origin().grade(1).terms().size() == 1);
  }

  TEST_CASE("substitution") {
    // f = theta0 theta1 + dx^0 theta1 with theta0 -> theta1, theta1 -> theta0 and dx^0 -> 2 dx^0
    const auto f = th(0) * th(1) + GrassmannPoly::coordinate(4, 0, 1, 1) * th(1);
    std::array<GrassmannPoly, 4> dx;
    for (int mu = 0; mu < 4; ++mu) dx[mu] = GrassmannPoly::coordinate(4, mu, 1, 1);
    dx[0] *= 2.0;
    const std::vector<GrassmannPoly> odd = {th(1), th(0), th(2), th(3)};
    const auto g = compose(f, dx, odd);
    const auto expect = th(1) * th(0) + 2.0 * GrassmannPoly::coordinate(4, 0, 1, 1) * th(0);
    CHECK((g - expect).is_zero(1e-14));
  }

  TEST_CASE("shape errors") {
    CHECK(oracle::thrown([] { th(0, 4) + th(0, 6); }) == ErrorKind::ShapeMismatch);
    CHECK(oracle::thrown([] { th(5, 4); }) == ErrorKind::IndexOutOfRange);
    CHECK(oracle::thrown([] { graded_commutator(th(0) + th(0) * th(1), th(2)); }) ==
          ErrorKind::ShapeMismatch);
  }

  TEST_CASE("graded commutator") {
    CHECK(graded_commutator(th(0), th(1)).is_zero());  // {a, b} = ab + ba
    const auto c = graded_commutator(th(0), th(0));
    CHECK(c.is_zero());
    const auto e = th(0) * th(1);
    CHECK(graded_commutator(e, th(2)).is_zero());
  }
}
