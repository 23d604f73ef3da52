#include <doctest.h>

#include "causal/xpoly.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

XPoly random_poly(std::mt19937_64& g, int n, int order) {
  XPoly p(n, order);
  for (int i = 0; i < monomial_count(order); ++i)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) p[i](r, c) = oracle::gauss(g);
  return p;
}

}  // namespace

TEST_SUITE("xpoly") {
  TEST_CASE("monomial tables") {
    CHECK(monomial_count(0) == 1);
    CHECK(monomial_count(2) == 15);
    CHECK(static_cast<int>(monomials(3).size()) == monomial_count(3));
    for (int i = 0; i < monomial_count(3); ++i) CHECK(monomial_index(monomials(3)[i]) == i);
  }

  TEST_CASE("product agrees with pointwise evaluation") {
    std::mt19937_64 g(30);
    const XPoly a = random_poly(g, 2, 2), b = random_poly(g, 2, 2);
    // exact product of degree-1 truncations fits in order 2
    const XPoly a1 = a.truncated(1).extended(2), b1 = b.truncated(1).extended(2);
    const XPoly ab = a1 * b1;
    for (int k = 0; k < 5; ++k) {
      const Bispinor d = oracle::random_bispinor(g);
      CHECK((ab.evaluate(d) - a1.evaluate(d) * b1.evaluate(d)).norm() < 1e-12);
    }
    const XPoly s = XPoly::scalar(cplx(2, 1), 1, 2);
    CHECK(((s * a) - cplx(2, 1) * a).norm() < 1e-14);
  }

  TEST_CASE("derivative and shift") {
    std::mt19937_64 g(31);
    const XPoly p = random_poly(g, 1, 3);
    const Bispinor d = oracle::random_bispinor(g, 0.5);
    for (int mu = 0; mu < 4; ++mu) {
      const double h = 1e-4;
      const Bispinor e = h * basis_bispinor(mu);
      const cplx fd = (p.evaluate(d + e)(0, 0) - p.evaluate(d - e)(0, 0)) / (2 * h);
      CHECK(std::abs(p.derivative(mu).evaluate(d)(0, 0) - fd) < 1e-6);
    }
    const Bispinor s = oracle::random_bispinor(g, 0.5);
    CHECK(std::abs(p.shifted(s).evaluate(d)(0, 0) - p.evaluate(s + d)(0, 0)) < 1e-12);
    CHECK(XPoly::coordinate(2, 1, 1).evaluate(d)(0, 0) == d(1, 0));
  }

  TEST_CASE("zeroth-order jets have no derivative") {
    CHECK(oracle::thrown([] { XPoly::scalar(1.0, 1, 0).derivative(0); }) ==
          ErrorKind::DerivativeUnavailable);
  }
}
