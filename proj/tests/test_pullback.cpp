#include <doctest.h>

#include "causal/pullback.hpp"
#include "oracles.hpp"

using namespace causal;
using oracle::thrown;

namespace {

Mat2 mat(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

GaugeField abelian_asd() {
  std::array<MatN, 4> f;
  const cplx v[4] = {1.0, cplx(0.3, 0.2), cplx(0.3, 0.2), -0.5};
  for (int k = 0; k < 4; ++k) f[k] = MatN::Constant(1, 1, v[k]);
  return make_constant_asd(f);
}

GaugeField instanton() { return make_instanton(2.0, mat(0.3, 0.1, -0.2, 0.25)); }

GaugeField perturbed() {
  return make_perturbed_instanton(2.0, mat(0.3, 0.1, -0.2, 0.25), mat(1.0, 0.4, 0.4, -0.6));
}

SelfDualMorphism dilation(cplx a) {
  return lifted_affine_sd(a * Mat2::Identity(), Mat2::Identity(), Bispinor::Zero());
}

const Mat2 kL = mat(1.1, cplx(0.2, 0.1), -0.3, 0.9);
const Mat2 kLt = mat(cplx(0.8, -0.2), 0.4, 0.1, 1.2);

}  // namespace

TEST_SUITE("pullback") {
  TEST_CASE("identity and zero field") {
    const GaugeField a = instanton();
    std::mt19937_64 g(20);
    for (int k = 0; k < 10; ++k) {
      const Bispinor x = oracle::random_bispinor(g, 0.4);
      const Spinor l(oracle::gauss(g), oracle::gauss(g));
      const CoSpinor lt(oracle::gauss(g), oracle::gauss(g));
      const MatN expect = contract(outer(l, lt), a.eval(x));
      CHECK((pullback_component(identity_sd(), a, x, l, lt) - expect).norm() < 1e-12);
      CHECK(pullback_component(lifted_affine_sd(kL, kLt, x), zero_field(2), x, l, lt).norm() == 0.0);
      const PullbackValue pv = pullback_connection_at(identity_sd(), a, x);
      const Potential ax = a.eval(x);
      for (int mu = 0; mu < 4; ++mu) CHECK((pv.components[mu] - ax[mu]).norm() < 1e-12);
    }
  }

  TEST_CASE("dilation follows the chain rule") {
    const GaugeField a = instanton();
    const cplx s(1.3, 0.2);
    std::mt19937_64 g(21);
    for (int k = 0; k < 10; ++k) {
      const Bispinor x = oracle::random_bispinor(g, 0.3);
      const Spinor l(oracle::gauss(g), oracle::gauss(g));
      const CoSpinor lt(oracle::gauss(g), oracle::gauss(g));
      const MatN expect = s * contract(outer(l, lt), a.eval(s * x));
      CHECK((pullback_component(dilation(s), a, x, l, lt) - expect).norm() < 1e-10);
    }
    // constant curvature scales by s^2
    const GaugeField c = abelian_asd();
    const GaugeField pulled = make_pullback_field(dilation(s), c);
    const CurvatureSpinors before = curvature(c, Bispinor::Zero());
    const CurvatureSpinors after = curvature(pulled, mat(0.1, 0.2, 0.3, 0.4));
    for (int i = 0; i < 4; ++i) CHECK((after.f_asd[i] - s * s * before.f_asd[i]).norm() < 1e-6);
  }

  TEST_CASE("fiber-dependent squaring control breaks bilinearity") {
    CHECK(thrown([&] {
            pullback_connection_at(squaring_control_sd(), abelian_asd(), mat(0.3, 0.7, -0.2, 0.5));
          }) == ErrorKind::BilinearityViolation);
  }

  TEST_CASE("pullback of an ASD field stays ASD") {
    const GaugeField pulled = make_pullback_field(lifted_affine_sd(kL, kLt, mat(0.1, 0, 0.2, 0)),
                                                  instanton());
    std::mt19937_64 g(22);
    for (int k = 0; k < 10; ++k) CHECK(asd_residual(pulled, oracle::random_bispinor(g, 0.3)) < 1e-5);
  }

  TEST_CASE("patching data") {
    const AlphaPlane z{Bispinor::Zero(), {cplx(0.5, 0.2), 1}};
    const SelfDualMorphism f = lifted_affine_sd(kL, kLt, Bispinor::Zero());
    const PatchingData zero = patching_data(f, zero_field(2), z, z.chart(Vec2(0.1, 0.2)));
    CHECK((zero.g - MatN::Identity(2, 2)).norm() == 0.0);
    CHECK((zero.h - MatN::Identity(2, 2)).norm() == 0.0);
    CHECK((zero.h_tilde - MatN::Identity(2, 2)).norm() == 0.0);

    const GaugeField a = instanton();
    const PatchingData p1 = patching_data(f, a, z, z.chart(Vec2(0.1, 0.2)));
    const PatchingData p2 = patching_data(f, a, z, z.chart(Vec2(-0.3, cplx(0.1, 0.2))));
    CHECK((p1.g - p2.g).norm() < 1e-6);
    CHECK((p1.h_tilde * p1.h.inverse() - p1.g).norm() < 1e-8);
    CHECK(z.contains(p1.p, 1e-9));
    CHECK(z.contains(p1.q, 1e-9));
  }

  TEST_CASE("path independence") {
    const SelfDualMorphism f = lifted_affine_sd(kL, kLt, Bispinor::Zero());
    const AlphaPlane z{mat(0.1, 0, 0, 0.1), {cplx(0.5, 0.2), 1}};
    const Bispinor x1 = z.chart(Vec2(0, 0)), x2 = z.chart(Vec2(0.3, -0.2));
    CHECK(path_independence_residual(f, zero_field(2), z, x1, x2) == 0.0);
    CHECK(path_independence_residual(f, instanton(), z, x1, x2) < 1e-6);
    const Bispinor far = z.chart(Vec2(1.0, 1.0));
    CHECK(path_independence_residual(f, perturbed(), z, x1, far) > 1e-3);
  }

  TEST_CASE("Wilson route agrees with direct pullback") {
    const SelfDualMorphism f = lifted_affine_sd(kL, kLt, Bispinor::Zero());
    const GaugeField a = instanton();
    const AlphaPlane z{Bispinor::Zero(), {cplx(0.5, 0.2), 1}};
    const Bispinor x = z.chart(Vec2(0.2, 0.1));
    const Spinor l(0.3, cplx(1, -0.4));
    const MatN direct = pullback_component(f, a, x, l, z.codir);
    CHECK((wilson_route_component(f, a, z, x, l) - direct).norm() < 1e-6);
  }

  TEST_CASE("chart coordinates") {
    const AlphaPlane z{mat(1, 2, 3, 4), {cplx(0.5, 0.2), 1}};
    const Vec2 mu(0.3, cplx(0.1, -0.7));
    CHECK((chart_coordinate(z, z.chart(mu)) - mu).norm() < 1e-14);
  }

  TEST_CASE("symmetry verification") {
    Region r;
    r.radius = 0.5;
    r.samples = 10;
    const SymmetryReport ok = verify_morphism_symmetry(lifted_affine_sd(kL, kLt, Bispinor::Zero()),
                                                      instanton(), r);
    CHECK(ok.pass());
    CHECK(ok.samples == 10);
    const SymmetryReport bad = verify_morphism_symmetry(identity_sd(), perturbed(), r);
    CHECK_FALSE(bad.pass());
    CHECK(bad.max_asd > 1e-3);
  }

  TEST_CASE("region sampling is seeded and bounded") {
    Region r;
    r.basepoint = mat(1, 0, 0, 1);
    r.radius = 0.7;
    r.samples = 50;
    const auto a = sample_region(r), b = sample_region(r);
    REQUIRE(a.size() == 50);
    for (size_t k = 0; k < a.size(); ++k) {
      CHECK(norm(a[k] - b[k]) == 0.0);
      CHECK(norm(a[k] - r.basepoint) <= 0.7 + 1e-12);
    }
  }
}
