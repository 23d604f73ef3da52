#include <doctest.h>

#include "causal/morphism.hpp"
#include "oracles.hpp"

using namespace causal;
using oracle::thrown;

namespace {

Mat2 mat(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

const Mat2 kL = mat(1.2, cplx(0.3, 0.1), -0.4, 0.9);
const Mat2 kLt = mat(cplx(0.8, -0.2), 0.5, 0.1, 1.1);
const Bispinor kB = mat(0.2, -0.1, cplx(0, 0.3), 0.05);

SurfaceMap flat_chart(const CoSpinor& lt) {
  SurfaceMap s;
  s.map = [lt](const Vec2& t) { return outer({t(0), t(1)}, lt); };
  return s;
}

}  // namespace

TEST_SUITE("morphism") {
  TEST_CASE("prolong on flat and diagonal charts") {
    const CoSpinor lt0(cplx(0.4, 1), 2);
    std::mt19937_64 g(10);
    for (int k = 0; k < 5; ++k) {
      const Vec2 t(oracle::gauss(g), oracle::gauss(g));
      const ProlongResult r = prolong(flat_chart(lt0), t);
      CHECK(projective_distance(r.codir.c, lt0.c) < 1e-8);
    }
    SurfaceMap diag;
    diag.map = [](const Vec2& t) { return mat(t(0), t(1), t(1), t(0)); };  // tangents I and sigma_x
    CHECK(thrown([&] { prolong(diag, Vec2(0.1, 0.2)); }) == ErrorKind::NotNull);

    SurfaceMap twisted;  // null columns with different right factors
    twisted.map = [](const Vec2& t) { return mat(t(0), t(1), 0, 0); };
    CHECK(thrown([&] { prolong(twisted, Vec2(0.1, 0.2)); }) == ErrorKind::NoCommonFactor);
  }

  TEST_CASE("identity and affine maps certify") {
    CHECK(certify_self_dual(identity_sd()).max_residual < 1e-11);
    CHECK(certify_self_dual(lifted_affine_sd(kL, kLt, kB)).max_residual < 1e-10);
    CHECK(certify_causal(identity_causal()).max_residual < 1e-11);
    CHECK(certify_causal(lifted_affine_causal(kL, kLt, kB)).max_residual < 1e-10);
    const auto id = lifted_affine_sd(Mat2::Identity(), Mat2::Identity(), Bispinor::Zero());
    const SdPoint p = id.eval(kB, {1, 2});
    CHECK(norm(p.x - kB) == 0.0);
    CHECK((p.lt.c - Vec2(1, 2)).norm() == 0.0);
  }

  TEST_CASE("controls fail certification") {
    const ContactReport sq = certify_self_dual(componentwise_square_sd());
    CHECK(sq.max_residual > 1e-2);
    CHECK(certify_causal(squaring_control_causal()).max_residual > 1e-2);
  }

  TEST_CASE("composition closure") {
    const auto a = lifted_affine_sd(kL, kLt, kB);
    const auto b = lifted_affine_sd(kLt, kL, -kB);
    CHECK(certify_self_dual(compose(a, b)).max_residual < 1e-10);
    const auto ca = lifted_affine_causal(kL, kLt, kB);
    CHECK(certify_causal(compose(ca, identity_causal())).max_residual < 1e-10);
    CHECK(certify_causal(compose(ca, lifted_affine_causal(kLt, kL, kB))).max_residual < 1e-10);
  }

  TEST_CASE("singular linear parts are rejected") {
    const Mat2 rank1 = mat(1, 2, 2, 4);
    CHECK(thrown([&] { lifted_affine_sd(rank1, kLt, kB); }) == ErrorKind::SingularMatrix);
    CHECK(thrown([&] { lifted_affine_causal(kL, rank1, kB); }) == ErrorKind::SingularMatrix);
  }

  TEST_CASE("analytic Jacobian is L kron Lt") {
    const auto f = lifted_affine_sd(kL, kLt, kB);
    const Eigen::Matrix4cd j = jacobian(f, kB, {1, 0});
    for (int mu = 0; mu < 4; ++mu) {
      // image of the basis bispinor e_mu
      const Bispinor img = kL * basis_bispinor(mu) * kLt.transpose();
      CHECK((j.col(mu) - vec(img)).norm() < 1e-14);
    }
    SelfDualMorphism fd = f;
    fd.jac = nullptr;
    CHECK((jacobian(fd, kB, {1, 0}) - j).norm() < 1e-8);
  }

  TEST_CASE("contract_plane") {
    const AlphaPlane z{kB, {cplx(0.5, 0.5), 1}};
    const SurfaceMap id = contract_plane(identity_sd(), z);
    const Vec2 mu(0.3, cplx(-0.2, 0.1));
    CHECK(norm(id.map(mu) - z.chart(mu)) < 1e-15);

    const auto dil = lifted_affine_sd(2.0 * Mat2::Identity(), Mat2::Identity(), Bispinor::Zero());
    CHECK(norm(contract_plane(dil, z).map(mu) - 2.0 * z.chart(mu)) < 1e-14);

    const auto f = lifted_affine_sd(kL, kLt, kB);
    const ProlongResult r = prolong(contract_plane(f, z), mu);
    CHECK(projective_distance(r.codir.c, kLt * z.codir.c) < 1e-8);
    CHECK(projective_distance(r.codir.c, f.eval(z.chart(mu), z.codir).lt.c) < 1e-8);
  }

  TEST_CASE("dilation pushes null vectors by its factor") {
    const auto dil = lifted_affine_sd(3.0 * Mat2::Identity(), Mat2::Identity(), Bispinor::Zero());
    const Bispinor v = outer({1, 2}, {cplx(0, 1), 1});
    CHECK((jacobian(dil, kB, {1, 0}) * vec(v) - 3.0 * vec(v)).norm() < 1e-14);
  }

  TEST_CASE("causal prolongation and contract_line") {
    const NullLine line{kB, {1, cplx(0.2, 0.3)}, {0.4, 1}};
    const auto f = lifted_affine_causal(kL, kLt, kB);
    const NullCurve img = contract_line(f, line);
    const auto [l, lt] = prolong_null_curve(img, 0.3);
    CHECK(projective_distance(l.c, kL * line.dir_l.c) < 1e-8);
    CHECK(projective_distance(lt.c, kLt * line.dir_r.c) < 1e-8);
    NullCurve bad;
    bad.point = [](cplx s) { return mat(s, 0, 0, s); };
    bad.velocity = [](cplx) { return Mat2::Identity().eval(); };
    CHECK(thrown([&] { prolong_null_curve(bad, 0.0); }) == ErrorKind::NotNull);
  }
}
