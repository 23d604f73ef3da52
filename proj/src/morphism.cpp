#include "causal/morphism.hpp"

#include <random>

#include "causal/error.hpp"

namespace causal {

Eigen::Vector4cd vec(const Bispinor& v) { return Eigen::Vector4cd(v(0, 0), v(0, 1), v(1, 0), v(1, 1)); }

Bispinor unvec(const Eigen::Vector4cd& v) {
  Bispinor m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

namespace {

constexpr double kH1 = 1e-4;
constexpr double kH2 = 5e-5;

/// Holomorphic derivative of a bispinor-valued function of one complex variable.
Bispinor fd(const std::function<Bispinor(cplx)>& f, cplx s) {
  const Bispinor d1 = (f(s + kH1) - f(s - kH1)) / (2.0 * kH1);
  const Bispinor d2 = (f(s + kH2) - f(s - kH2)) / (2.0 * kH2);
  return (4.0 * d2 - d1) / 3.0;
}

/// Row of the larger norm; for a null bispinor it is the right factor up to scale.
Vec2 right_factor(const Bispinor& v) {
  return v.row(0).squaredNorm() >= v.row(1).squaredNorm() ? Vec2(v.row(0).transpose())
                                                            : Vec2(v.row(1).transpose());
}

Vec2 left_factor(const Bispinor& v) {
  return v.col(0).squaredNorm() >= v.col(1).squaredNorm() ? Vec2(v.col(0)) : Vec2(v.col(1));
}

void accumulate(ContactReport& r, double nullity, double common, double fiber) {
  r.max_nullity = std::max(r.max_nullity, nullity);
  r.max_common = std::max(r.max_common, common);
  r.max_fiber = std::max(r.max_fiber, fiber);
  const double res = std::max({nullity, common, fiber});
  r.max_residual = std::max(r.max_residual, res);
  r.mean_residual = (r.mean_residual * r.samples + res) / (r.samples + 1);
  r.samples += 1;
}

void merge(ContactReport& into, const ContactReport& from) {
  if (from.samples == 0) return;
  into.max_nullity = std::max(into.max_nullity, from.max_nullity);
  into.max_common = std::max(into.max_common, from.max_common);
  into.max_fiber = std::max(into.max_fiber, from.max_fiber);
  into.max_residual = std::max(into.max_residual, from.max_residual);
  into.mean_residual = (into.mean_residual * into.samples + from.mean_residual * from.samples) /
                       (into.samples + from.samples);
  into.samples += from.samples;
}

Mat2 require_invertible(const Mat2& m, const char* what) {
  if (std::abs(m.determinant()) < 1e-12 * std::max(1.0, m.squaredNorm()))
    throw Error(ErrorKind::SingularMatrix, std::string(what) + " is singular");
  return m;
}

Eigen::Matrix4cd kron(const Mat2& a, const Mat2& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) k(2 * i + p, 2 * j + q) = a(i, j) * b(p, q);
  return k;
}

Eigen::Matrix4cd fd_jacobian(const std::function<Bispinor(const Bispinor&)>& g, const Bispinor& x) {
  Eigen::Matrix4cd j;
  for (int nu = 0; nu < 4; ++nu) {
    Bispinor e = Bispinor::Zero();
    e(nu / 2, nu % 2) = 1.0;
    j.col(nu) = vec(fd([&](cplx s) { return g(x + s * e); }, 0.0));
  }
  return j;
}

}  // namespace

Eigen::Matrix4cd jacobian(const SelfDualMorphism& f, const Bispinor& x, const CoSpinor& lt) {
  if (f.jac) return f.jac(x, lt);
  return fd_jacobian([&](const Bispinor& y) { return f.eval(y, lt).x; }, x);
}

std::array<Bispinor, 2> SurfaceMap::columns(const Vec2& t) const {
  if (jac) return jac(t);
  return {fd([&](cplx s) { return map(t + Vec2(s, 0.0)); }, 0.0),
          fd([&](cplx s) { return map(t + Vec2(0.0, s)); }, 0.0)};
}

ProlongResult prolong(const SurfaceMap& chi, const Vec2& t, double tol) {
  const auto cols = chi.columns(t);
  std::array<CoSpinor, 2> codirs;
  for (int k = 0; k < 2; ++k) {
    if (cols[k].norm() == 0.0) throw Error(ErrorKind::NotNull, "surface is not immersive");
    codirs[k] = factor_null(cols[k], tol).second;
  }
  const double res = projective_distance(codirs[0].c, codirs[1].c);
  if (res > tol) throw Error(ErrorKind::NoCommonFactor, "tangent columns have different codirections");
  return {codirs[0], res};
}

ContactReport check_contact(const SelfDualMorphism& f, const Prolongation& chi,
                            const std::vector<Vec2>& samples) {
  ContactReport rep;
  auto image = [&](const Vec2& t) { return f.eval(chi.base.map(t), chi.codir(t)).x; };
  for (const Vec2& t : samples) {
    const SdPoint p = f.eval(chi.base.map(t), chi.codir(t));
    const std::array<Bispinor, 2> cols = {
        fd([&](cplx s) { return image(t + Vec2(s, 0.0)); }, 0.0),
        fd([&](cplx s) { return image(t + Vec2(0.0, s)); }, 0.0)};
    const double nullity = std::max(nullity_defect(cols[0]), nullity_defect(cols[1]));
    const Vec2 c0 = right_factor(cols[0]);
    const Vec2 c1 = right_factor(cols[1]);
    const double common = projective_distance(c0, c1);
    const double fiber =
        std::max(projective_distance(p.lt.c, c0), projective_distance(p.lt.c, c1));
    accumulate(rep, nullity, common, fiber);
  }
  return rep;
}

SurfaceMap contract_plane(const SelfDualMorphism& f, const AlphaPlane& z) {
  SurfaceMap m;
  m.map = [f, z](const Vec2& mu) { return f.eval(z.chart(mu), z.codir).x; };
  if (f.jac) {
    m.jac = [f, z](const Vec2& mu) {
      const Eigen::Matrix4cd j = f.jac(z.chart(mu), z.codir);
      return std::array<Bispinor, 2>{unvec(j * vec(outer(Spinor(1.0, 0.0), z.codir))),
                                     unvec(j * vec(outer(Spinor(0.0, 1.0), z.codir)))};
    };
  }
  return m;
}

SelfDualMorphism identity_sd() {
  SelfDualMorphism f;
  f.name = "identity";
  f.eval = [](const Bispinor& x, const CoSpinor& lt) { return SdPoint{x, lt}; };
  f.jac = [](const Bispinor&, const CoSpinor&) -> Eigen::Matrix4cd {
    return Eigen::Matrix4cd::Identity();
  };
  return f;
}

SelfDualMorphism lifted_affine_sd(const Mat2& l, const Mat2& lt, const Bispinor& b) {
  require_invertible(l, "Lambda");
  require_invertible(lt, "Lambda-tilde");
  SelfDualMorphism f;
  f.name = "lifted_affine";
  f.eval = [l, lt, b](const Bispinor& x, const CoSpinor& w) {
    return SdPoint{l * x * lt.transpose() + b, CoSpinor(lt * w.c)};
  };
  const Eigen::Matrix4cd j = kron(l, lt);
  f.jac = [j](const Bispinor&, const CoSpinor&) { return j; };
  return f;
}

SelfDualMorphism componentwise_square_sd() {
  SelfDualMorphism f;
  f.name = "componentwise_square";
  f.eval = [](const Bispinor& x, const CoSpinor& lt) {
    return SdPoint{x.cwiseProduct(x), lt};
  };
  f.jac = [](const Bispinor& x, const CoSpinor&) -> Eigen::Matrix4cd {
    return (2.0 * vec(x)).asDiagonal();
  };
  return f;
}

namespace {
cplx fiber_weight(const CoSpinor& lt) {
  const cplx a = lt.c(0), b = lt.c(1);
  return 1.0 + a * b / (a * a + b * b);
}
}  // namespace

SelfDualMorphism squaring_control_sd() {
  SelfDualMorphism f;
  f.name = "squaring_control";
  f.eval = [](const Bispinor& x, const CoSpinor& lt) {
    return SdPoint{fiber_weight(lt) * x.cwiseProduct(x), lt};
  };
  f.jac = [](const Bispinor& x, const CoSpinor& lt) -> Eigen::Matrix4cd {
    return (2.0 * fiber_weight(lt) * vec(x)).asDiagonal();
  };
  return f;
}

SelfDualMorphism compose(const SelfDualMorphism& g, const SelfDualMorphism& f) {
  SelfDualMorphism h;
  h.name = g.name + "*" + f.name;
  h.eval = [g, f](const Bispinor& x, const CoSpinor& lt) {
    const SdPoint p = f.eval(x, lt);
    return g.eval(p.x, p.lt);
  };
  if (f.jac && g.jac) {
    h.jac = [g, f](const Bispinor& x, const CoSpinor& lt) -> Eigen::Matrix4cd {
      const SdPoint p = f.eval(x, lt);
      return g.jac(p.x, p.lt) * f.jac(x, lt);
    };
  }
  return h;
}

namespace {

Prolongation flat_prolongation(const Bispinor& base, const CoSpinor& lt) {
  Prolongation p;
  const AlphaPlane z{base, lt};
  p.base.map = [z](const Vec2& t) { return z.chart(t); };
  p.base.jac = [lt](const Vec2&) {
    return std::array<Bispinor, 2>{outer(Spinor(1.0, 0.0), lt), outer(Spinor(0.0, 1.0), lt)};
  };
  p.codir = [lt](const Vec2&) { return lt; };
  return p;
}

/// Nonlinear chart of an alpha-plane: base + mu(t) (x) lt0, fiber scale s(t) lt0.
Prolongation curved_prolongation(const Bispinor& base, const CoSpinor& lt0,
                                 std::function<Vec2(const Vec2&)> mu,
                                 std::function<Mat2(const Vec2&)> dmu,
                                 std::function<cplx(const Vec2&)> scale) {
  Prolongation p;
  p.base.map = [=](const Vec2& t) -> Bispinor { return base + mu(t) * lt0.c.transpose(); };
  p.base.jac = [=](const Vec2& t) {
    const Mat2 d = dmu(t);
    return std::array<Bispinor, 2>{d.col(0) * lt0.c.transpose(), d.col(1) * lt0.c.transpose()};
  };
  p.codir = [=](const Vec2& t) { return CoSpinor(scale(t) * lt0.c); };
  return p;
}

}  // namespace

std::vector<Prolongation> certification_prolongations() {
  using namespace std::complex_literals;
  std::vector<Prolongation> out;
  Bispinor b1, b2, b3;
  b1 << 0.0, 0.0, 0.0, 0.0;
  b2 << 0.3 + 0.1i, -0.2, 0.15i, 0.4;
  b3 << -0.25, 0.1 - 0.3i, 0.2, -0.1i;
  out.push_back(flat_prolongation(b1, CoSpinor(1.0, 0.3 + 0.2i)));
  out.push_back(flat_prolongation(b2, CoSpinor(0.2 - 0.5i, 1.0)));
  out.push_back(flat_prolongation(b3, CoSpinor(0.7, -0.4 + 0.9i)));
  out.push_back(curved_prolongation(
      b2, CoSpinor(1.0, 0.5i),
      [](const Vec2& t) {
        return Vec2(t(0) + 0.3 * t(1) * t(1), t(1) + 0.2 * t(0) * t(1) + 0.1 * t(0) * t(0));
      },
      [](const Vec2& t) {
        Mat2 d;
        d << 1.0, 0.6 * t(1), 0.2 * t(1) + 0.2 * t(0), 1.0 + 0.2 * t(0);
        return d;
      },
      [](const Vec2& t) { return 1.0 + 0.5 * t(0); }));
  out.push_back(curved_prolongation(
      b3, CoSpinor(-0.6 + 0.2i, 1.0),
      [](const Vec2& t) {
        return Vec2(t(0) + 0.5 * t(0) * t(1), t(1) + 0.25 * t(0) * t(0) * t(0));
      },
      [](const Vec2& t) {
        Mat2 d;
        d << 1.0 + 0.5 * t(1), 0.5 * t(0), 0.75 * t(0) * t(0), 1.0;
        return d;
      },
      [](const Vec2& t) { return 1.0 - 0.3 * t(1); }));
  return out;
}

std::vector<Vec2> certification_samples(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<Vec2> out;
  for (int k = 0; k < count; ++k) out.emplace_back(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
  return out;
}

ContactReport certify_self_dual(const SelfDualMorphism& f) {
  ContactReport all;
  const auto samples = certification_samples();
  for (const auto& p : certification_prolongations()) merge(all, check_contact(f, p, samples));
  return all;
}

// --- causal ------------------------------------------------------------------

Eigen::Matrix4cd jacobian(const CausalMorphism& f, const Bispinor& x, const Spinor& l,
                          const CoSpinor& lt) {
  if (f.jac) return f.jac(x, l, lt);
  return fd_jacobian([&](const Bispinor& y) { return f.eval(y, l, lt).x; }, x);
}

std::array<XPoly, 4> image_jet(const CausalMorphism& f, const Bispinor& x, const Spinor& l,
                               const CoSpinor& lt, int order) {
  if (f.jet) return f.jet(x, l, lt, order);
  if (order > 2)
    throw Error(ErrorKind::DerivativeUnavailable, "finite-difference jets stop at order 2");
  auto img = [&](const Bispinor& y) { return vec(f.eval(y, l, lt).x); };
  std::array<XPoly, 4> out;
  for (auto& p : out) p = XPoly(1, order);
  const Eigen::Vector4cd v0 = img(x);
  for (int c = 0; c < 4; ++c) out[c][0](0, 0) = v0(c);
  if (order >= 1) {
    const Eigen::Matrix4cd j = jacobian(f, x, l, lt);
    for (int c = 0; c < 4; ++c)
      for (int mu = 0; mu < 4; ++mu) {
        Exponents e{0, 0, 0, 0};
        e[mu] = 1;
        out[c].at(e)(0, 0) = j(c, mu);
      }
  }
  if (order >= 2) {
    const double h = 1e-3;
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu; nu < 4; ++nu) {
        const Bispinor em = h * basis_bispinor(mu), en = h * basis_bispinor(nu);
        const Eigen::Vector4cd d2 =
            (img(x + em + en) - img(x + em - en) - img(x - em + en) + img(x - em - en)) /
            (4.0 * h * h);
        Exponents e{0, 0, 0, 0};
        e[mu] += 1;
        e[nu] += 1;
        const double sym = (mu == nu) ? 0.5 : 1.0;
        for (int c = 0; c < 4; ++c) out[c].at(e)(0, 0) = sym * d2(c);
      }
    }
  }
  return out;
}

std::pair<Spinor, CoSpinor> prolong_null_curve(const NullCurve& chi, cplx s, double tol) {
  return factor_null(chi.velocity(s), tol);
}

ContactReport check_contact_causal(const CausalMorphism& f, const NullCurve& chi,
                                   const std::vector<cplx>& samples) {
  ContactReport rep;
  auto image = [&](cplx s) {
    const auto [l, lt] = prolong_null_curve(chi, s);
    return f.eval(chi.point(s), l, lt).x;
  };
  for (cplx s : samples) {
    const auto [l, lt] = prolong_null_curve(chi, s);
    const CausalPoint p = f.eval(chi.point(s), l, lt);
    const Bispinor w = fd(image, s);
    accumulate(rep, nullity_defect(w), projective_distance(p.l.c, left_factor(w)),
               projective_distance(p.lt.c, right_factor(w)));
  }
  return rep;
}

NullCurve contract_line(const CausalMorphism& f, const NullLine& line) {
  NullCurve c;
  c.point = [f, line](cplx s) { return f.eval(line.point(s), line.dir_l, line.dir_r).x; };
  c.velocity = [f, line, c](cplx s) -> Bispinor {
    if (f.jac)
      return unvec(f.jac(line.point(s), line.dir_l, line.dir_r) * vec(line.tangent()));
    return fd(c.point, s);
  };
  return c;
}

namespace {

std::array<XPoly, 4> affine_jet(const Mat2& l, const Mat2& lt, const Bispinor& b,
                                const Bispinor& x, int order) {
  const Eigen::Matrix4cd k = kron(l, lt);
  const Eigen::Vector4cd v0 = vec(l * x * lt.transpose() + b);
  std::array<XPoly, 4> out;
  for (int c = 0; c < 4; ++c) {
    out[c] = XPoly(1, order);
    out[c][0](0, 0) = v0(c);
    if (order < 1) continue;
    for (int mu = 0; mu < 4; ++mu) {
      Exponents e{0, 0, 0, 0};
      e[mu] = 1;
      out[c].at(e)(0, 0) = k(c, mu);
    }
  }
  return out;
}

}  // namespace

CausalMorphism identity_causal() {
  CausalMorphism f = lifted_affine_causal(Mat2::Identity(), Mat2::Identity(), Bispinor::Zero());
  f.name = "identity";
  return f;
}

CausalMorphism lifted_affine_causal(const Mat2& l, const Mat2& lt, const Bispinor& b) {
  require_invertible(l, "Lambda");
  require_invertible(lt, "Lambda-tilde");
  CausalMorphism f;
  f.name = "lifted_affine";
  f.eval = [l, lt, b](const Bispinor& x, const Spinor& s, const CoSpinor& w) {
    return CausalPoint{l * x * lt.transpose() + b, Spinor(l * s.c), CoSpinor(lt * w.c)};
  };
  const Eigen::Matrix4cd k = kron(l, lt);
  f.jac = [k](const Bispinor&, const Spinor&, const CoSpinor&) { return k; };
  f.jet = [l, lt, b](const Bispinor& x, const Spinor&, const CoSpinor&, int order) {
    return affine_jet(l, lt, b, x, order);
  };
  return f;
}

CausalMorphism squaring_control_causal() {
  CausalMorphism f;
  f.name = "squaring_control";
  f.eval = [](const Bispinor& x, const Spinor& l, const CoSpinor& lt) {
    return CausalPoint{x.cwiseProduct(x), l, lt};
  };
  f.jac = [](const Bispinor& x, const Spinor&, const CoSpinor&) -> Eigen::Matrix4cd {
    return (2.0 * vec(x)).asDiagonal();
  };
  f.jet = [](const Bispinor& x, const Spinor&, const CoSpinor&, int order) {
    std::array<XPoly, 4> out;
    const Eigen::Vector4cd v = vec(x);
    for (int c = 0; c < 4; ++c) {
      out[c] = XPoly(1, order);
      out[c][0](0, 0) = v(c) * v(c);
      Exponents e{0, 0, 0, 0};
      e[c] = 1;
      if (order >= 1) out[c].at(e)(0, 0) = 2.0 * v(c);
      e[c] = 2;
      if (order >= 2) out[c].at(e)(0, 0) = 1.0;
    }
    return out;
  };
  return f;
}

CausalMorphism compose(const CausalMorphism& g, const CausalMorphism& f) {
  CausalMorphism h;
  h.name = g.name + "*" + f.name;
  h.eval = [g, f](const Bispinor& x, const Spinor& l, const CoSpinor& lt) {
    const CausalPoint p = f.eval(x, l, lt);
    return g.eval(p.x, p.l, p.lt);
  };
  h.jac = [g, f](const Bispinor& x, const Spinor& l, const CoSpinor& lt) -> Eigen::Matrix4cd {
    const CausalPoint p = f.eval(x, l, lt);
    return jacobian(g, p.x, p.l, p.lt) * jacobian(f, x, l, lt);
  };
  return h;
}

std::vector<NullCurve> certification_curves() {
  using namespace std::complex_literals;
  std::vector<NullCurve> out;
  Bispinor b;
  b << 0.2, -0.1i, 0.3, 0.05 + 0.2i;
  const std::array<std::pair<Spinor, CoSpinor>, 3> dirs = {
      std::pair{Spinor(1.0, 0.4i), CoSpinor(0.3, 1.0)},
      std::pair{Spinor(-0.5, 1.0), CoSpinor(1.0, 0.2 - 0.7i)},
      std::pair{Spinor(0.8 + 0.1i, 0.6), CoSpinor(-0.4i, 0.9)}};
  for (const auto& [l, lt] : dirs) {
    const NullLine line{b, l, lt};
    out.push_back(NullCurve{[line](cplx s) { return line.point(s); },
                            [line](cplx) { return line.tangent(); }});
  }
  // tangent (1, s) (x) (1, s/2)
  out.push_back(NullCurve{
      [b](cplx s) -> Bispinor {
        Bispinor m;
        m << s, 0.25 * s * s, 0.5 * s * s, s * s * s / 6.0;
        return b + m;
      },
      [](cplx s) -> Bispinor { return outer(Spinor(1.0, s), CoSpinor(1.0, 0.5 * s)); }});
  // tangent (0.3 + s^2, 1) (x) (1 - 0.2i, s)
  const cplx c = 1.0 - 0.2i;
  out.push_back(NullCurve{
      [b, c](cplx s) -> Bispinor {
        Bispinor m;
        m << c * (0.3 * s + s * s * s / 3.0), 0.15 * s * s + s * s * s * s / 4.0, c * s,
            0.5 * s * s;
        return b + m;
      },
      [c](cplx s) -> Bispinor { return outer(Spinor(0.3 + s * s, 1.0), CoSpinor(c, s)); }});
  return out;
}

std::vector<cplx> certification_parameters(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<cplx> out;
  for (int k = 0; k < count; ++k) out.emplace_back(u(rng), u(rng));
  return out;
}

ContactReport certify_causal(const CausalMorphism& f) {
  ContactReport all;
  const auto params = certification_parameters();
  for (const auto& c : certification_curves()) merge(all, check_contact_causal(f, c, params));
  return all;
}

}  // namespace causal
