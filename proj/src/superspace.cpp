#include "causal/superspace.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "causal/error.hpp"

namespace causal {

namespace {

int gens_of(int n_susy) { return 4 * n_susy; }

GrassmannPoly resized(const GrassmannPoly& p, int order) {
  return order > p.order() ? p.extended(order) : p.truncated(order);
}

cplx body_value(const GrassmannPoly& p) {
  const XPoly c = p.coefficient(0);
  return c.empty() ? cplx(0.0) : c.value()(0, 0);
}

void accumulate(GrassmannPoly& acc, const GrassmannPoly& term) {
  if (term.empty()) return;
  acc += term;
}

GrassmannPoly scaled(const GrassmannPoly& p, cplx s) {
  GrassmannPoly r = p;
  r *= s;
  return r;
}

int first_order(const SuperPhi& phi) {
  for (const auto& p : phi.a)
    if (p.generators() > 0) return p.order();
  for (const auto& p : phi.omega)
    if (p.generators() > 0) return p.order();
  return 0;
}

}  // namespace

// --- operators -------------------------------------------------------------

SuperVectorOp::SuperVectorOp(int n_susy, int rank, int par)
    : N(n_susy), n(rank), parity(par), b(2 * n_susy), c(2 * n_susy) {}

GrassmannPoly SuperVectorOp::derive(const GrassmannPoly& f) const {
  GrassmannPoly r(f.generators(), f.n(), f.order());
  for (int mu = 0; mu < 4; ++mu)
    if (!a[mu].empty()) accumulate(r, a[mu] * f.derive_x(mu));
  for (int k = 0; k < 2 * N; ++k) {
    if (!b[k].empty()) accumulate(r, b[k] * f.derive(k));
    if (!c[k].empty()) accumulate(r, c[k] * f.derive(2 * N + k));
  }
  return r;
}

GrassmannPoly SuperVectorOp::apply(const GrassmannPoly& f) const {
  GrassmannPoly r = derive(f);
  if (!m.empty()) accumulate(r, m * f);
  return r;
}

SuperVectorOp& SuperVectorOp::operator+=(const SuperVectorOp& o) {
  if (o.N != N) throw Error(ErrorKind::ShapeMismatch, "operators on different superspaces");
  n = std::max(n, o.n);
  for (int mu = 0; mu < 4; ++mu) accumulate(a[mu], o.a[mu]);
  for (int k = 0; k < 2 * N; ++k) {
    accumulate(b[k], o.b[k]);
    accumulate(c[k], o.c[k]);
  }
  accumulate(m, o.m);
  return *this;
}

SuperVectorOp& SuperVectorOp::operator*=(cplx s) {
  for (auto& p : a) p *= s;
  for (auto& p : b) p *= s;
  for (auto& p : c) p *= s;
  m *= s;
  return *this;
}

double SuperVectorOp::norm_at_origin() const {
  double s = 0.0;
  auto add = [&](const GrassmannPoly& p) {
    if (p.empty()) return;
    const double v = p.at_origin().norm();
    s += v * v;
  };
  for (const auto& p : a) add(p);
  for (const auto& p : b) add(p);
  for (const auto& p : c) add(p);
  add(m);
  return std::sqrt(s);
}

SuperVectorOp susy_generator(SusyKind kind, int i, int index, int N, int n, int order) {
  if (N < 1 || i < 0 || i >= N || index < 0 || index > 1)
    throw Error(ErrorKind::IndexOutOfRange, "susy generator index out of range");
  const int g = gens_of(N);
  const cplx I(0.0, 1.0);
  SuperVectorOp op(N, n, 1);
  if (kind == SusyKind::Q) {
    op.b[2 * i + index] = GrassmannPoly::scalar(g, 1.0, 1, order);
    for (int ad = 0; ad < 2; ++ad)
      op.a[slot(index, ad)] = I * GrassmannPoly::generator(g, theta_bar_index(N, i, ad), 1, order);
  } else {
    op.c[2 * i + index] = GrassmannPoly::scalar(g, 1.0, 1, order);
    for (int al = 0; al < 2; ++al)
      op.a[slot(al, index)] = I * GrassmannPoly::generator(g, theta_index(N, i, al), 1, order);
  }
  return op;
}

SuperVectorOp partial_x(int mu, int N, int n, int order) {
  if (mu < 0 || mu > 3) throw Error(ErrorKind::IndexOutOfRange, "coordinate index");
  SuperVectorOp op(N, n, 0);
  op.a[mu] = GrassmannPoly::scalar(gens_of(N), 1.0, 1, order);
  return op;
}

SuperVectorOp anticommutator(const SuperVectorOp& x, const SuperVectorOp& y) {
  if (x.N != y.N) throw Error(ErrorKind::ShapeMismatch, "operators on different superspaces");
  const cplx sgn = (x.parity && y.parity) ? -1.0 : 1.0;
  SuperVectorOp r(x.N, std::max(x.n, y.n), (x.parity + y.parity) % 2);
  auto bracket = [&](const GrassmannPoly& xa, const GrassmannPoly& ya) {
    GrassmannPoly out;
    if (!ya.empty()) accumulate(out, x.derive(ya));
    if (!xa.empty()) accumulate(out, scaled(y.derive(xa), -sgn));
    return out;
  };
  for (int mu = 0; mu < 4; ++mu) r.a[mu] = bracket(x.a[mu], y.a[mu]);
  for (int k = 0; k < 2 * x.N; ++k) {
    r.b[k] = bracket(x.b[k], y.b[k]);
    r.c[k] = bracket(x.c[k], y.c[k]);
  }
  GrassmannPoly mult = bracket(x.m, y.m);
  if (!x.m.empty() && !y.m.empty()) {
    const int o = mult.empty() ? std::min(x.m.order(), y.m.order()) : mult.order();
    const GrassmannPoly mx = x.m.truncated(o), my = y.m.truncated(o);
    accumulate(mult, mx * my);
    accumulate(mult, scaled(my * mx, -sgn));
  }
  r.m = mult;
  return r;
}

// --- connections -----------------------------------------------------------

SuperPhi zero_phi(int N, int n, int order) {
  SuperPhi phi;
  phi.N = N;
  phi.n = n;
  const GrassmannPoly z(gens_of(N), n, order);
  phi.omega.assign(2 * N, z);
  phi.omega_bar.assign(2 * N, z);
  phi.a.fill(z);
  return phi;
}

SuperPhi truncated(const SuperPhi& phi, int order) {
  SuperPhi r = phi;
  for (auto& p : r.omega) p = p.truncated(order);
  for (auto& p : r.omega_bar) p = p.truncated(order);
  for (auto& p : r.a) p = p.truncated(order);
  return r;
}

SuperConnection zero_connection(int N, int n) {
  return SuperConnection{N, n, "zero",
                         [N, n](const Bispinor&, int order) { return zero_phi(N, n, order); }};
}

SuperConnection polynomial_connection(std::string name, const SuperPhi& about_origin) {
  SuperConnection c;
  c.N = about_origin.N;
  c.n = about_origin.n;
  c.name = std::move(name);
  c.at = [p = about_origin](const Bispinor& x0, int order) {
    SuperPhi r = p;
    auto move = [&](GrassmannPoly& q) { q = resized(q.shifted(x0), order); };
    for (auto& q : r.omega) move(q);
    for (auto& q : r.omega_bar) move(q);
    for (auto& q : r.a) move(q);
    return r;
  };
  return c;
}

SuperConnection random_connection(int N, int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, scale);
  const int g = gens_of(N);
  std::uniform_int_distribution<Mask> pick(0, (Mask(1) << g) - 1);
  auto random_poly = [&](int parity) {
    GrassmannPoly p(g, n, 1);
    for (int t = 0; t < 6; ++t) {
      Mask m = pick(rng);
      while ((degree(m) & 1) != parity || degree(m) > 3) m = pick(rng);
      XPoly c(n, 1);
      for (int k = 0; k < monomial_count(1); ++k)
        c[k] = Eigen::MatrixXcd::NullaryExpr(n, n, [&] { return cplx(gauss(rng), gauss(rng)); });
      p.add_term(m, c);
    }
    return p;
  };
  SuperPhi phi = zero_phi(N, n, 1);
  for (auto& q : phi.omega) q = random_poly(1);
  for (auto& q : phi.omega_bar) q = random_poly(1);
  for (auto& q : phi.a) q = random_poly(0);
  return polynomial_connection("random", phi);
}

LineOps covariant_line_ops(const SuperPhi& phi, const Spinor& l, const CoSpinor& lt) {
  const int N = phi.N, n = phi.n;
  const int order = std::max(first_order(phi), 1);
  LineOps ops;
  for (int i = 0; i < N; ++i) {
    SuperVectorOp t(N, n, 1), tb(N, n, 1);
    for (int k = 0; k < 2; ++k) {
      t += l.c(k) * susy_generator(SusyKind::Q, i, k, N, n, order);
      tb += lt.c(k) * susy_generator(SusyKind::QBar, i, k, N, n, order);
      accumulate(t.m, scaled(phi.omega[2 * i + k], l.c(k)));
      accumulate(tb.m, scaled(phi.omega_bar[2 * i + k], lt.c(k)));
    }
    ops.t.push_back(t);
    ops.t_bar.push_back(tb);
  }
  ops.d = SuperVectorOp(N, n, 0);
  for (int al = 0; al < 2; ++al)
    for (int ad = 0; ad < 2; ++ad) {
      const cplx w = l.c(al) * lt.c(ad);
      ops.d += w * partial_x(slot(al, ad), N, n, order);
      accumulate(ops.d.m, scaled(phi.a[slot(al, ad)], w));
    }
  return ops;
}

double line_integrability_residual(const SuperConnection& phi, const SuperNullLine& line,
                                   const std::vector<cplx>& samples) {
  const cplx two_i(0.0, 2.0);
  double worst = 0.0;
  for (cplx s : samples) {
    const Bispinor x = line.body().point(s);
    const LineOps ops = covariant_line_ops(phi.at(x, 1), line.dir_l, line.dir_r);
    const int N = phi.N;
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        worst = std::max(worst, anticommutator(ops.t[i], ops.t[j]).norm_at_origin());
        worst = std::max(worst, anticommutator(ops.t_bar[i], ops.t_bar[j]).norm_at_origin());
      }
      for (int j = 0; j < N; ++j) {
        SuperVectorOp r = anticommutator(ops.t[i], ops.t_bar[j]);
        if (i == j) r = r - two_i * ops.d;
        worst = std::max(worst, r.norm_at_origin());
      }
    }
  }
  return worst;
}

// --- super curves ----------------------------------------------------------

SuperCurve superspace_chart(int N, const Bispinor& x0, int order) {
  const int g = gens_of(N);
  SuperCurve c;
  c.N = N;
  c.body = x0;
  for (int mu = 0; mu < 4; ++mu) c.dx[mu] = GrassmannPoly::coordinate(g, mu, 1, order);
  for (int k = 0; k < 2 * N; ++k) {
    c.theta.push_back(GrassmannPoly::generator(g, k, 1, order));
    c.theta_bar.push_back(GrassmannPoly::generator(g, 2 * N + k, 1, order));
  }
  return c;
}

SuperCurve line_chart(const SuperNullLine& line, cplx s0, int order) {
  const int N = line.N, g = gens_of(N);
  const Bispinor v = outer(line.dir_l, line.dir_r);
  SuperCurve c;
  c.N = N;
  c.body = line.base + s0 * v;
  const GrassmannPoly ds = GrassmannPoly::coordinate(g, 0, 1, order);
  for (int mu = 0; mu < 4; ++mu) c.dx[mu] = scaled(ds, v(mu / 2, mu % 2));
  for (int i = 0; i < N; ++i) {
    const GrassmannPoly xi = GrassmannPoly::generator(g, theta_index(N, i, 0), 1, order);
    const GrassmannPoly xib = GrassmannPoly::generator(g, theta_bar_index(N, i, 0), 1, order);
    for (int k = 0; k < 2; ++k) {
      c.theta.push_back(scaled(xi, line.dir_l.c(k)));
      c.theta_bar.push_back(scaled(xib, line.dir_r.c(k)));
    }
  }
  return c;
}

FrameComponents push_frame(const SuperVectorOp& op, const SuperCurve& image) {
  const int N = image.N;
  const cplx I(0.0, 1.0);
  FrameComponents fc;
  for (int k = 0; k < 2 * N; ++k) {
    fc.a.push_back(op.derive(image.theta[k]));
    fc.b.push_back(op.derive(image.theta_bar[k]));
  }
  for (int be = 0; be < 2; ++be)
    for (int bd = 0; bd < 2; ++bd) {
      GrassmannPoly c = op.derive(image.dx[slot(be, bd)]);
      for (int j = 0; j < N; ++j) {
        accumulate(c, scaled(fc.a[2 * j + be] * image.theta_bar[2 * j + bd], -I));
        accumulate(c, scaled(fc.b[2 * j + bd] * image.theta[2 * j + be], -I));
      }
      fc.c[slot(be, bd)] = c;
    }
  return fc;
}

SuperProlongation super_prolong(const SuperCurve& chi, double tol) {
  const int N = chi.N;
  const int order = chi.dx[0].order();
  SuperProlongation out;

  const FrameComponents ys = push_frame(partial_x(0, N, 1, order), chi);
  Bispinor cb;
  for (int mu = 0; mu < 4; ++mu) cb(mu / 2, mu % 2) = body_value(ys.c[mu]);
  std::tie(out.l, out.lt) = factor_null(cb);
  double form = 0.0;
  for (int k = 0; k < 2 * N; ++k)
    form = std::max({form, ys.a[k].at_origin().norm(), ys.b[k].at_origin().norm()});

  const int pl = std::abs(out.l.c(0)) >= std::abs(out.l.c(1)) ? 0 : 1;
  const int pr = std::abs(out.lt.c(0)) >= std::abs(out.lt.c(1)) ? 0 : 1;
  out.m.assign(N, {});
  out.m_bar.assign(N, {});
  for (int i = 0; i < N; ++i) {
    const FrameComponents y = push_frame(susy_generator(SusyKind::Q, i, 0, N, 1, order), chi);
    const FrameComponents yb = push_frame(susy_generator(SusyKind::QBar, i, 0, N, 1, order), chi);
    for (int k = 0; k < N; ++k) {
      const GrassmannPoly mk = scaled(y.a[2 * k + pl].at_origin(), 1.0 / out.l.c(pl));
      const GrassmannPoly mbk = scaled(yb.b[2 * k + pr].at_origin(), 1.0 / out.lt.c(pr));
      for (int al = 0; al < 2; ++al) {
        form = std::max(form, (y.a[2 * k + al].at_origin() - scaled(mk, out.l.c(al))).norm());
        form = std::max(form, (yb.b[2 * k + al].at_origin() - scaled(mbk, out.lt.c(al))).norm());
        form = std::max({form, y.b[2 * k + al].at_origin().norm(),
                         yb.a[2 * k + al].at_origin().norm()});
      }
      out.m[i].push_back(mk);
      out.m_bar[i].push_back(mbk);
    }
    for (int mu = 0; mu < 4; ++mu)
      form = std::max({form, y.c[mu].at_origin().norm(), yb.c[mu].at_origin().norm()});
  }
  out.form_residual = form;

  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      GrassmannPoly s = GrassmannPoly::scalar(gens_of(N), i == k ? -1.0 : 0.0, 1, 0);
      for (int j = 0; j < N; ++j) accumulate(s, out.m[i][j] * out.m_bar[k][j]);
      out.mm_residual = std::max(out.mm_residual, s.norm());
    }
  if (form > tol)
    throw Error(ErrorKind::FormViolation, "pushforward off the frame form by " + std::to_string(form));
  return out;
}

// --- extended morphisms ----------------------------------------------------

SuperCausalMorphism extend_causal(const ExtendedCausalMorphism& ext) {
  SuperCausalMorphism s;
  s.name = "extended(" + ext.f.name + ")";
  s.data = ext;
  s.map = [ext](const SuperCurve& src, const Spinor& l, const CoSpinor& lt, int order) {
    const int N = src.N;
    SuperCurve img;
    img.N = N;
    img.body = ext.f.eval(src.body, l, lt).x;
    const auto jet = image_jet(ext.f, src.body, l, lt, order);
    for (int mu = 0; mu < 4; ++mu) {
      XPoly p = jet[mu];
      p[0](0, 0) -= img.body(mu / 2, mu % 2);
      img.dx[mu] = compose(GrassmannPoly::body(0, p), src.dx, {});
    }
    const Mat2 v = ext.v(src.body, l, lt), vt = ext.vt(src.body, l, lt);
    if (std::abs(v.determinant()) < 1e-14 || std::abs(vt.determinant()) < 1e-14)
      throw Error(ErrorKind::SingularMatrix, "odd frame is not invertible");
    const Mat2 ve = v * epsilon();
    GrassmannPoly coupling;
    if (ext.kappa != 0.0) coupling = scaled(src.theta[0] * src.theta_bar[0], ext.kappa);
    for (int i = 0; i < N; ++i)
      for (int al = 0; al < 2; ++al) {
        GrassmannPoly t(src.theta[0].generators(), 1, src.theta[0].order());
        GrassmannPoly tb = t;
        for (int be = 0; be < 2; ++be) {
          accumulate(t, scaled(src.theta[2 * i + be], v(al, be)));
          if (ext.kappa != 0.0) accumulate(t, scaled(coupling * src.theta[2 * i + be], ve(al, be)));
          accumulate(tb, scaled(src.theta_bar[2 * i + be], vt(al, be)));
        }
        img.theta.push_back(t);
        img.theta_bar.push_back(tb);
      }
    return img;
  };
  s.fiber = [f = ext.f](const Bispinor& x, const Spinor& l, const CoSpinor& lt) {
    const CausalPoint p = f.eval(x, l, lt);
    return std::pair{p.l, p.lt};
  };
  return s;
}

ExtendedCausalMorphism constant_frames(const CausalMorphism& f, const Mat2& v, const Mat2& vt,
                                       double kappa) {
  ExtendedCausalMorphism e;
  e.f = f;
  e.v = [v](const Bispinor&, const Spinor&, const CoSpinor&) { return v; };
  e.vt = [vt](const Bispinor&, const Spinor&, const CoSpinor&) { return vt; };
  e.kappa = kappa;
  return e;
}

double vv_compatibility_residual(const ExtendedCausalMorphism& ext, const NullLine& line,
                                 const std::vector<cplx>& samples) {
  double worst = 0.0;
  const Bispinor v = line.tangent();
  for (cplx s : samples) {
    const Bispinor x = line.point(s);
    const Bispinor pushed = unvec(jacobian(ext.f, x, line.dir_l, line.dir_r) * vec(v));
    const Mat2 vv = ext.v(x, line.dir_l, line.dir_r), vt = ext.vt(x, line.dir_l, line.dir_r);
    worst = std::max(worst, norm(Mat2(vv * v * vt.transpose() - pushed)));
  }
  return worst;
}

SuperPhi pullback_phi(const SuperCausalMorphism& f, const SuperConnection& phi,
                      const Bispinor& x0, const Spinor& l, const CoSpinor& lt, int order) {
  const int N = phi.N;
  const SuperCurve img = f.map(superspace_chart(N, x0, order + 1), l, lt, order + 1);
  const SuperPhi at = phi.at(img.body, order + 1);
  std::vector<GrassmannPoly> odd = img.theta;
  odd.insert(odd.end(), img.theta_bar.begin(), img.theta_bar.end());
  std::vector<GrassmannPoly> om, omb;
  std::array<GrassmannPoly, 4> aa;
  for (int k = 0; k < 2 * N; ++k) {
    om.push_back(compose(at.omega[k], img.dx, odd));
    omb.push_back(compose(at.omega_bar[k], img.dx, odd));
  }
  for (int mu = 0; mu < 4; ++mu) aa[mu] = compose(at.a[mu], img.dx, odd);

  auto contract = [&](const SuperVectorOp& op) {
    const FrameComponents fc = push_frame(op, img);
    GrassmannPoly r(gens_of(N), phi.n, order);
    for (int k = 0; k < 2 * N; ++k) {
      if (!fc.a[k].is_zero()) accumulate(r, fc.a[k] * om[k]);
      if (!fc.b[k].is_zero()) accumulate(r, fc.b[k] * omb[k]);
    }
    for (int mu = 0; mu < 4; ++mu)
      if (!fc.c[mu].is_zero()) accumulate(r, fc.c[mu] * aa[mu]);
    return r.truncated(order);
  };
  SuperPhi out = zero_phi(N, phi.n, order);
  for (int mu = 0; mu < 4; ++mu) out.a[mu] = contract(partial_x(mu, N, 1, order + 1));
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < 2; ++k) {
      out.omega[2 * i + k] = contract(susy_generator(SusyKind::Q, i, k, N, 1, order + 1));
      out.omega_bar[2 * i + k] = contract(susy_generator(SusyKind::QBar, i, k, N, 1, order + 1));
    }
  return out;
}

SuperConnection pullback_connection(const SuperCausalMorphism& f, const SuperConnection& phi,
                                    const Spinor& l, const CoSpinor& lt) {
  SuperConnection c;
  c.N = phi.N;
  c.n = phi.n;
  c.name = f.name + "^*" + phi.name;
  c.at = [f, phi, l, lt](const Bispinor& x0, int order) {
    return pullback_phi(f, phi, x0, l, lt, order);
  };
  return c;
}

LineComponents super_pullback_component(const SuperCausalMorphism& f, const SuperConnection& phi,
                                        const SuperPoint& z, const SuperNullLine& line,
                                        int order) {
  const SuperPhi p = pullback_phi(f, phi, z.x, line.dir_l, line.dir_r, order);
  const Spinor& l = line.dir_l;
  const CoSpinor& lt = line.dir_r;
  LineComponents out;
  out.d = GrassmannPoly(gens_of(phi.N), phi.n, order);
  for (int i = 0; i < phi.N; ++i) {
    GrassmannPoly t(gens_of(phi.N), phi.n, order), tb = t;
    for (int k = 0; k < 2; ++k) {
      accumulate(t, scaled(p.omega[2 * i + k], l.c(k)));
      accumulate(tb, scaled(p.omega_bar[2 * i + k], lt.c(k)));
    }
    out.t.push_back(t);
    out.t_bar.push_back(tb);
  }
  for (int al = 0; al < 2; ++al)
    for (int ad = 0; ad < 2; ++ad)
      accumulate(out.d, scaled(p.a[slot(al, ad)], l.c(al) * lt.c(ad)));
  return out;
}

std::array<GrassmannPoly, 4> tau_of(int N, int order) {
  const int g = gens_of(N);
  std::array<GrassmannPoly, 4> tau;
  for (int be = 0; be < 2; ++be)
    for (int bd = 0; bd < 2; ++bd) {
      GrassmannPoly t(g, 1, order);
      for (int i = 0; i < N; ++i)
        t += GrassmannPoly::generator(g, theta_index(N, i, be), 1, order) *
             GrassmannPoly::generator(g, theta_bar_index(N, i, bd), 1, order);
      tau[slot(be, bd)] = t;
    }
  return tau;
}

GrassmannPoly superfield_gauge(const SuperPhi& phi) {
  const int g = gens_of(phi.N);
  const int order = first_order(phi);
  GrassmannPoly r(g, phi.n, order);
  for (int i = 0; i < phi.N; ++i)
    for (int k = 0; k < 2; ++k) {
      accumulate(r, GrassmannPoly::generator(g, theta_index(phi.N, i, k), 1, order) *
                        phi.omega[2 * i + k]);
      accumulate(r, GrassmannPoly::generator(g, theta_bar_index(phi.N, i, k), 1, order) *
                        phi.omega_bar[2 * i + k]);
    }
  return r;
}

// --- certification ---------------------------------------------------------

std::vector<SuperNullLine> super_certification_lines(int N) {
  const cplx I(0.0, 1.0);
  std::vector<SuperNullLine> lines(3);
  lines[0].base << 0.1, 0.2, -0.3, 0.05;
  lines[0].dir_l = Spinor(1.0, 0.5 * I);
  lines[0].dir_r = CoSpinor(0.3, 1.0);
  lines[1].base << 0.5 * I, -0.2, 0.1, 0.3;
  lines[1].dir_l = Spinor(-0.4, 1.0);
  lines[1].dir_r = CoSpinor(1.0, -0.7 + 0.2 * I);
  lines[2].base = Bispinor::Zero();
  lines[2].dir_l = Spinor(1.0, 1.0);
  lines[2].dir_r = CoSpinor(1.0, -1.0);
  for (auto& l : lines) l.N = N;
  return lines;
}

SuperCertReport certify_extended(const ExtendedCausalMorphism& ext, int N) {
  const SuperCausalMorphism sf = extend_causal(ext);
  const cplx I(0.0, 1.0);
  const std::vector<cplx> params = {0.0, 0.3, -0.5 + 0.2 * I};
  SuperCertReport rep;
  for (const SuperNullLine& line : super_certification_lines(N)) {
    for (cplx s0 : params) {
      try {
        rep.max_vv = std::max(rep.max_vv, vv_compatibility_residual(ext, line.body(), {s0}));
        const SuperCurve chi = line_chart(line, s0, 2);
        const SuperProlongation pr = super_prolong(sf.map(chi, line.dir_l, line.dir_r, 2),
                                                   std::numeric_limits<double>::infinity());
        const auto [fl, flt] = sf.fiber(chi.body, line.dir_l, line.dir_r);
        const double contact = std::max({pr.form_residual, projective_distance(pr.l.c, fl.c),
                                         projective_distance(pr.lt.c, flt.c)});
        rep.max_contact = std::max(rep.max_contact, contact);
        rep.max_mm = std::max(rep.max_mm, pr.mm_residual);
        ++rep.samples;
      } catch (const Error& e) {
        rep.errors.push_back(e.what());
      }
    }
  }
  return rep;
}

}  // namespace causal
