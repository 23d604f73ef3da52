#include "causal/pullback.hpp"

#include <cmath>
#include <random>

#include "causal/error.hpp"

namespace causal {

MatN pullback_component(const SelfDualMorphism& f, const GaugeField& a, const Bispinor& x,
                        const Spinor& l, const CoSpinor& lt) {
  const Bispinor y = f.eval(x, lt).x;
  const Bispinor w = unvec(jacobian(f, x, lt) * vec(outer(l, lt)));
  return contract(w, a.at(y));
}

PullbackValue pullback_connection_at(const SelfDualMorphism& f, const GaugeField& a,
                                     const Bispinor& x, double bilin_tol) {
  PullbackValue out;
  const std::array<Vec2, 2> e = {Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  for (int al = 0; al < 2; ++al)
    for (int ad = 0; ad < 2; ++ad)
      out.components[slot(al, ad)] = pullback_component(f, a, x, Spinor(e[al]), CoSpinor(e[ad]));

  const std::array<std::pair<Vec2, Vec2>, 4> mixed = {
      std::pair{Vec2(1.0, 1.0), Vec2(1.0, 0.0)}, std::pair{Vec2(1.0, 0.0), Vec2(1.0, 1.0)},
      std::pair{Vec2(1.0, 1.0), Vec2(1.0, 1.0)}, std::pair{Vec2(1.0, -2.0), Vec2(0.5, 1.0)}};
  for (const auto& [l, lt] : mixed) {
    const MatN sampled = pullback_component(f, a, x, Spinor(l), CoSpinor(lt));
    const MatN predicted = contract(l * lt.transpose(), out.components);
    out.bilinearity_defect = std::max(out.bilinearity_defect, (sampled - predicted).norm());
  }
  if (out.bilinearity_defect > bilin_tol)
    throw Error(ErrorKind::BilinearityViolation,
                "additive defect " + std::to_string(out.bilinearity_defect));
  return out;
}

GaugeField make_pullback_field(const SelfDualMorphism& f, const GaugeField& a, double bilin_tol) {
  GaugeField g;
  g.n = a.n;
  g.name = f.name + "^*" + a.name;
  g.eval = [f, a, bilin_tol](const Bispinor& x) {
    return pullback_connection_at(f, a, x, bilin_tol).components;
  };
  return g;
}

Vec2 chart_coordinate(const AlphaPlane& z, const Bispinor& point) {
  const Bispinor d = point - z.base;
  const int piv = std::abs(z.codir.c(0)) >= std::abs(z.codir.c(1)) ? 0 : 1;
  return d.col(piv) / z.codir.c(piv);
}

PathSpec mapped_segment(const SelfDualMorphism& f, const AlphaPlane& z, const Vec2& mu_from,
                        const Vec2& mu_to) {
  PathSpec p;
  p.sample = [f, z, mu_from, mu_to](double t) {
    const Vec2 mu = mu_from + t * (mu_to - mu_from);
    const Bispinor src = z.chart(mu);
    const Bispinor dir = (mu_to - mu_from) * z.codir.c.transpose();
    return PathSample{f.eval(src, z.codir).x, unvec(jacobian(f, src, z.codir) * vec(dir))};
  };
  return p;
}

MatN mapped_wilson(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                   const Bispinor& from, const Bispinor& to, WilsonOptions opts) {
  return wilson_line(a, mapped_segment(f, z, chart_coordinate(z, from), chart_coordinate(z, to)),
                     opts);
}

namespace {

Bispinor intersect_or_infinity(const AlphaPlane& z, const AlphaPlane& w) {
  try {
    return plane_intersect(z, w);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParallelPlanes)
      throw Error(ErrorKind::AtInfinity, "plane meets the reference plane only at infinity");
    throw;
  }
}

}  // namespace

PatchingData patching_data(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                           const Bispinor& x, WilsonOptions opts) {
  // reference planes with twistor coordinates (0,0,1,0) and (0,0,0,1)
  const AlphaPlane plane_p{Bispinor::Zero(), CoSpinor(1.0, 0.0)};
  const AlphaPlane plane_q{Bispinor::Zero(), CoSpinor(0.0, 1.0)};
  PatchingData d;
  d.p = intersect_or_infinity(z, plane_p);
  d.q = intersect_or_infinity(z, plane_q);
  d.h = mapped_wilson(f, a, z, d.p, x, opts);
  d.h_tilde = mapped_wilson(f, a, z, d.q, x, opts);
  d.g = d.h_tilde * d.h.inverse();
  return d;
}

double path_independence_residual(const SelfDualMorphism& f, const GaugeField& a,
                                  const AlphaPlane& z, const Bispinor& x1, const Bispinor& x2,
                                  WilsonOptions opts) {
  const Vec2 m1 = chart_coordinate(z, x1);
  const Vec2 m2 = chart_coordinate(z, x2);
  const Vec2 via_a(m2(0), m1(1));
  const Vec2 via_b(m1(0), m2(1));
  const MatN wa = wilson_line(a, mapped_segment(f, z, m1, via_a), opts) *
                  wilson_line(a, mapped_segment(f, z, via_a, m2), opts);
  const MatN wb = wilson_line(a, mapped_segment(f, z, m1, via_b), opts) *
                  wilson_line(a, mapped_segment(f, z, via_b, m2), opts);
  return (wa - wb).norm();
}

MatN wilson_route_component(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                            const Bispinor& x, const Spinor& l, WilsonOptions opts) {
  const AlphaPlane plane_p{Bispinor::Zero(), CoSpinor(1.0, 0.0)};
  const Bispinor p = intersect_or_infinity(z, plane_p);
  const Bispinor v = outer(l, z.codir);
  auto h = [&](double eps) { return mapped_wilson(f, a, z, p, x + eps * v, opts); };
  const double e1 = 1e-2, e2 = 5e-3;
  const MatN d1 = (h(e1) - h(-e1)) / (2.0 * e1);
  const MatN d2 = (h(e2) - h(-e2)) / (2.0 * e2);
  const MatN dh = (4.0 * d2 - d1) / 3.0;
  return h(0.0).inverse() * dh;
}

std::vector<Bispinor> sample_region(const Region& region,
                                    const std::function<bool(const Bispinor&)>& reject) {
  std::mt19937_64 rng(region.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Bispinor> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < region.samples) {
    if (++attempts > 100 * region.samples + 1000)
      throw Error(ErrorKind::SingularEvaluation, "region sampling rejected too many points");
    // uniform in the 8-real-dimensional ball
    Eigen::Matrix<double, 8, 1> g;
    for (int k = 0; k < 8; ++k) g(k) = gauss(rng);
    const double r = region.radius * std::pow(unif(rng), 1.0 / 8.0) / g.norm();
    Bispinor d;
    for (int k = 0; k < 4; ++k) d(k / 2, k % 2) = cplx(g(2 * k), g(2 * k + 1)) * r;
    const Bispinor x = region.basepoint + d;
    if (reject && reject(x)) continue;
    out.push_back(x);
  }
  return out;
}

SymmetryReport verify_morphism_symmetry(const SelfDualMorphism& f, const GaugeField& a,
                                        const Region& region, const SymmetryTolerances& tols) {
  SymmetryReport rep;
  const GaugeField pulled = make_pullback_field(f, a, std::numeric_limits<double>::infinity());
  const auto points = sample_region(region, [&](const Bispinor& x) {
    return a.is_singular(x) || a.is_singular(f.eval(x, CoSpinor(1.0, 0.0)).x);
  });
  std::mt19937_64 rng(region.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rnd = [&] { return cplx(gauss(rng), gauss(rng)); };
  double sum_asd = 0.0, sum_bil = 0.0, sum_hol = 0.0;
  int ok = 0;
  for (const Bispinor& x : points) {
    const CoSpinor lt(rnd(), rnd());
    try {
      const double bil = pullback_connection_at(f, a, x, std::numeric_limits<double>::infinity())
                             .bilinearity_defect;
      const double asd = asd_residual(pulled, x);
      // parallelogram in the alpha-plane through x, traversed both ways
      const AlphaPlane z{x, lt};
      const Vec2 d1 = tols.edge * Vec2(1.0, 0.0), d2 = tols.edge * Vec2(0.0, 1.0);
      auto seg = [&](const Vec2& from, const Vec2& to) {
        return wilson_line(pulled, straight_path(z.chart(from), z.chart(to)));
      };
      const Vec2 o = Vec2::Zero();
      const MatN wa = seg(o, d1) * seg(d1, d1 + d2);
      const MatN wb = seg(o, d2) * seg(d2, d1 + d2);
      const double hol = (wa - wb).norm();
      rep.max_asd = std::max(rep.max_asd, asd);
      rep.max_bilinearity = std::max(rep.max_bilinearity, bil);
      rep.max_holonomy = std::max(rep.max_holonomy, hol);
      sum_asd += asd;
      sum_bil += bil;
      sum_hol += hol;
      ++ok;
    } catch (const Error& e) {
      rep.errors.push_back(e.what());
    }
  }
  rep.samples = ok;
  if (ok > 0) {
    rep.mean_asd = sum_asd / ok;
    rep.mean_bilinearity = sum_bil / ok;
    rep.mean_holonomy = sum_hol / ok;
  }
  rep.pass_asd = ok > 0 && rep.max_asd < tols.asd;
  rep.pass_bilinearity = ok > 0 && rep.max_bilinearity < tols.bilinearity;
  rep.pass_holonomy = ok > 0 && rep.max_holonomy < tols.holonomy;
  return rep;
}

}  // namespace causal
