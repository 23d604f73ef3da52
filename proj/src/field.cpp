#include "causal/field.hpp"

#include <cmath>
#include <memory>

#include <unsupported/Eigen/MatrixFunctions>

#include "causal/error.hpp"

namespace causal {

MatN contract(const Bispinor& v, const Potential& a) {
  MatN out = MatN::Zero(a[0].rows(), a[0].cols());
  for (int mu = 0; mu < 4; ++mu) {
    const cplx c = v(mu / 2, mu % 2);
    if (c != cplx(0.0)) out += c * a[mu];
  }
  return out;
}

Potential GaugeField::at(const Bispinor& x) const {
  if (is_singular(x)) throw Error(ErrorKind::SingularEvaluation, name + ": point in singular set");
  Potential p = eval(x);
  for (const auto& m : p) {
    if (!m.allFinite()) throw Error(ErrorKind::SingularEvaluation, name + ": non-finite potential");
  }
  return p;
}

namespace {

PotentialDeriv central(const GaugeField& a, const Bispinor& x, double h) {
  PotentialDeriv d;
  for (int mu = 0; mu < 4; ++mu) {
    const Bispinor e = h * basis_bispinor(mu);
    const Potential plus = a.at(x + e);
    const Potential minus = a.at(x - e);
    for (int nu = 0; nu < 4; ++nu) d[mu][nu] = (plus[nu] - minus[nu]) / (2.0 * h);
  }
  return d;
}

double deriv_norm(const PotentialDeriv& d) {
  double s = 0.0;
  for (const auto& row : d)
    for (const auto& m : row) s += m.squaredNorm();
  return std::sqrt(s);
}

}  // namespace

PotentialDeriv fd_derivative(const GaugeField& a, const Bispinor& x, DiffSteps steps) {
  const PotentialDeriv d1 = central(a, x, steps.h1);
  const PotentialDeriv d2 = central(a, x, steps.h2);
  const double r = (steps.h1 / steps.h2) * (steps.h1 / steps.h2);
  PotentialDeriv out;
  PotentialDeriv diff;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      out[mu][nu] = (r * d2[mu][nu] - d1[mu][nu]) / (r - 1.0);
      diff[mu][nu] = d2[mu][nu] - d1[mu][nu];
    }
  }
  if (deriv_norm(diff) > 1e-3 * std::max(1.0, deriv_norm(out)))
    throw Error(ErrorKind::DerivativeDivergence, a.name + ": Richardson levels disagree");
  return out;
}

PotentialDeriv derivative(const GaugeField& a, const Bispinor& x, DiffSteps steps) {
  if (a.deriv) {
    if (a.is_singular(x)) throw Error(ErrorKind::SingularEvaluation, a.name + ": singular point");
    return a.deriv(x);
  }
  return fd_derivative(a, x, steps);
}

FullCurvature full_curvature(const GaugeField& a, const Bispinor& x, DiffSteps steps) {
  const Potential p = a.at(x);
  const PotentialDeriv d = derivative(a, x, steps);
  FullCurvature f;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      f[mu][nu] = d[mu][nu] - d[nu][mu] + p[mu] * p[nu] - p[nu] * p[mu];
  return f;
}

CurvatureSpinors decompose(const FullCurvature& f) {
  CurvatureSpinors out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.f_sd[2 * i + j] = 0.5 * (f[slot(0, i)][slot(1, j)] - f[slot(1, i)][slot(0, j)]);
      out.f_asd[2 * i + j] = 0.5 * (f[slot(i, 0)][slot(j, 1)] - f[slot(i, 1)][slot(j, 0)]);
    }
  }
  const MatN sd = 0.5 * (out.f_sd[1] + out.f_sd[2]);
  const MatN asd = 0.5 * (out.f_asd[1] + out.f_asd[2]);
  out.f_sd[1] = out.f_sd[2] = sd;
  out.f_asd[1] = out.f_asd[2] = asd;
  return out;
}

CurvatureSpinors curvature(const GaugeField& a, const Bispinor& x, DiffSteps steps) {
  return decompose(full_curvature(a, x, steps));
}

MatN curvature_on(const FullCurvature& f, const Bispinor& v, const Bispinor& w) {
  MatN out = MatN::Zero(f[0][0].rows(), f[0][0].cols());
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) out += v(mu / 2, mu % 2) * w(nu / 2, nu % 2) * f[mu][nu];
  return out;
}

double asd_residual(const GaugeField& a, const Bispinor& x, DiffSteps steps) {
  const CurvatureSpinors c = curvature(a, x, steps);
  double s = 0.0;
  for (const auto& m : c.f_sd) s += m.squaredNorm();
  return std::sqrt(s);
}

namespace {
void require_span(const Spinor& l1, const Spinor& l2) {
  if (std::abs(eps_contract(l1.c, l2.c)) <= kDefaultTol * l1.c.norm() * l2.c.norm())
    throw Error(ErrorKind::DegenerateSpan, "spinors are parallel");
}
}  // namespace

double plane_commutator_residual(const GaugeField& a, const Bispinor& x, const Spinor& l1,
                                 const Spinor& l2, const CoSpinor& lt) {
  require_span(l1, l2);
  const FullCurvature f = full_curvature(a, x);
  return curvature_on(f, outer(l1, lt), outer(l2, lt)).norm();
}

double plane_commutator_formula(const GaugeField& a, const Bispinor& x, const Spinor& l1,
                                const Spinor& l2, const CoSpinor& lt) {
  require_span(l1, l2);
  const CurvatureSpinors c = curvature(a, x);
  MatN acc = MatN::Zero(a.n, a.n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) acc += lt.c(i) * lt.c(j) * c.f_sd[2 * i + j];
  return std::abs(eps_contract(l1.c, l2.c)) * acc.norm();
}

double holomorphy_defect(const GaugeField& a, const Bispinor& x, double h) {
  double worst = 0.0;
  const cplx ih(0.0, h);
  for (int mu = 0; mu < 4; ++mu) {
    const Bispinor e = basis_bispinor(mu);
    const Potential p1 = a.at(x + h * e), m1 = a.at(x - h * e);
    const Potential p2 = a.at(x + ih * e), m2 = a.at(x - ih * e);
    for (int nu = 0; nu < 4; ++nu) {
      const MatN d1 = (p1[nu] - m1[nu]) / (2.0 * h);
      const MatN d2 = (p2[nu] - m2[nu]) / (2.0 * ih);
      worst = std::max(worst, (d1 - d2).norm());
    }
  }
  return worst;
}

PathSpec straight_path(const Bispinor& from, const Bispinor& to) {
  return PathSpec{[from, to](double t) { return PathSample{from + t * (to - from), to - from}; }};
}

PathSpec concatenate(const PathSpec& first, const PathSpec& second) {
  PathSpec out;
  out.segments = 2 * std::max(first.segments, second.segments);
  out.sample = [first, second](double t) {
    if (t <= 0.5) {
      PathSample s = first.sample(2.0 * t);
      s.velocity *= 2.0;
      return s;
    }
    PathSample s = second.sample(2.0 * t - 1.0);
    s.velocity *= 2.0;
    return s;
  };
  return out;
}

PathSpec reversed(const PathSpec& path) {
  PathSpec out;
  out.segments = path.segments;
  out.sample = [path](double t) {
    PathSample s = path.sample(1.0 - t);
    s.velocity = -s.velocity;
    return s;
  };
  return out;
}

MatN wilson_product(const GaugeField& a, const PathSpec& path, int segments) {
  MatN w = MatN::Identity(a.n, a.n);
  Bispinor prev = path.sample(0.0).point;
  for (int k = 0; k < segments; ++k) {
    const double t1 = static_cast<double>(k + 1) / segments;
    const Bispinor next = path.sample(t1).point;
    const Bispinor mid = path.sample((k + 0.5) / segments).point;
    const MatN gen = contract(next - prev, a.at(mid));
    w = w * gen.exp();
    prev = next;
  }
  return w;
}

MatN wilson_line(const GaugeField& a, const PathSpec& path, WilsonOptions opts) {
  int n = std::max(1, path.segments);
  MatN coarse = wilson_product(a, path, n);
  MatN last_extrapolated;
  while (2 * n <= opts.max_steps) {
    n *= 2;
    MatN fine = wilson_product(a, path, n);
    // the midpoint product is symmetric, so its error expands in even powers of the step
    MatN extrapolated = (4.0 * fine - coarse) / 3.0;
    if (last_extrapolated.size() != 0 &&
        (extrapolated - last_extrapolated).norm() < opts.tol * std::max(1.0, extrapolated.norm()))
      return extrapolated;
    last_extrapolated = std::move(extrapolated);
    coarse = std::move(fine);
  }
  throw Error(ErrorKind::NoConvergence, "Wilson line did not converge within " +
                                            std::to_string(opts.max_steps) + " segments");
}

// --- catalog ---------------------------------------------------------------

GaugeField zero_field(int n) {
  GaugeField g;
  g.n = n;
  g.name = "zero";
  g.eval = [n](const Bispinor&) {
    Potential p;
    p.fill(MatN::Zero(n, n));
    return p;
  };
  g.deriv = [n](const Bispinor&) {
    PotentialDeriv d;
    for (auto& row : d) row.fill(MatN::Zero(n, n));
    return d;
  };
  return g;
}

namespace {

void require_commuting(const std::vector<MatN>& ms) {
  for (size_t i = 0; i < ms.size(); ++i)
    for (size_t j = i + 1; j < ms.size(); ++j)
      if ((ms[i] * ms[j] - ms[j] * ms[i]).norm() > kDefaultTol * (1.0 + ms[i].norm() * ms[j].norm()))
        throw Error(ErrorKind::ShapeMismatch, "curvature entries must commute pairwise");
}

}  // namespace

GaugeField make_constant_field(const std::array<MatN, 4>& f_asd, const std::array<MatN, 4>& f_sd) {
  const Eigen::Index n = f_asd[0].rows();
  for (const auto* blk : {&f_asd, &f_sd}) {
    for (const auto& m : *blk)
      if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::ShapeMismatch, "block shape");
    if (((*blk)[1] - (*blk)[2]).norm() > kDefaultTol * (1.0 + (*blk)[1].norm()))
      throw Error(ErrorKind::NonSymmetric, "curvature block is not symmetric");
  }
  require_commuting({f_asd[0], f_asd[1], f_asd[3], f_sd[0], f_sd[1], f_sd[3]});

  // F_{mu nu} = eps_{ab} Fsd_{a'b'} + eps_{a'b'} Fasd_{ab};  A_nu = 1/2 x^mu F_{mu nu}
  const Eigen::Matrix2d eps = epsilon();
  auto full = std::make_shared<FullCurvature>();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const int a = mu / 2, ad = mu % 2, b = nu / 2, bd = nu % 2;
      (*full)[mu][nu] = eps(a, b) * f_sd[2 * ad + bd] + eps(ad, bd) * f_asd[2 * a + b];
    }
  }
  GaugeField g;
  g.n = static_cast<int>(n);
  g.name = "constant";
  g.eval = [full, n](const Bispinor& x) {
    Potential p;
    for (int nu = 0; nu < 4; ++nu) {
      p[nu] = MatN::Zero(n, n);
      for (int mu = 0; mu < 4; ++mu) p[nu] += 0.5 * x(mu / 2, mu % 2) * (*full)[mu][nu];
    }
    return p;
  };
  g.deriv = [full](const Bispinor&) {
    PotentialDeriv d;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) d[mu][nu] = 0.5 * (*full)[mu][nu];
    return d;
  };
  return g;
}

GaugeField make_constant_asd(const std::array<MatN, 4>& f) {
  const Eigen::Index n = f[0].rows();
  std::array<MatN, 4> zero;
  zero.fill(MatN::Zero(n, n));
  GaugeField g = make_constant_field(f, zero);
  g.name = "constant_asd";
  return g;
}

namespace {

// (S_{ab})^g_d = delta^g_a eps_{bd} + delta^g_b eps_{ad}
Mat2 sym_generator(int a, int b) {
  const Eigen::Matrix2d eps = epsilon();
  Mat2 s = Mat2::Zero();
  for (int g = 0; g < 2; ++g)
    for (int d = 0; d < 2; ++d) s(g, d) = (g == a ? eps(b, d) : 0.0) + (g == b ? eps(a, d) : 0.0);
  return s;
}

}  // namespace

GaugeField make_instanton(cplx rho, const Bispinor& center) {
  // A_{a a'} = -1/2 y^{b b'} eps_{b' a'} S_{ab} / (det y + rho^2),  y = x - center.
  // The coefficient -1/2 is the one for which Fsd vanishes identically.
  const cplx rho2 = rho * rho;
  const Eigen::Matrix2d eps = epsilon();
  std::array<std::array<Mat2, 4>, 4> lin;  // lin[mu][nu]: d numerator_nu / d y^mu
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const int b = mu / 2, bd = mu % 2, a = nu / 2, ad = nu % 2;
      lin[mu][nu] = -0.5 * eps(bd, ad) * sym_generator(a, b);
    }
  }
  auto numer = [lin](const Bispinor& y, int nu) {
    Mat2 m = Mat2::Zero();
    for (int mu = 0; mu < 4; ++mu) m += y(mu / 2, mu % 2) * lin[mu][nu];
    return m;
  };
  GaugeField g;
  g.n = 2;
  g.name = "instanton";
  g.singular = [center, rho2](const Bispinor& x) {
    const Bispinor y = x - center;
    return std::abs(y.determinant() + rho2) < 1e-12 * (1.0 + y.squaredNorm() + std::abs(rho2));
  };
  g.eval = [center, rho2, numer](const Bispinor& x) {
    const Bispinor y = x - center;
    const cplx den = y.determinant() + rho2;
    Potential p;
    for (int nu = 0; nu < 4; ++nu) p[nu] = numer(y, nu) / den;
    return p;
  };
  g.deriv = [center, rho2, numer, lin](const Bispinor& x) {
    const Bispinor y = x - center;
    const cplx den = y.determinant() + rho2;
    // d det / d y^mu
    const std::array<cplx, 4> ddet = {y(1, 1), -y(1, 0), -y(0, 1), y(0, 0)};
    PotentialDeriv d;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        d[mu][nu] = lin[mu][nu] / den - numer(y, nu) * (ddet[mu] / (den * den));
    return d;
  };
  return g;
}

GaugeField make_perturbed_instanton(cplx rho, const Bispinor& center, const Mat2& gsd) {
  const GaugeField inst = make_instanton(rho, center);
  std::array<MatN, 4> asd, sd;
  asd.fill(MatN::Zero(1, 1));
  for (int k = 0; k < 4; ++k) sd[k] = MatN::Constant(1, 1, gsd(k / 2, k % 2));
  const GaugeField pert = make_constant_field(asd, sd);
  GaugeField g = inst;
  g.name = "perturbed_instanton";
  g.eval = [inst, pert](const Bispinor& x) {
    Potential p = inst.eval(x);
    const Potential q = pert.eval(x);
    for (int k = 0; k < 4; ++k) p[k] += q[k](0, 0) * MatN::Identity(2, 2);
    return p;
  };
  g.deriv = [inst, pert](const Bispinor& x) {
    PotentialDeriv d = inst.deriv(x);
    const PotentialDeriv e = pert.deriv(x);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) d[mu][nu] += e[mu][nu](0, 0) * MatN::Identity(2, 2);
    return d;
  };
  return g;
}

GaugeField make_non_maxwell(cplx strength) {
  GaugeField g;
  g.n = 1;
  g.name = "non_maxwell";
  g.eval = [strength](const Bispinor& x) {
    Potential p;
    for (auto& m : p) m = MatN::Zero(1, 1);
    p[1](0, 0) = strength * x(0, 0) * x(1, 1);
    return p;
  };
  g.deriv = [strength](const Bispinor& x) {
    PotentialDeriv d;
    for (auto& row : d)
      for (auto& m : row) m = MatN::Zero(1, 1);
    d[0][1](0, 0) = strength * x(1, 1);
    d[3][1](0, 0) = strength * x(0, 0);
    return d;
  };
  return g;
}

}  // namespace causal
