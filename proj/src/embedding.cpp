#include "causal/embedding.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#include <Eigen/Sparse>

#include "causal/error.hpp"

namespace causal {

namespace {

const cplx kI(0.0, 1.0);

GrassmannPoly resized(const GrassmannPoly& p, int order) {
  return order > p.order() ? p.extended(order) : p.truncated(order);
}

int tau_degree(const Exponents& e) { return e[0] + e[1] + e[2] + e[3]; }

std::vector<Exponents> tau_exponents(int k) {
  std::vector<Exponents> out;
  for (const Exponents& e : monomials(k))
    if (tau_degree(e) == k) out.push_back(e);
  return out;
}

/// omega_{ia} = thetabar_i^{ad} h_{a ad}, omegabar^i_{ad} = -theta^{ia} ht_{a ad}.
SuperPhi assemble(int N, const std::array<GrassmannPoly, 4>& h,
                  const std::array<GrassmannPoly, 4>& ht, const std::array<GrassmannPoly, 4>& a) {
  const int g = 4 * N;
  const int n = h[0].n(), order = h[0].order();
  SuperPhi phi = zero_phi(N, n, order);
  for (int i = 0; i < N; ++i)
    for (int al = 0; al < 2; ++al)
      for (int ad = 0; ad < 2; ++ad) {
        const int s = slot(al, ad);
        if (!h[s].empty())
          phi.omega[2 * i + al] +=
              GrassmannPoly::generator(g, theta_bar_index(N, i, ad), 1, order) * h[s];
        if (!ht[s].empty())
          phi.omega_bar[2 * i + ad] -=
              GrassmannPoly::generator(g, theta_index(N, i, al), 1, order) * ht[s];
      }
  phi.a = a;
  return phi;
}

/// Exact-polynomial form of q_{ia} f and qbar^i_{ad} f: x-derivatives are
/// padded back to the working order.
GrassmannPoly q_apply(const GrassmannPoly& f, int N, int i, int al, int order) {
  const int g = 4 * N;
  GrassmannPoly r = f.derive(theta_index(N, i, al));
  for (int ad = 0; ad < 2; ++ad) {
    const GrassmannPoly d = f.derive_x(slot(al, ad)).extended(order);
    if (d.empty()) continue;
    r += kI * (GrassmannPoly::generator(g, theta_bar_index(N, i, ad), 1, order) * d);
  }
  return r;
}

GrassmannPoly qbar_apply(const GrassmannPoly& f, int N, int i, int ad, int order) {
  const int g = 4 * N;
  GrassmannPoly r = f.derive(theta_bar_index(N, i, ad));
  for (int al = 0; al < 2; ++al) {
    const GrassmannPoly d = f.derive_x(slot(al, ad)).extended(order);
    if (d.empty()) continue;
    r += kI * (GrassmannPoly::generator(g, theta_index(N, i, al), 1, order) * d);
  }
  return r;
}

struct Constraints {
  std::vector<GrassmannPoly> c;  // integrability, in a fixed order
  GrassmannPoly gauge;
};

/// Abelian integrability conditions: the symmetrized {Q,Q}, {Qbar,Qbar} and
/// {Q,Qbar} - 2i delta D, plus the gauge condition tau.(h + ht).
Constraints constraints(int N, const std::array<GrassmannPoly, 4>& h,
                        const std::array<GrassmannPoly, 4>& ht,
                        const std::array<GrassmannPoly, 4>& a,
                        const std::array<GrassmannPoly, 4>& tau) {
  const int order = h[0].order();
  const SuperPhi phi = assemble(N, h, ht, a);
  Constraints out;
  std::vector<std::vector<GrassmannPoly>> qw(2 * N), qbw(2 * N);  // q_{ia} omega_{jb}
  for (int ia = 0; ia < 2 * N; ++ia)
    for (int jb = 0; jb < 2 * N; ++jb) {
      qw[ia].push_back(q_apply(phi.omega[jb], N, ia / 2, ia % 2, order));
      qbw[ia].push_back(qbar_apply(phi.omega_bar[jb], N, ia / 2, ia % 2, order));
    }
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j)
      for (int al = 0; al < 2; ++al)
        for (int be = al; be < 2; ++be) {
          const int ia = 2 * i + al, jb = 2 * j + be, ib = 2 * i + be, ja = 2 * j + al;
          out.c.push_back(qw[ia][jb] + qw[jb][ia] + qw[ib][ja] + qw[ja][ib]);
          out.c.push_back(qbw[ia][jb] + qbw[jb][ia] + qbw[ib][ja] + qbw[ja][ib]);
        }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int al = 0; al < 2; ++al)
        for (int ad = 0; ad < 2; ++ad) {
          GrassmannPoly c = q_apply(phi.omega_bar[2 * j + ad], N, i, al, order) +
                            qbar_apply(phi.omega[2 * i + al], N, j, ad, order);
          if (i == j) c -= 2.0 * kI * a[slot(al, ad)];
          out.c.push_back(c);
        }
  out.gauge = GrassmannPoly(4 * N, h[0].n(), order);
  for (int s = 0; s < 4; ++s) out.gauge += tau[s] * (h[s] + ht[s]);
  return out;
}

/// Polynomial (degree <= 2) fit of a potential about the origin by central
/// differences, exact for polynomial inputs.
std::array<XPoly, 4> polynomial_potential(const GaugeField& a, double tol, int& degree_out) {
  const int n = a.n;
  const double h = 0.5;
  auto at = [&](const Bispinor& x) { return a.at(x); };
  auto unit = [](int mu) {
    Bispinor e = Bispinor::Zero();
    e(mu / 2, mu % 2) = 1.0;
    return e;
  };
  std::array<XPoly, 4> p;
  for (auto& q : p) q = XPoly(n, 2);
  const Potential f0 = at(Bispinor::Zero());
  for (int s = 0; s < 4; ++s) p[s][0] = f0[s];
  for (int mu = 0; mu < 4; ++mu) {
    const Potential fp = at(h * unit(mu)), fm = at(-h * unit(mu));
    Exponents e1{0, 0, 0, 0}, e2{0, 0, 0, 0};
    e1[mu] = 1;
    e2[mu] = 2;
    for (int s = 0; s < 4; ++s) {
      p[s].at(e1) = (fp[s] - fm[s]) / (2.0 * h);
      p[s].at(e2) = (fp[s] - 2.0 * f0[s] + fm[s]) / (2.0 * h * h);
    }
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Potential pp = at(h * (unit(mu) + unit(nu))), pm = at(h * (unit(mu) - unit(nu)));
      const Potential mp = at(h * (unit(nu) - unit(mu))), mm = at(-h * (unit(mu) + unit(nu)));
      Exponents e{0, 0, 0, 0};
      e[mu] = 1;
      e[nu] = 1;
      for (int s = 0; s < 4; ++s) p[s].at(e) = (pp[s] - pm[s] - mp[s] + mm[s]) / (4.0 * h * h);
    }
  }
  // verify away from the stencil
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss(0.0, 0.5);
  double scale = 1.0, err = 0.0;
  for (int t = 0; t < 8; ++t) {
    Bispinor x;
    for (int k = 0; k < 4; ++k) x(k / 2, k % 2) = cplx(gauss(rng), gauss(rng));
    const Potential v = at(x);
    for (int s = 0; s < 4; ++s) {
      scale = std::max(scale, v[s].norm());
      err = std::max(err, (v[s] - p[s].evaluate(x)).norm());
    }
  }
  if (err > tol * scale)
    throw Error(ErrorKind::NoSolution, "potential is not a polynomial of degree <= 2");
  degree_out = 0;
  for (const auto& q : p)
    for (int k = 1; k < monomial_count(2); ++k)
      if (q[k].norm() > 1e-12 * scale)
        degree_out = std::max(degree_out, k < monomial_count(1) ? 1 : 2);
  return p;
}

struct Unknown {
  int comp;  // 0 h, 1 ht, 2 a
  int s;     // slot
  Exponents tau;
  int mono;
};

/// Scalar solve, one tau order at a time.
EmbeddedYMData solve_scalar(const std::array<XPoly, 4>& apoly, int deg_a, int N,
                            const EmbeddingOptions& opts) {
  const int g = 4 * N;
  const int P = std::max(deg_a, 1);
  const auto tau = tau_of(N, P);
  std::map<Exponents, GrassmannPoly> tau_cache;
  auto tau_mono = [&](const Exponents& e) -> const GrassmannPoly& {
    auto it = tau_cache.find(e);
    if (it == tau_cache.end()) it = tau_cache.emplace(e, tau_monomial(tau, e)).first;
    return it->second;
  };
  const GrassmannPoly zero(g, 1, P);
  std::array<GrassmannPoly, 4> kh, kht, ka;
  kh.fill(zero);
  kht.fill(zero);
  for (int s = 0; s < 4; ++s) ka[s] = GrassmannPoly::body(g, apoly[s].truncated(P));

  EmbeddedYMData data;
  data.N = N;
  data.n = 1;
  for (int s = 0; s < 4; ++s)
    if (!apoly[s].truncated(P).is_zero()) data.a[s].terms[{0, 0, 0, 0}] = apoly[s].truncated(P);

  auto key = [](size_t c, Mask m, int mono) {
    return (static_cast<std::uint64_t>(c) << 40) | (static_cast<std::uint64_t>(m) << 8) |
           static_cast<std::uint64_t>(mono);
  };
  auto gather = [&](const Constraints& cs, int grade,
                    std::vector<std::pair<std::uint64_t, cplx>>& out) {
    auto take = [&](size_t idx, const GrassmannPoly& p, int d) {
      for (const auto& [m, xp] : p.terms()) {
        if (degree(m) != d) continue;
        for (int k = 0; k < monomial_count(xp.order()); ++k) {
          const cplx v = xp[k](0, 0);
          if (v != cplx(0.0)) out.emplace_back(key(idx, m, k), v);
        }
      }
    };
    for (size_t i = 0; i < cs.c.size(); ++i) take(i, cs.c[i], grade);
    take(cs.c.size(), cs.gauge, grade + 2);
  };

  for (int k = 0; k <= 2 * N; ++k) {
    const int dk = std::max(deg_a - k, 0);
    std::vector<Unknown> unknowns;
    for (const Exponents& e : tau_exponents(k)) {
      if (tau_mono(e).is_zero()) continue;
      for (int comp = 0; comp < 3; ++comp) {
        if (comp < 2 && 2 * k + 1 > 4 * N) continue;
        if (comp == 2 && k == 0) continue;
        for (int s = 0; s < 4; ++s)
          for (int mono = 0; mono < monomial_count(dk); ++mono)
            unknowns.push_back({comp, s, e, mono});
      }
    }
    auto unit_field = [&](const Unknown& u) {
      XPoly xp(1, P);
      xp[u.mono](0, 0) = 1.0;
      return GrassmannPoly::body(g, xp) * tau_mono(u.tau);
    };

    std::vector<std::pair<std::uint64_t, cplx>> rhs_entries;
    gather(constraints(N, kh, kht, ka, tau), 2 * k, rhs_entries);
    std::vector<std::vector<std::pair<std::uint64_t, cplx>>> cols(unknowns.size());
    for (size_t j = 0; j < unknowns.size(); ++j) {
      std::array<GrassmannPoly, 4> h, ht, a;
      h.fill(zero);
      ht.fill(zero);
      a.fill(zero);
      const Unknown& u = unknowns[j];
      (u.comp == 0 ? h : u.comp == 1 ? ht : a)[u.s] = unit_field(u);
      gather(constraints(N, h, ht, a, tau), 2 * k, cols[j]);
    }

    std::unordered_map<std::uint64_t, int> rows;
    auto row_of = [&](std::uint64_t kk) {
      auto it = rows.find(kk);
      if (it != rows.end()) return it->second;
      const int r = static_cast<int>(rows.size());
      rows.emplace(kk, r);
      return r;
    };
    std::vector<Eigen::Triplet<cplx>> trips;
    for (size_t j = 0; j < cols.size(); ++j)
      for (const auto& [kk, v] : cols[j]) trips.emplace_back(row_of(kk), static_cast<int>(j), v);
    for (const auto& [kk, v] : rhs_entries) row_of(kk);
    const int nrows = static_cast<int>(rows.size());
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nrows);
    for (const auto& [kk, v] : rhs_entries) b(rows.at(kk)) -= v;
    if (unknowns.empty() || nrows == 0) {
      if (b.norm() > opts.solve_tol * std::max(1.0, b.norm()))
        throw Error(ErrorKind::NoSolution, "inconsistent at tau order " + std::to_string(k));
      continue;
    }
    Eigen::SparseMatrix<cplx> mat(nrows, static_cast<int>(unknowns.size()));
    mat.setFromTriplets(trips.begin(), trips.end());
    const Eigen::MatrixXcd gram = Eigen::MatrixXcd(mat.adjoint() * mat);
    const Eigen::VectorXcd atb = mat.adjoint() * b;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(gram);
    cod.setThreshold(1e-12);
    const Eigen::VectorXcd sol = cod.solve(atb);
    const double res = (mat * sol - b).norm();
    const double scale = std::max({1.0, b.norm(), sol.norm()});
    if (!(res <= opts.solve_tol * scale))
      throw Error(ErrorKind::NoSolution, "integrability inconsistent at tau order " +
                                             std::to_string(k) + " (residual " +
                                             std::to_string(res) + ")");

    for (size_t j = 0; j < unknowns.size(); ++j) {
      if (std::abs(sol(j)) < 1e-14 * scale) continue;
      const Unknown& u = unknowns[j];
      auto& target = (u.comp == 0 ? kh : u.comp == 1 ? kht : ka)[u.s];
      target += sol(j) * unit_field(u);
      auto& tp = (u.comp == 0 ? data.h : u.comp == 1 ? data.h_tilde : data.a)[u.s].terms;
      auto it = tp.find(u.tau);
      if (it == tp.end()) it = tp.emplace(u.tau, XPoly(1, P)).first;
      it->second[u.mono](0, 0) += sol(j);
    }
  }

  const Constraints fin = constraints(N, kh, kht, ka, tau);
  double worst = fin.gauge.norm();
  for (const auto& c : fin.c) worst = std::max(worst, c.norm());
  if (worst > 1e-8)
    throw Error(ErrorKind::NoSolution, "assembled embedding leaves residual " + std::to_string(worst));
  return data;
}

}  // namespace

GrassmannPoly tau_monomial(const std::array<GrassmannPoly, 4>& tau, const Exponents& e) {
  GrassmannPoly r = GrassmannPoly::scalar(tau[0].generators(), 1.0, 1, tau[0].order());
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < e[s]; ++k) r = r * tau[s];
  return r;
}

GrassmannPoly evaluate(const TauPoly& p, const std::array<GrassmannPoly, 4>& tau,
                       const Bispinor& x0, int order) {
  const int g = tau[0].generators();
  GrassmannPoly r(g, p.n, order);
  for (const auto& [e, xp] : p.terms) {
    const GrassmannPoly coef = resized(GrassmannPoly::body(g, xp.shifted(x0)), order);
    r += coef * resized(tau_monomial(tau, e), order);
  }
  return r;
}

SuperPhi embed_phi(const EmbeddedYMData& data, const Bispinor& x0, int order) {
  const auto tau = tau_of(data.N, order);
  std::array<GrassmannPoly, 4> h, ht, a;
  for (int s = 0; s < 4; ++s) {
    h[s] = evaluate(data.h[s], tau, x0, order);
    ht[s] = evaluate(data.h_tilde[s], tau, x0, order);
    a[s] = evaluate(data.a[s], tau, x0, order);
  }
  SuperPhi phi = assemble(data.N, h, ht, a);
  phi.n = data.n;
  return phi;
}

SuperConnection embed_ym(const EmbeddedYMData& data) {
  SuperConnection c;
  c.N = data.N;
  c.n = data.n;
  c.name = "embedded";
  c.at = [data](const Bispinor& x0, int order) { return embed_phi(data, x0, order); };
  return c;
}

double gauge_condition_residual(const EmbeddedYMData& data) {
  int order = 0;
  for (int s = 0; s < 4; ++s)
    for (const auto* tp : {&data.h[s], &data.h_tilde[s]})
      for (const auto& [e, xp] : tp->terms) order = std::max(order, xp.order());
  const auto tau = tau_of(data.N, order);
  GrassmannPoly r(4 * data.N, data.n, order);
  for (int s = 0; s < 4; ++s) {
    const GrassmannPoly sum = evaluate(data.h[s], tau, Bispinor::Zero(), order) +
                              evaluate(data.h_tilde[s], tau, Bispinor::Zero(), order);
    r += tau[s] * sum;
  }
  return r.norm();
}

EmbeddedYMData solve_embedding(const GaugeField& a, int N, EmbeddingOptions opts) {
  if (N < 1 || 4 * N > 16) throw Error(ErrorKind::IndexOutOfRange, "N out of range");
  int deg = 0;
  const std::array<XPoly, 4> apoly = polynomial_potential(a, opts.fit_tol, deg);
  const int n = a.n;
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t)
      for (int i = 0; i < monomial_count(2); ++i)
        for (int j = 0; j < monomial_count(2); ++j) {
          const Eigen::MatrixXcd c = apoly[s][i] * apoly[t][j] - apoly[t][j] * apoly[s][i];
          if (c.norm() > 1e-12 * std::max(1.0, apoly[s][i].norm() * apoly[t][j].norm()))
            throw Error(ErrorKind::NoSolution, "potential components do not commute");
        }
  if (n == 1) return solve_scalar(apoly, deg, N, opts);

  // commuting input: the conditions are linear, so each matrix entry is independent
  EmbeddedYMData out;
  out.N = N;
  out.n = n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      std::array<XPoly, 4> entry;
      for (int s = 0; s < 4; ++s) {
        entry[s] = XPoly(1, 2);
        for (int k = 0; k < monomial_count(2); ++k) entry[s][k](0, 0) = apoly[s][k](r, c);
      }
      const EmbeddedYMData part = solve_scalar(entry, deg, N, opts);
      auto merge = [&](const TauPoly& src, TauPoly& dst) {
        dst.n = n;
        for (const auto& [e, xp] : src.terms) {
          auto it = dst.terms.find(e);
          if (it == dst.terms.end()) it = dst.terms.emplace(e, XPoly(n, xp.order())).first;
          for (int k = 0; k < monomial_count(xp.order()); ++k) it->second[k](r, c) = xp[k](0, 0);
        }
      };
      for (int s = 0; s < 4; ++s) {
        merge(part.h[s], out.h[s]);
        merge(part.h_tilde[s], out.h_tilde[s]);
        merge(part.a[s], out.a[s]);
      }
    }
  return out;
}

double form_preservation_residual(const SuperCausalMorphism& f, const EmbeddedYMData& data,
                                  const SuperPoint& z,
                                  const std::vector<std::pair<Spinor, CoSpinor>>& fibers,
                                  const Eigen::MatrixXcd& flavor) {
  const int N = data.N, g = 4 * N;
  if (flavor.rows() != N || flavor.cols() != N)
    throw Error(ErrorKind::ShapeMismatch, "flavor rotation must be N x N");
  const Eigen::MatrixXcd rit = flavor.inverse().transpose();
  std::array<GrassmannPoly, 4> dx;
  for (int mu = 0; mu < 4; ++mu) dx[mu] = GrassmannPoly(g, 1, 0);
  std::vector<GrassmannPoly> odd(g, GrassmannPoly(g, 1, 0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < 2; ++k) {
        odd[theta_index(N, i, k)] +=
            flavor(i, j) * GrassmannPoly::generator(g, theta_index(N, j, k), 1, 0);
        odd[theta_bar_index(N, i, k)] +=
            rit(i, j) * GrassmannPoly::generator(g, theta_bar_index(N, j, k), 1, 0);
      }

  const SuperConnection phi = embed_ym(data);
  double worst = 0.0;
  for (const auto& [l, lt] : fibers) {
    SuperNullLine line;
    line.base = z.x;
    line.dir_l = l;
    line.dir_r = lt;
    line.N = N;
    const LineComponents lc = super_pullback_component(f, phi, z, line, 0);
    std::vector<GrassmannPoly> ct, ctb;
    for (int i = 0; i < N; ++i) {
      ct.push_back(compose(lc.t[i], dx, odd));
      ctb.push_back(compose(lc.t_bar[i], dx, odd));
    }
    for (int i = 0; i < N; ++i) {
      GrassmannPoly r1 = lc.t[i], r2 = ctb[i];
      for (int j = 0; j < N; ++j) {
        r1 -= flavor(j, i) * ct[j];
        r2 -= flavor(i, j) * lc.t_bar[j];
      }
      worst = std::max({worst, r1.norm(), r2.norm()});
    }
  }
  return worst;
}

std::vector<std::pair<Spinor, CoSpinor>> fiber_samples(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rnd = [&] { return cplx(gauss(rng), gauss(rng)); };
  std::vector<std::pair<Spinor, CoSpinor>> out;
  for (int k = 0; k < count; ++k) {
    Vec2 l(rnd(), rnd()), lt(rnd(), rnd());
    out.emplace_back(Spinor(Vec2(l / l.norm())), CoSpinor(Vec2(lt / lt.norm())));
  }
  return out;
}

Eigen::MatrixXcd flavor_rotation(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.3);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) += cplx(gauss(rng), gauss(rng));
  return r;
}

}  // namespace causal
