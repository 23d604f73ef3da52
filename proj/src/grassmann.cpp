#include "causal/grassmann.hpp"

#include <cmath>

#include "causal/error.hpp"

namespace causal {

int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = __builtin_ctz(rest);
    swaps += __builtin_popcount(j + 1 < 32 ? a >> (j + 1) : 0u);
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannPoly::GrassmannPoly(int generators, int n, int order)
    : gens_(generators), n_(n), order_(order) {
  if (generators < 0 || generators > 31)
    throw Error(ErrorKind::IndexOutOfRange, "generator count " + std::to_string(generators));
}

GrassmannPoly GrassmannPoly::constant(int generators, const Eigen::MatrixXcd& m, int order) {
  GrassmannPoly r(generators, static_cast<int>(m.rows()), order);
  r.add_term(0, XPoly::constant(m, order));
  return r;
}

GrassmannPoly GrassmannPoly::scalar(int generators, cplx s, int n, int order) {
  return constant(generators, s * Eigen::MatrixXcd::Identity(n, n), order);
}

GrassmannPoly GrassmannPoly::body(int generators, const XPoly& p) {
  return monomial(generators, 0, p);
}

GrassmannPoly GrassmannPoly::monomial(int generators, Mask m, const XPoly& p) {
  GrassmannPoly r(generators, p.n(), p.order());
  if (m >> generators) throw Error(ErrorKind::IndexOutOfRange, "monomial outside generator set");
  r.add_term(m, p);
  return r;
}

GrassmannPoly GrassmannPoly::generator(int generators, int g, int n, int order) {
  if (g < 0 || g >= generators)
    throw Error(ErrorKind::IndexOutOfRange, "generator " + std::to_string(g));
  return monomial(generators, Mask(1) << g, XPoly::scalar(1.0, n, order));
}

GrassmannPoly GrassmannPoly::coordinate(int generators, int mu, int n, int order) {
  return body(generators, XPoly::coordinate(mu, n, order));
}

void GrassmannPoly::add_term(Mask m, const XPoly& p) {
  if (p.empty()) return;
  if (p.n() != n_) throw Error(ErrorKind::ShapeMismatch, "coefficient rank mismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    XPoly q = p.order() > order_ ? p.truncated(order_) : p;
    if (q.order() < order_) q = q.extended(order_);
    if (!q.is_zero()) terms_.emplace(m, std::move(q));
    return;
  }
  it->second += p.order() > order_ ? p.truncated(order_) : p.extended(order_);
  if (it->second.is_zero()) terms_.erase(it);
}

XPoly GrassmannPoly::coefficient(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? XPoly(n_, order_) : it->second;
}

GrassmannPoly& GrassmannPoly::operator+=(const GrassmannPoly& o) {
  if (gens_ == 0 && terms_.empty()) return *this = o;
  if (o.gens_ == 0 && o.terms_.empty()) return *this;
  if (o.gens_ != gens_ || o.n_ != n_)
    throw Error(ErrorKind::ShapeMismatch, "GrassmannPoly shape mismatch");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (const auto& [m, p] : o.terms_) add_term(m, p);
  return *this;
}

GrassmannPoly& GrassmannPoly::operator-=(const GrassmannPoly& o) { return *this += -o; }

GrassmannPoly& GrassmannPoly::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, p] : terms_) p *= s;
  return *this;
}

GrassmannPoly GrassmannPoly::operator-() const {
  GrassmannPoly r = *this;
  for (auto& [m, p] : r.terms_) p *= -1.0;
  return r;
}

GrassmannPoly operator*(const GrassmannPoly& a, const GrassmannPoly& b) {
  if (a.gens_ != b.gens_)
    throw Error(ErrorKind::ShapeMismatch, "GrassmannPoly generator count mismatch");
  if (a.n_ != b.n_ && a.n_ != 1 && b.n_ != 1)
    throw Error(ErrorKind::ShapeMismatch, "GrassmannPoly rank mismatch");
  GrassmannPoly r(a.gens_, std::max(a.n_, b.n_), std::min(a.order_, b.order_));
  for (const auto& [ma, pa] : a.terms_) {
    for (const auto& [mb, pb] : b.terms_) {
      const int s = merge_sign(ma, mb);
      if (s == 0) continue;
      XPoly prod = pa * pb;
      if (s < 0) prod *= -1.0;
      r.add_term(ma | mb, prod);
    }
  }
  return r;
}

GrassmannPoly GrassmannPoly::derive(int g) const {
  if (g < 0 || g >= gens_)
    throw Error(ErrorKind::IndexOutOfRange, "generator " + std::to_string(g));
  const Mask bit = Mask(1) << g;
  GrassmannPoly r(gens_, n_, order_);
  for (const auto& [m, p] : terms_) {
    if (!(m & bit)) continue;
    XPoly q = p;
    if (__builtin_popcount(m & (bit - 1)) & 1) q *= -1.0;
    r.add_term(m & ~bit, q);
  }
  return r;
}

GrassmannPoly GrassmannPoly::derive_x(int mu) const {
  if (order_ <= 0)
    throw Error(ErrorKind::DerivativeUnavailable, "x-derivative of a zeroth-order jet");
  GrassmannPoly r(gens_, n_, order_ - 1);
  for (const auto& [m, p] : terms_) r.add_term(m, p.derivative(mu));
  return r;
}

GrassmannPoly GrassmannPoly::truncated(int order) const {
  if (order >= order_) return *this;
  GrassmannPoly r(gens_, n_, order);
  for (const auto& [m, p] : terms_) r.add_term(m, p.truncated(order));
  return r;
}

GrassmannPoly GrassmannPoly::extended(int order) const {
  if (order <= order_) return *this;
  GrassmannPoly r(gens_, n_, order);
  for (const auto& [m, p] : terms_) r.add_term(m, p.extended(order));
  return r;
}

GrassmannPoly GrassmannPoly::shifted(const Bispinor& shift) const {
  GrassmannPoly r(gens_, n_, order_);
  for (const auto& [m, p] : terms_) r.add_term(m, p.shifted(shift));
  return r;
}

GrassmannPoly GrassmannPoly::grade(int d) const {
  GrassmannPoly r(gens_, n_, order_);
  for (const auto& [m, p] : terms_)
    if (degree(m) == d) r.terms_.emplace(m, p);
  return r;
}

GrassmannPoly GrassmannPoly::restricted(Mask allowed) const {
  GrassmannPoly r(gens_, n_, order_);
  for (const auto& [m, p] : terms_)
    if ((m & ~allowed) == 0) r.terms_.emplace(m, p);
  return r;
}

GrassmannPoly GrassmannPoly::at_origin() const {
  GrassmannPoly r(gens_, n_, 0);
  for (const auto& [m, p] : terms_) r.add_term(m, p.truncated(0));
  return r;
}

int GrassmannPoly::parity() const {
  int par = -2;
  for (const auto& [m, p] : terms_) {
    const int q = degree(m) & 1;
    if (par == -2) par = q;
    else if (par != q) return -1;
  }
  return par == -2 ? 0 : par;
}

int GrassmannPoly::max_degree() const {
  int d = -1;
  for (const auto& [m, p] : terms_) d = std::max(d, degree(m));
  return d;
}

double GrassmannPoly::norm() const {
  double s = 0.0;
  for (const auto& [m, p] : terms_) {
    const double v = p.norm();
    s += v * v;
  }
  return std::sqrt(s);
}

bool GrassmannPoly::is_zero(double tol) const {
  for (const auto& [m, p] : terms_)
    if (!p.is_zero(tol)) return false;
  return true;
}

GrassmannPoly gp_add(const GrassmannPoly& a, const GrassmannPoly& b) { return a + b; }
GrassmannPoly gp_mul(const GrassmannPoly& a, const GrassmannPoly& b) { return a * b; }
GrassmannPoly gp_derive(const GrassmannPoly& a, int g) { return a.derive(g); }

GrassmannPoly graded_commutator(const GrassmannPoly& a, const GrassmannPoly& b) {
  const int pa = a.parity(), pb = b.parity();
  if (pa < 0 || pb < 0)
    throw Error(ErrorKind::ShapeMismatch, "graded commutator of inhomogeneous elements");
  GrassmannPoly r = a * b;
  if (pa && pb)
    r += b * a;
  else
    r -= b * a;
  return r;
}

GrassmannPoly compose(const GrassmannPoly& f, const std::array<GrassmannPoly, 4>& dx_new,
                      const std::vector<GrassmannPoly>& odd) {
  if (static_cast<int>(odd.size()) != f.generators())
    throw Error(ErrorKind::ShapeMismatch, "substitution needs one value per generator");
  const int gens = odd.empty() ? dx_new[0].generators() : odd[0].generators();
  int order = dx_new[0].order();
  for (const auto& d : dx_new) order = std::min(order, d.order());
  for (const auto& o : odd) order = std::min(order, o.order());
  const int fo = std::min(order, f.order());

  // powers of the substituted displacements
  std::array<std::vector<GrassmannPoly>, 4> pw;
  for (int mu = 0; mu < 4; ++mu) {
    pw[mu].push_back(GrassmannPoly::scalar(gens, 1.0, 1, order));
    for (int k = 1; k <= fo; ++k) pw[mu].push_back(pw[mu].back() * dx_new[mu]);
  }
  std::map<Mask, GrassmannPoly> odd_cache;
  odd_cache.emplace(0, GrassmannPoly::scalar(gens, 1.0, 1, order));
  auto odd_product = [&](auto&& self, Mask m) -> const GrassmannPoly& {
    auto it = odd_cache.find(m);
    if (it != odd_cache.end()) return it->second;
    const int top = 31 - __builtin_clz(m);
    GrassmannPoly v = self(self, m & ~(Mask(1) << top)) * odd[top];
    return odd_cache.emplace(m, std::move(v)).first->second;
  };

  const auto& monos = monomials(fo);
  std::vector<GrassmannPoly> mono_values(monos.size());
  GrassmannPoly r(gens, f.n(), order);
  for (const auto& [m, p] : f.terms()) {
    GrassmannPoly body(gens, f.n(), order);
    for (size_t i = 0; i < monos.size(); ++i) {
      const Eigen::MatrixXcd& c = p[static_cast<int>(i)];
      if (c.isZero(0.0)) continue;
      if (mono_values[i].empty()) {
        const Exponents& e = monos[i];
        GrassmannPoly v = pw[0][e[0]] * pw[1][e[1]];
        v = v * pw[2][e[2]];
        mono_values[i] = v * pw[3][e[3]];
      }
      body += GrassmannPoly::constant(gens, c, order) * mono_values[i];
    }
    r += body * odd_product(odd_product, m);
  }
  return r;
}

}  // namespace causal
