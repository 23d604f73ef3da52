#include "causal/xpoly.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "causal/error.hpp"

namespace causal {

namespace {

constexpr int kMaxOrder = 8;

struct Tables {
  std::vector<Exponents> monos;
  std::map<Exponents, int> index;
  std::vector<std::vector<int>> product;                      // -1 when above order
  std::array<std::vector<std::pair<int, int>>, 4> derivative;  // (target, factor), target -1 if none
};

Tables build(int order) {
  Tables t;
  for (int d = 0; d <= order; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b)
        for (int c = d - a - b; c >= 0; --c) t.monos.push_back({a, b, c, d - a - b - c});
  for (size_t i = 0; i < t.monos.size(); ++i) t.index[t.monos[i]] = static_cast<int>(i);
  const size_t m = t.monos.size();
  t.product.assign(m, std::vector<int>(m, -1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      Exponents e;
      int deg = 0;
      for (int k = 0; k < 4; ++k) {
        e[k] = t.monos[i][k] + t.monos[j][k];
        deg += e[k];
      }
      if (deg <= order) t.product[i][j] = t.index.at(e);
    }
  }
  for (int mu = 0; mu < 4; ++mu) {
    for (size_t i = 0; i < m; ++i) {
      Exponents e = t.monos[i];
      if (e[mu] == 0) {
        t.derivative[mu].push_back({-1, 0});
        continue;
      }
      const int f = e[mu];
      e[mu] -= 1;
      t.derivative[mu].push_back({t.index.at(e), f});
    }
  }
  return t;
}

const Tables& tables(int order) {
  static std::array<std::unique_ptr<Tables>, kMaxOrder + 1> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int k = 0; k <= kMaxOrder; ++k) cache[k] = std::make_unique<Tables>(build(k));
  });
  if (order < 0 || order > kMaxOrder)
    throw Error(ErrorKind::IndexOutOfRange, "XPoly order " + std::to_string(order));
  return *cache[order];
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

const std::vector<Exponents>& monomials(int order) { return tables(order).monos; }

int monomial_index(const Exponents& e) {
  return tables(kMaxOrder).index.at(e);
}

XPoly::XPoly(int n, int order) : n_(n), order_(order) {
  if (order >= 0) coef_.assign(monomial_count(order), Eigen::MatrixXcd::Zero(n, n));
}

XPoly XPoly::constant(const Eigen::MatrixXcd& m, int order) {
  XPoly p(static_cast<int>(m.rows()), order);
  p.coef_[0] = m;
  return p;
}

XPoly XPoly::scalar(cplx s, int n, int order) {
  return constant(s * Eigen::MatrixXcd::Identity(n, n), order);
}

XPoly XPoly::coordinate(int mu, int n, int order) {
  XPoly p(n, order);
  if (order >= 1) {
    Exponents e{0, 0, 0, 0};
    e[mu] = 1;
    p.coef_[tables(order).index.at(e)] = Eigen::MatrixXcd::Identity(n, n);
  }
  return p;
}

XPoly& XPoly::operator+=(const XPoly& o) {
  if (o.order_ < 0) return *this;
  if (order_ < 0) return *this = o;
  if (o.n_ != n_) throw Error(ErrorKind::ShapeMismatch, "XPoly rank mismatch");
  if (o.order_ < order_) *this = truncated(o.order_);
  for (size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
  return *this;
}

XPoly& XPoly::operator-=(const XPoly& o) { return *this += -o; }

XPoly& XPoly::operator*=(cplx s) {
  for (auto& c : coef_) c *= s;
  return *this;
}

XPoly XPoly::operator-() const {
  XPoly r = *this;
  r *= -1.0;
  return r;
}

XPoly operator*(const XPoly& a, const XPoly& b) {
  if (a.order_ < 0 || b.order_ < 0) return XPoly();
  if (a.n_ != b.n_ && a.n_ != 1 && b.n_ != 1)
    throw Error(ErrorKind::ShapeMismatch, "XPoly rank mismatch");
  const int order = std::min(a.order_, b.order_);
  const Tables& t = tables(order);
  XPoly r(std::max(a.n_, b.n_), order);
  const size_t m = t.monos.size();
  for (size_t i = 0; i < m; ++i) {
    if (a.coef_[i].isZero(0.0)) continue;
    for (size_t j = 0; j < m; ++j) {
      const int k = t.product[i][j];
      if (k < 0 || b.coef_[j].isZero(0.0)) continue;
      if (a.n_ == 1 && b.n_ == 1)
        r.coef_[k](0, 0) += a.coef_[i](0, 0) * b.coef_[j](0, 0);
      else if (a.n_ == 1)
        r.coef_[k] += a.coef_[i](0, 0) * b.coef_[j];
      else if (b.n_ == 1)
        r.coef_[k] += a.coef_[i] * b.coef_[j](0, 0);
      else
        r.coef_[k].noalias() += a.coef_[i] * b.coef_[j];
    }
  }
  return r;
}

XPoly XPoly::derivative(int mu) const {
  if (order_ <= 0)
    throw Error(ErrorKind::DerivativeUnavailable, "derivative of a zeroth-order jet");
  const Tables& t = tables(order_);
  XPoly r(n_, order_ - 1);
  for (size_t i = 0; i < coef_.size(); ++i) {
    const auto [k, f] = t.derivative[mu][i];
    if (k < 0) continue;
    r.coef_[k] += static_cast<double>(f) * coef_[i];
  }
  return r;
}

XPoly XPoly::truncated(int order) const {
  if (order >= order_) return *this;
  XPoly r(n_, order);
  for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] = coef_[i];
  return r;
}

XPoly XPoly::extended(int order) const {
  if (order <= order_ || order_ < 0) return *this;
  XPoly r(n_, order);
  for (size_t i = 0; i < coef_.size(); ++i) r.coef_[i] = coef_[i];
  return r;
}

XPoly XPoly::shifted(const Bispinor& shift) const {
  if (order_ < 0) return *this;
  const Tables& t = tables(order_);
  XPoly r(n_, order_);
  std::array<cplx, 4> s;
  for (int mu = 0; mu < 4; ++mu) s[mu] = shift(mu / 2, mu % 2);
  for (size_t i = 0; i < coef_.size(); ++i) {
    if (coef_[i].isZero(0.0)) continue;
    const Exponents& e = t.monos[i];
    // prod_mu (s_mu + d_mu)^{e_mu}
    for (int a = 0; a <= e[0]; ++a)
      for (int b = 0; b <= e[1]; ++b)
        for (int c = 0; c <= e[2]; ++c)
          for (int d = 0; d <= e[3]; ++d) {
            const cplx w = binomial(e[0], a) * binomial(e[1], b) * binomial(e[2], c) *
                           binomial(e[3], d) * std::pow(s[0], e[0] - a) *
                           std::pow(s[1], e[1] - b) * std::pow(s[2], e[2] - c) *
                           std::pow(s[3], e[3] - d);
            r.coef_[t.index.at({a, b, c, d})] += w * coef_[i];
          }
  }
  return r;
}

Eigen::MatrixXcd XPoly::evaluate(const Bispinor& dx) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
  if (order_ < 0) return out;
  const Tables& t = tables(order_);
  for (size_t i = 0; i < coef_.size(); ++i) {
    const Exponents& e = t.monos[i];
    cplx w = 1.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int k = 0; k < e[mu]; ++k) w *= dx(mu / 2, mu % 2);
    out += w * coef_[i];
  }
  return out;
}

double XPoly::norm() const {
  double s = 0.0;
  for (const auto& c : coef_) s += c.squaredNorm();
  return std::sqrt(s);
}

bool XPoly::is_zero(double tol) const {
  for (const auto& c : coef_)
    if (c.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace causal
