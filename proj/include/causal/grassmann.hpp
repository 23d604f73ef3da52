#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "causal/xpoly.hpp"

namespace causal {

/// Bit set of Grassmann generators; a monomial is the product of its set bits
/// in ascending order.
using Mask = std::uint32_t;

inline int degree(Mask m) { return __builtin_popcount(m); }

/// Sign of (prod a)(prod b) relative to prod(a | b); zero when they overlap.
int merge_sign(Mask a, Mask b);

/// Polynomial in anticommuting generators whose coefficients are XPoly jets
/// in the body coordinates. All stored coefficients share one order.
class GrassmannPoly {
 public:
  GrassmannPoly() = default;
  GrassmannPoly(int generators, int n, int order);

  static GrassmannPoly constant(int generators, const Eigen::MatrixXcd& m, int order);
  static GrassmannPoly scalar(int generators, cplx s, int n, int order);
  static GrassmannPoly body(int generators, const XPoly& p);
  static GrassmannPoly monomial(int generators, Mask m, const XPoly& p);
  /// The generator theta_g times the identity.
  static GrassmannPoly generator(int generators, int g, int n, int order);
  /// The displacement coordinate dx^mu times the identity.
  static GrassmannPoly coordinate(int generators, int mu, int n, int order);

  int generators() const { return gens_; }
  int n() const { return n_; }
  int order() const { return order_; }
  const std::map<Mask, XPoly>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Accumulates p into the coefficient of m and drops it if it becomes zero.
  void add_term(Mask m, const XPoly& p);
  XPoly coefficient(Mask m) const;

  GrassmannPoly& operator+=(const GrassmannPoly& o);
  GrassmannPoly& operator-=(const GrassmannPoly& o);
  GrassmannPoly& operator*=(cplx s);
  GrassmannPoly operator-() const;
  friend GrassmannPoly operator+(GrassmannPoly a, const GrassmannPoly& b) { return a += b; }
  friend GrassmannPoly operator-(GrassmannPoly a, const GrassmannPoly& b) { return a -= b; }
  friend GrassmannPoly operator*(GrassmannPoly a, cplx s) { return a *= s; }
  friend GrassmannPoly operator*(cplx s, GrassmannPoly a) { return a *= s; }
  friend GrassmannPoly operator*(const GrassmannPoly& a, const GrassmannPoly& b);

  /// Left derivative d/d theta_g.
  GrassmannPoly derive(int g) const;
  /// d/d(dx^mu); lowers the order by one.
  GrassmannPoly derive_x(int mu) const;
  GrassmannPoly truncated(int order) const;
  GrassmannPoly extended(int order) const;
  GrassmannPoly shifted(const Bispinor& shift) const;
  /// Terms of Grassmann degree exactly d.
  GrassmannPoly grade(int d) const;
  /// Keeps only terms whose mask is a subset of `allowed`.
  GrassmannPoly restricted(Mask allowed) const;
  /// Sets the body displacement to zero: each coefficient becomes its value.
  GrassmannPoly at_origin() const;

  /// 0 even, 1 odd, -1 mixed; zero counts as even.
  int parity() const;
  int max_degree() const;
  double norm() const;
  bool is_zero(double tol = 0.0) const;

 private:
  int gens_ = 0;
  int n_ = 1;
  int order_ = 0;
  std::map<Mask, XPoly> terms_;
};

GrassmannPoly gp_add(const GrassmannPoly& a, const GrassmannPoly& b);
GrassmannPoly gp_mul(const GrassmannPoly& a, const GrassmannPoly& b);
GrassmannPoly gp_derive(const GrassmannPoly& a, int g);

/// Graded commutator ab - (-1)^{|a||b|} ba of homogeneous elements.
GrassmannPoly graded_commutator(const GrassmannPoly& a, const GrassmannPoly& b);

/// Substitutes dx -> dx_new (even, rank 1) and theta_g -> odd[g] (rank 1) into
/// f. The results live on the generator set of the substituted values.
GrassmannPoly compose(const GrassmannPoly& f, const std::array<GrassmannPoly, 4>& dx_new,
                      const std::vector<GrassmannPoly>& odd);

}  // namespace causal
