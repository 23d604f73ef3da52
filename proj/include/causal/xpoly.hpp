#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "causal/spinor.hpp"

namespace causal {

/// Exponents of (dx^0, dx^1, dx^2, dx^3), slot order 2*alpha + alphadot.
using Exponents = std::array<int, 4>;

/// Monomials of total degree <= order, graded and then lexicographic.
const std::vector<Exponents>& monomials(int order);
int monomial_index(const Exponents& e);
inline int monomial_count(int order) {
  return (order + 1) * (order + 2) * (order + 3) * (order + 4) / 24;
}

/// Matrix-valued polynomial in the four displacement coordinates dx = x - x0,
/// truncated at total degree `order`. `order` is also the precision: terms
/// above it are unknown, so d/dx lowers it by one.
class XPoly {
 public:
  XPoly() = default;
  XPoly(int n, int order);

  static XPoly constant(const Eigen::MatrixXcd& m, int order);
  static XPoly scalar(cplx s, int n, int order);
  /// The coordinate function dx^mu (times the identity).
  static XPoly coordinate(int mu, int n, int order);

  int n() const { return n_; }
  int order() const { return order_; }
  bool empty() const { return coef_.empty(); }

  const Eigen::MatrixXcd& operator[](int idx) const { return coef_[idx]; }
  Eigen::MatrixXcd& operator[](int idx) { return coef_[idx]; }
  const Eigen::MatrixXcd& value() const { return coef_[0]; }
  Eigen::MatrixXcd& at(const Exponents& e) { return coef_[monomial_index(e)]; }

  XPoly& operator+=(const XPoly& o);
  XPoly& operator-=(const XPoly& o);
  XPoly& operator*=(cplx s);
  XPoly operator-() const;
  friend XPoly operator+(XPoly a, const XPoly& b) { return a += b; }
  friend XPoly operator-(XPoly a, const XPoly& b) { return a -= b; }
  friend XPoly operator*(XPoly a, cplx s) { return a *= s; }
  friend XPoly operator*(cplx s, XPoly a) { return a *= s; }
  /// Truncated product; matrix coefficients multiply left to right and a
  /// rank-1 factor acts as a scalar.
  friend XPoly operator*(const XPoly& a, const XPoly& b);

  /// d/d(dx^mu); the result has order - 1.
  XPoly derivative(int mu) const;
  /// Lowers the stored precision.
  XPoly truncated(int order) const;
  /// Raises the stored order by zero padding; only meaningful for exact polynomials.
  XPoly extended(int order) const;
  /// Re-expands around a shifted origin, p(shift + d) as a polynomial in d.
  XPoly shifted(const Bispinor& shift) const;
  Eigen::MatrixXcd evaluate(const Bispinor& dx) const;

  double norm() const;
  bool is_zero(double tol = 0.0) const;

 private:
  int n_ = 0;
  int order_ = -1;
  std::vector<Eigen::MatrixXcd> coef_;
};

}  // namespace causal
