#pragma once

#include <complex>

#include <Eigen/Dense>

namespace causal {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

/// Default absolute tolerance for comparisons on unit-scale data.
inline constexpr double kDefaultTol = 1e-10;

/// Undotted 2-spinor lambda^alpha.
struct Spinor {
  Vec2 c = Vec2::Zero();
  Spinor() = default;
  Spinor(cplx a, cplx b) : c(a, b) {}
  explicit Spinor(const Vec2& v) : c(v) {}
};

/// Dotted 2-spinor lt^{alphadot}.
struct CoSpinor {
  Vec2 c = Vec2::Zero();
  CoSpinor() = default;
  CoSpinor(cplx a, cplx b) : c(a, b) {}
  explicit CoSpinor(const Vec2& v) : c(v) {}
};

/// x^{alpha alphadot} or v^{alpha alphadot}; row = undotted index, column = dotted index.
using Bispinor = Mat2;

// Spinor metric: eps_{01} = eps^{01} = +1. All raising and lowering goes
// through raise()/lower(), so the convention lives here only.
Eigen::Matrix2d epsilon();
Vec2 raise(const Vec2& lower_components);
Vec2 lower(const Vec2& upper_components);

/// lambda1^a lambda2^b eps_{ab}
cplx eps_contract(const Vec2& a, const Vec2& b);

Bispinor outer(const Spinor& l, const CoSpinor& lt);

/// Splits a null bispinor into lambda (x) lt. The largest-modulus component of
/// lambda is 1; the remaining scale goes into lt.
std::pair<Spinor, CoSpinor> factor_null(const Bispinor& v, double tol = 1e-8);

/// Relative nullity defect |det v| / |v|^2 (0 for the zero matrix).
double nullity_defect(const Bispinor& v);

/// Distance between two projective points: both are scaled so that the
/// component where `a` is largest equals one, then compared.
double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct Twistor {
  Vec2 omega = Vec2::Zero();
  CoSpinor pi;
};

/// omega^alpha = x^{alpha alphadot} lt_{alphadot}, pi = lt.
Twistor incidence(const Bispinor& x, const CoSpinor& lt);
double twistor_distance(const Twistor& a, const Twistor& b);

struct AlphaPlane {
  Bispinor base = Bispinor::Zero();
  CoSpinor codir;

  /// base + mu (x) codir
  Bispinor chart(const Vec2& mu) const;
  /// Norm of (p - base).eps.codir, which vanishes exactly on the plane.
  double membership_defect(const Bispinor& p) const;
  bool contains(const Bispinor& p, double tol = kDefaultTol) const;
};

struct NullLine {
  Bispinor base = Bispinor::Zero();
  Spinor dir_l;
  CoSpinor dir_r;

  Bispinor tangent() const { return outer(dir_l, dir_r); }
  Bispinor point(cplx s) const { return base + s * tangent(); }
};

Bispinor plane_intersect(const AlphaPlane& z, const AlphaPlane& w, double tol = kDefaultTol);

/// Coordinate slot of x^{alpha alphadot} is 2*alpha + alphadot.
constexpr int slot(int alpha, int alphadot) { return 2 * alpha + alphadot; }
Bispinor basis_bispinor(int mu);

/// Complex Frobenius norm helpers.
double norm(const Mat2& m);

}  // namespace causal
