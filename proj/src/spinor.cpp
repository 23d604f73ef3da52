#include "causal/spinor.hpp"

#include <cmath>

#include "causal/error.hpp"

namespace causal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotNull: return "NotNull";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ParallelPlanes: return "ParallelPlanes";
    case ErrorKind::AtInfinity: return "AtInfinity";
    case ErrorKind::SingularEvaluation: return "SingularEvaluation";
    case ErrorKind::DerivativeDivergence: return "DerivativeDivergence";
    case ErrorKind::DegenerateSpan: return "DegenerateSpan";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoCommonFactor: return "NoCommonFactor";
    case ErrorKind::BilinearityViolation: return "BilinearityViolation";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorKind::FormViolation: return "FormViolation";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Eigen::Matrix2d epsilon() {
  Eigen::Matrix2d e;
  e << 0, 1, -1, 0;
  return e;
}

Vec2 raise(const Vec2& lo) { return epsilon().cast<cplx>() * lo; }

// lambda_b = eps_{ab} lambda^a
Vec2 lower(const Vec2& up) { return epsilon().transpose().cast<cplx>() * up; }

cplx eps_contract(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

Bispinor outer(const Spinor& l, const CoSpinor& lt) { return l.c * lt.c.transpose(); }

Bispinor basis_bispinor(int mu) {
  Bispinor e = Bispinor::Zero();
  e(mu / 2, mu % 2) = 1.0;
  return e;
}

double norm(const Mat2& m) { return m.norm(); }

double nullity_defect(const Bispinor& v) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) return 0.0;
  return std::abs(v.determinant()) / n2;
}

std::pair<Spinor, CoSpinor> factor_null(const Bispinor& v, double tol) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) throw Error(ErrorKind::ZeroVector, "factor_null of the zero bispinor");
  if (std::abs(v.determinant()) > tol * n2)
    throw Error(ErrorKind::NotNull, "determinant " + std::to_string(std::abs(v.determinant())) +
                                        " exceeds tolerance");
  const int col = v.col(0).squaredNorm() >= v.col(1).squaredNorm() ? 0 : 1;
  const int piv = std::abs(v(0, col)) >= std::abs(v(1, col)) ? 0 : 1;
  Vec2 l = v.col(col) / v(piv, col);
  l(piv) = 1.0;
  Vec2 lt = v.row(piv).transpose();
  return {Spinor(l), CoSpinor(lt)};
}

double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::Index piv = 0;
  a.cwiseAbs().maxCoeff(&piv);
  if (a(piv) == cplx(0.0) || b(piv) == cplx(0.0)) {
    return (a.norm() == 0.0 && b.norm() == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (a / a(piv) - b / b(piv)).norm();
}

Twistor incidence(const Bispinor& x, const CoSpinor& lt) {
  return Twistor{x * lower(lt.c), lt};
}

double twistor_distance(const Twistor& a, const Twistor& b) {
  Eigen::Vector4cd va, vb;
  va << a.omega, a.pi.c;
  vb << b.omega, b.pi.c;
  return projective_distance(va, vb);
}

Bispinor AlphaPlane::chart(const Vec2& mu) const { return base + mu * codir.c.transpose(); }

double AlphaPlane::membership_defect(const Bispinor& p) const {
  return ((p - base) * lower(codir.c)).norm();
}

bool AlphaPlane::contains(const Bispinor& p, double tol) const {
  return membership_defect(p) <= tol * std::max(1.0, p.norm() * codir.c.norm());
}

Bispinor plane_intersect(const AlphaPlane& z, const AlphaPlane& w, double tol) {
  const Vec2& a = z.codir.c;
  const Vec2& b = w.codir.c;
  if (std::abs(eps_contract(a, b)) <= tol * a.norm() * b.norm())
    throw Error(ErrorKind::ParallelPlanes, "alpha-planes share a codirection");
  // unknowns (mu^0, mu^1, nu^0, nu^1); equation row = 2*alpha + alphadot
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd rhs;
  for (int al = 0; al < 2; ++al) {
    for (int ad = 0; ad < 2; ++ad) {
      const int r = 2 * al + ad;
      m(r, al) = a(ad);
      m(r, 2 + al) = -b(ad);
      rhs(r) = w.base(al, ad) - z.base(al, ad);
    }
  }
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(m);
  if (!lu.isInvertible())
    throw Error(ErrorKind::AtInfinity, "incidence system is singular");
  const Eigen::Vector4cd sol = lu.solve(rhs);
  return z.chart(Vec2(sol(0), sol(1)));
}

}  // namespace causal
