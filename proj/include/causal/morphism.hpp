#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causal/spinor.hpp"
#include "causal/xpoly.hpp"

namespace causal {

/// Column-major flattening in slot order: vec(v)[2*alpha + alphadot].
Eigen::Vector4cd vec(const Bispinor& v);
Bispinor unvec(const Eigen::Vector4cd& v);

/// A point of the twistor correspondence space C^4 x CP^1.
struct SdPoint {
  Bispinor x;
  CoSpinor lt;
};

/// Map of the correspondence space. `jac`, when present, is d x'/d x at fixed
/// lt as a 4x4 matrix acting on vec().
struct SelfDualMorphism {
  std::string name;
  std::function<SdPoint(const Bispinor&, const CoSpinor&)> eval;
  std::function<Eigen::Matrix4cd(const Bispinor&, const CoSpinor&)> jac;
};

/// Analytic Jacobian if available, otherwise central differences with one
/// Richardson level.
Eigen::Matrix4cd jacobian(const SelfDualMorphism& f, const Bispinor& x, const CoSpinor& lt);

/// Candidate self-dual embedding C^2 -> C^4 with optional analytic Jacobian columns.
struct SurfaceMap {
  std::function<Bispinor(const Vec2&)> map;
  std::function<std::array<Bispinor, 2>(const Vec2&)> jac;

  std::array<Bispinor, 2> columns(const Vec2& t) const;
};

struct Prolongation {
  SurfaceMap base;
  std::function<CoSpinor(const Vec2&)> codir;
};

struct ProlongResult {
  CoSpinor codir;
  double residual = 0.0;  ///< projective distance between the two column factors
};

ProlongResult prolong(const SurfaceMap& chi, const Vec2& t, double tol = 1e-8);

struct ContactReport {
  double max_nullity = 0.0;
  double max_common = 0.0;
  double max_fiber = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int samples = 0;
};

ContactReport check_contact(const SelfDualMorphism& f, const Prolongation& chi,
                            const std::vector<Vec2>& samples);

/// x -> pi_1 f(x, Z.codir) in the chart mu -> Z.base + mu (x) Z.codir.
SurfaceMap contract_plane(const SelfDualMorphism& f, const AlphaPlane& z);

SelfDualMorphism identity_sd();
/// (x, lt) -> (L x Lt^T + b, Lt lt)
SelfDualMorphism lifted_affine_sd(const Mat2& l, const Mat2& lt, const Bispinor& b);
/// (x, lt) -> (x o x, lt), entrywise square.
SelfDualMorphism componentwise_square_sd();
/// (x, lt) -> (w(lt) x o x, lt) with w = 1 + lt0 lt1 / (lt0^2 + lt1^2).
SelfDualMorphism squaring_control_sd();
/// g after f.
SelfDualMorphism compose(const SelfDualMorphism& g, const SelfDualMorphism& f);

/// Three flat charts and two curved charts of alpha-planes.
std::vector<Prolongation> certification_prolongations();
/// 25 deterministic chart parameters in a small polydisc.
std::vector<Vec2> certification_samples(unsigned seed = 7, int count = 25);

ContactReport certify_self_dual(const SelfDualMorphism& f);

// --- causal (N = 0) ---------------------------------------------------------

struct CausalPoint {
  Bispinor x;
  Spinor l;
  CoSpinor lt;
};

/// Map of the ambitwistor correspondence space. `jet`, when present, returns
/// the Taylor polynomial of x' in dx at fixed fiber; `jac` is d x'/d x.
struct CausalMorphism {
  std::string name;
  std::function<CausalPoint(const Bispinor&, const Spinor&, const CoSpinor&)> eval;
  std::function<Eigen::Matrix4cd(const Bispinor&, const Spinor&, const CoSpinor&)> jac;
  std::function<std::array<XPoly, 4>(const Bispinor&, const Spinor&, const CoSpinor&, int)> jet;
};

Eigen::Matrix4cd jacobian(const CausalMorphism& f, const Bispinor& x, const Spinor& l,
                          const CoSpinor& lt);
/// Taylor polynomial of the image point, analytic or by finite differences
/// (orders up to 2).
std::array<XPoly, 4> image_jet(const CausalMorphism& f, const Bispinor& x, const Spinor& l,
                               const CoSpinor& lt, int order);

struct NullCurve {
  std::function<Bispinor(cplx)> point;
  std::function<Bispinor(cplx)> velocity;
};

std::pair<Spinor, CoSpinor> prolong_null_curve(const NullCurve& chi, cplx s, double tol = 1e-8);

ContactReport check_contact_causal(const CausalMorphism& f, const NullCurve& chi,
                                   const std::vector<cplx>& samples);

NullCurve contract_line(const CausalMorphism& f, const NullLine& line);

CausalMorphism identity_causal();
/// (x, l, lt) -> (L x Lt^T + b, L l, Lt lt)
CausalMorphism lifted_affine_causal(const Mat2& l, const Mat2& lt, const Bispinor& b);
/// (x, l, lt) -> (x o x, l, lt)
CausalMorphism squaring_control_causal();
CausalMorphism compose(const CausalMorphism& g, const CausalMorphism& f);

std::vector<NullCurve> certification_curves();
std::vector<cplx> certification_parameters(unsigned seed = 11, int count = 25);
ContactReport certify_causal(const CausalMorphism& f);

}  // namespace causal
