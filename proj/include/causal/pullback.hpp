#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causal/field.hpp"
#include "causal/morphism.hpp"

namespace causal {

/// v.f*A at x for v = l (x) lt: push v through the contraction map of the
/// alpha-plane (x, lt) and contract with A at the image point.
MatN pullback_component(const SelfDualMorphism& f, const GaugeField& a, const Bispinor& x,
                        const Spinor& l, const CoSpinor& lt);

struct PullbackValue {
  Potential components;
  double bilinearity_defect = 0.0;
};

/// Components read off from the four basis samples, then checked against
/// four mixed samples. Throws BilinearityViolation above `bilin_tol`.
PullbackValue pullback_connection_at(const SelfDualMorphism& f, const GaugeField& a,
                                     const Bispinor& x, double bilin_tol = 1e-7);

/// f*A presented as a gauge field (finite-difference derivatives).
GaugeField make_pullback_field(const SelfDualMorphism& f, const GaugeField& a,
                               double bilin_tol = 1e-7);

struct PatchingData {
  MatN h, h_tilde, g;
  Bispinor p, q;
};

/// Chart coordinate mu of a point on Z (point = Z.base + mu (x) Z.codir).
Vec2 chart_coordinate(const AlphaPlane& z, const Bispinor& point);

/// Forward image under f of the straight chart segment mu_from -> mu_to.
PathSpec mapped_segment(const SelfDualMorphism& f, const AlphaPlane& z, const Vec2& mu_from,
                        const Vec2& mu_to);

/// Wilson line of A along the image of the straight chart segment a -> b.
MatN mapped_wilson(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                   const Bispinor& from, const Bispinor& to, WilsonOptions opts = {});

PatchingData patching_data(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                           const Bispinor& x, WilsonOptions opts = {});

/// Difference of the Wilson lines along the two edge orders of the chart
/// parallelogram spanned by x1 -> x2.
double path_independence_residual(const SelfDualMorphism& f, const GaugeField& a,
                                  const AlphaPlane& z, const Bispinor& x1, const Bispinor& x2,
                                  WilsonOptions opts = {});

/// H^{-1} (v.dH) with H = W(p, x), for v = l (x) Z.codir. Used as the second
/// route to v.f*A.
MatN wilson_route_component(const SelfDualMorphism& f, const GaugeField& a, const AlphaPlane& z,
                            const Bispinor& x, const Spinor& l, WilsonOptions opts = {});

struct Region {
  Bispinor basepoint = Bispinor::Zero();
  double radius = 1.0;
  int samples = 100;
  std::uint64_t seed = 42;
};

/// Uniform samples from the complex ball, rejecting points where `reject` holds.
std::vector<Bispinor> sample_region(const Region& region,
                                    const std::function<bool(const Bispinor&)>& reject = {});

struct SymmetryTolerances {
  double asd = 1e-5;
  double bilinearity = 1e-7;
  double holonomy = 1e-6;
  double edge = 0.1;  ///< chart edge length of the holonomy parallelogram
};

struct SymmetryReport {
  double max_asd = 0.0, mean_asd = 0.0;
  double max_bilinearity = 0.0, mean_bilinearity = 0.0;
  double max_holonomy = 0.0, mean_holonomy = 0.0;
  int samples = 0;
  std::vector<std::string> errors;
  bool pass_asd = false, pass_bilinearity = false, pass_holonomy = false;
  bool pass() const { return pass_asd && pass_bilinearity && pass_holonomy && errors.empty(); }
};

SymmetryReport verify_morphism_symmetry(const SelfDualMorphism& f, const GaugeField& a,
                                        const Region& region, const SymmetryTolerances& tols = {});

}  // namespace causal
