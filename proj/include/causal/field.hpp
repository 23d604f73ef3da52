#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "causal/spinor.hpp"

namespace causal {

using MatN = Eigen::MatrixXcd;


/// A_{alpha alphadot}(x), one n x n matrix per slot.
using Potential = std::array<MatN, 4>;
/// d[mu][nu] = d/dx^mu A_nu
using PotentialDeriv = std::array<std::array<MatN, 4>, 4>;

/// v^{alpha alphadot} A_{alpha alphadot}
MatN contract(const Bispinor& v, const Potential& a);

struct GaugeField {
  int n = 1;
  std::string name;
  std::function<Potential(const Bispinor&)> eval;
  /// Analytic first derivatives; empty means finite differences are used.
  std::function<PotentialDeriv(const Bispinor&)> deriv;
  /// Points where eval is undefined; empty means nowhere.
  std::function<bool(const Bispinor&)> singular;

  bool is_singular(const Bispinor& x) const { return singular && singular(x); }
  /// eval guarded by the singular predicate and a finiteness check.
  Potential at(const Bispinor& x) const;
};

/// Full curvature F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu].
using FullCurvature = std::array<std::array<MatN, 4>, 4>;

/// F_{a a' b b'} = eps_{ab} Fsd_{a'b'} + eps_{a'b'} Fasd_{ab}.
/// Both blocks are indexed [2*i + j] and symmetrized on return.
struct CurvatureSpinors {
  std::array<MatN, 4> f_asd;
  std::array<MatN, 4> f_sd;
};

struct DiffSteps {
  double h1 = 1e-4;
  double h2 = 5e-5;
};

/// Central differences along each complex coordinate with one Richardson level.
PotentialDeriv fd_derivative(const GaugeField& a, const Bispinor& x, DiffSteps steps = {});
PotentialDeriv derivative(const GaugeField& a, const Bispinor& x, DiffSteps steps = {});

FullCurvature full_curvature(const GaugeField& a, const Bispinor& x, DiffSteps steps = {});
CurvatureSpinors curvature(const GaugeField& a, const Bispinor& x, DiffSteps steps = {});
CurvatureSpinors decompose(const FullCurvature& f);

/// v^mu w^nu F_{mu nu}
MatN curvature_on(const FullCurvature& f, const Bispinor& v, const Bispinor& w);

/// |F_sd| over all indices; zero exactly when A is anti-self-dual at x.
double asd_residual(const GaugeField& a, const Bispinor& x, DiffSteps steps = {});

/// |F(v1, v2)| for v_i = l_i (x) lt, the curvature on one alpha-plane.
double plane_commutator_residual(const GaugeField& a, const Bispinor& x, const Spinor& l1,
                                 const Spinor& l2, const CoSpinor& lt);
/// Same quantity through the spinor decomposition: |l1.eps.l2| |lt lt Fsd|.
double plane_commutator_formula(const GaugeField& a, const Bispinor& x, const Spinor& l1,
                                const Spinor& l2, const CoSpinor& lt);

/// Largest mismatch between difference quotients along h and i*h.
double holomorphy_defect(const GaugeField& a, const Bispinor& x, double h = 1e-5);

struct PathSample {
  Bispinor point;
  Bispinor velocity;
};

struct PathSpec {
  std::function<PathSample(double)> sample;
  int segments = 16;
};

PathSpec straight_path(const Bispinor& from, const Bispinor& to);
PathSpec concatenate(const PathSpec& first, const PathSpec& second);
PathSpec reversed(const PathSpec& path);

struct WilsonOptions {
  double tol = 1e-9;
  int max_steps = 1 << 14;
};

/// Ordered product of midpoint exponentials exp(A(x_mid).dx) with N segments.
/// The leftmost factor sits at gamma(0), so dW/dt = W A.gamma'.
MatN wilson_product(const GaugeField& a, const PathSpec& path, int segments);

/// wilson_product with step doubling; each level is Richardson-extrapolated
/// and the loop stops once successive extrapolations agree within tol.
MatN wilson_line(const GaugeField& a, const PathSpec& path, WilsonOptions opts = {});

// Example catalog.

GaugeField zero_field(int n);
/// Linear potential with curvature Fasd = f (symmetric, entries commuting) and Fsd = 0.
GaugeField make_constant_asd(const std::array<MatN, 4>& f);
/// Linear potential with both curvature blocks prescribed (entries commuting).
GaugeField make_constant_field(const std::array<MatN, 4>& f_asd, const std::array<MatN, 4>& f_sd);
/// Holomorphically continued one-instanton in regular gauge, rank 2.
GaugeField make_instanton(cplx rho, const Bispinor& center);
/// Instanton plus an abelian term with Fsd = g (a non-ASD negative control).
GaugeField make_perturbed_instanton(cplx rho, const Bispinor& center, const Mat2& g);
/// Abelian A_{01} = s x^{00} x^{11}; its curvature has nonzero divergence.
GaugeField make_non_maxwell(cplx strength);

}  // namespace causal
