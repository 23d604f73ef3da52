#pragma once

#include <array>
#include <map>

#include "causal/field.hpp"
#include "causal/superspace.hpp"

namespace causal {

/// sum_e tau^e P_e(x): tau exponents in slot order, each P_e an exact
/// polynomial in the absolute coordinates.
struct TauPoly {
  int n = 1;
  std::map<Exponents, XPoly> terms;
  bool empty() const { return terms.empty(); }
};

/// Embedded Yang-Mills data omega_{ia} = thetabar_i^{ad} h_{a ad}(x, tau),
/// omegabar^i_{ad} = -theta^{ia} htilde_{a ad}(x, tau) and A_{a ad}(x, tau).
struct EmbeddedYMData {
  int N = 3;
  int n = 1;
  std::array<TauPoly, 4> h, h_tilde, a;
};

/// Product of powers of the tau components.
GrassmannPoly tau_monomial(const std::array<GrassmannPoly, 4>& tau, const Exponents& e);
/// The tau polynomial as a superfield about x0 with the given jet order.
GrassmannPoly evaluate(const TauPoly& p, const std::array<GrassmannPoly, 4>& tau,
                       const Bispinor& x0, int order);

SuperPhi embed_phi(const EmbeddedYMData& data, const Bispinor& x0, int order);
SuperConnection embed_ym(const EmbeddedYMData& data);

/// Norm of tau^{a ad} (h + htilde)_{a ad} as a polynomial in x and the odd coordinates.
double gauge_condition_residual(const EmbeddedYMData& data);

struct EmbeddingOptions {
  double fit_tol = 1e-9;      // polynomial extraction of A
  double solve_tol = 1e-9;    // relative residual of each order
};

/// Order-by-order solution of the line integrability conditions in tau for an
/// abelian or commuting potential that is polynomial of degree <= 2.
EmbeddedYMData solve_embedding(const GaugeField& a, int N = 3, EmbeddingOptions opts = {});

/// Flavor covariance of the pulled-back line components: z and its image
/// under theta -> R theta, thetabar -> R^{-T} thetabar share x and tau, and the
/// embedded form requires l.omega'_i and lt.omegabar'^i to transform as
/// thetabar_i and theta^i. Max over the fiber samples.
double form_preservation_residual(const SuperCausalMorphism& f, const EmbeddedYMData& data,
                                  const SuperPoint& z,
                                  const std::vector<std::pair<Spinor, CoSpinor>>& fibers,
                                  const Eigen::MatrixXcd& flavor);

/// Deterministic fiber samples for the form check.
std::vector<std::pair<Spinor, CoSpinor>> fiber_samples(unsigned seed, int count);
/// A well-conditioned flavor rotation of size N.
Eigen::MatrixXcd flavor_rotation(int N, unsigned seed);

}  // namespace causal
