#pragma once

// Dense Jordan-Wigner model of the exterior algebra on k generators:
// theta_g -> c_g = Z x ... x Z x sigma^- x I x ... x I on (C^2)^{x k}.
// The map is a faithful algebra representation, and the left derivative
// d/dtheta_g becomes the graded commutator with c_g^dagger.

#include <random>

#include <Eigen/Dense>

#include "causal/grassmann.hpp"

namespace oracle {

using Dense = Eigen::MatrixXcd;

inline Dense kron(const Dense& a, const Dense& b) {
  Dense r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

inline Dense jw(int g, int k) {
  Dense z = Dense::Zero(2, 2), lower = Dense::Zero(2, 2), id = Dense::Identity(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  lower(1, 0) = 1.0;
  Dense r = Dense::Identity(1, 1);
  for (int j = 0; j < k; ++j) r = kron(r, j < g ? z : (j == g ? lower : id));
  return r;
}

/// Scalar-coefficient element (order-0, rank-1 coefficients) as a dense matrix.
inline Dense to_dense(const causal::GrassmannPoly& p) {
  const int k = p.generators();
  const int dim = 1 << k;
  Dense out = Dense::Zero(dim, dim);
  for (const auto& [mask, c] : p.terms()) {
    Dense m = Dense::Identity(dim, dim);
    for (int g = 0; g < k; ++g)
      if (mask & (1u << g)) m = m * jw(g, k);
    out += c.value()(0, 0) * m;
  }
  return out;
}

inline Dense dense_derivative(const causal::GrassmannPoly& p, int g) {
  const Dense a = jw(g, p.generators()).adjoint();
  Dense out = Dense::Zero(1 << p.generators(), 1 << p.generators());
  for (int d = 0; d <= p.generators(); ++d) {
    const Dense f = to_dense(p.grade(d));
    out += a * f - (d % 2 ? -1.0 : 1.0) * f * a;
  }
  return out;
}

/// Sparse random element with scalar or jet coefficients.
inline causal::GrassmannPoly random_element(std::mt19937_64& g, int gens, int terms, int order,
                                            int parity = -1) {
  std::uniform_int_distribution<causal::Mask> mask(0, (1u << gens) - 1);
  std::normal_distribution<double> n;
  causal::GrassmannPoly p(gens, 1, order);
  for (int t = 0; t < terms; ++t) {
    causal::Mask m = mask(g);
    if (parity >= 0 && causal::degree(m) % 2 != parity) m ^= 1u;
    causal::XPoly c(1, order);
    for (int i = 0; i < causal::monomial_count(order); ++i) c[i](0, 0) = causal::cplx(n(g), n(g));
    p.add_term(m, c);
  }
  return p;
}

}  // namespace oracle
