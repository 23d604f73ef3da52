#pragma once

// Algebraic laws of GrassmannPoly on random sparse elements. Each function
// returns the largest defect norm seen.

#include <algorithm>

#include "grassmann_oracle.hpp"

namespace oracle {

struct LawDefects {
  double associativity = 0.0;
  double anticommutativity = 0.0;
  double leibniz = 0.0;
  double nilpotency = 0.0;
  int cases = 0;
};

inline LawDefects grassmann_laws(int gens, int cases, unsigned seed, int order = 1) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> par(0, 1), gen(0, gens - 1), nterms(1, 6);
  LawDefects d;
  for (int k = 0; k < cases; ++k) {
    const int pa = par(g), pb = par(g);
    const auto a = random_element(g, gens, nterms(g), order, pa);
    const auto b = random_element(g, gens, nterms(g), order, pb);
    const auto c = random_element(g, gens, nterms(g), order);
    d.associativity = std::max(d.associativity, ((a * b) * c - a * (b * c)).norm());
    const double sign = (pa * pb) % 2 ? -1.0 : 1.0;
    d.anticommutativity = std::max(d.anticommutativity, (a * b - sign * (b * a)).norm());
    const int gi = gen(g);
    const auto lhs = (a * b).derive(gi);
    const auto rhs = a.derive(gi) * b + (pa ? -1.0 : 1.0) * (a * b.derive(gi));
    d.leibniz = std::max(d.leibniz, (lhs - rhs).norm());
    if (pa == 1) d.nilpotency = std::max(d.nilpotency, (a * a).norm());
    ++d.cases;
  }
  return d;
}

/// Max difference between GrassmannPoly and the dense model for products and
/// left derivatives of random scalar elements.
inline double dense_equivalence(int gens, int cases, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> nterms(1, 8), gen(0, gens - 1);
  double worst = 0.0;
  for (int k = 0; k < cases; ++k) {
    const auto a = random_element(g, gens, nterms(g), 0);
    const auto b = random_element(g, gens, nterms(g), 0);
    worst = std::max(worst, (to_dense(a * b) - to_dense(a) * to_dense(b)).norm());
    worst = std::max(worst, (to_dense(a + b) - to_dense(a) - to_dense(b)).norm());
    const int gi = gen(g);
    worst = std::max(worst, (to_dense(a.derive(gi)) - dense_derivative(a, gi)).norm());
  }
  return worst;
}

}  // namespace oracle
