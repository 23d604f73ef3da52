#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "causal/grassmann.hpp"
#include "causal/morphism.hpp"

namespace causal {

// Superspace C^{4|4N}: theta^{i alpha} is generator 2i + alpha and
// thetabar_i^{alphadot} is generator 2N + 2i + alphadot. Odd coordinates are
// symbolic; jets are taken about a body point.
inline int theta_index(int, int i, int a) { return 2 * i + a; }
inline int theta_bar_index(int n_susy, int i, int ad) { return 2 * n_susy + 2 * i + ad; }

/// Body location of a symbolic superspace point.
struct SuperPoint {
  Bispinor x = Bispinor::Zero();
  int N = 1;
};

/// First-order operator sum_mu a_mu d_mu + sum_k b_k d/dtheta_k
/// + sum_k c_k d/dthetabar_k + m. Derivation coefficients are rank 1.
struct SuperVectorOp {
  int N = 1;
  int n = 1;
  int parity = 0;
  std::array<GrassmannPoly, 4> a;
  std::vector<GrassmannPoly> b;  // index 2i + alpha
  std::vector<GrassmannPoly> c;  // index 2i + alphadot
  GrassmannPoly m;

  SuperVectorOp() = default;
  SuperVectorOp(int n_susy, int rank, int par);

  GrassmannPoly apply(const GrassmannPoly& f) const;
  /// Derivation part only.
  GrassmannPoly derive(const GrassmannPoly& f) const;

  SuperVectorOp& operator+=(const SuperVectorOp& o);
  SuperVectorOp& operator*=(cplx s);
  friend SuperVectorOp operator+(SuperVectorOp x, const SuperVectorOp& y) { return x += y; }
  friend SuperVectorOp operator-(SuperVectorOp x, SuperVectorOp y) { return x += (y *= -1.0); }
  friend SuperVectorOp operator*(cplx s, SuperVectorOp x) { return x *= s; }

  /// Coefficient norm with the body displacement set to zero.
  double norm_at_origin() const;
};

enum class SusyKind { Q, QBar };

/// q_{i alpha} = d/dtheta^{i alpha} + i thetabar_i^{alphadot} d_{alpha alphadot}, or
/// qbar^i_{alphadot} = d/dthetabar_i^{alphadot} + i theta^{i alpha} d_{alpha alphadot}.
SuperVectorOp susy_generator(SusyKind kind, int i, int index, int N, int n = 1, int order = 2);
SuperVectorOp partial_x(int mu, int N, int n = 1, int order = 2);

/// Graded commutator XY - (-1)^{|X||Y|} YX, computed from the coefficients.
SuperVectorOp anticommutator(const SuperVectorOp& x, const SuperVectorOp& y);

/// Superconnection components as jets about a body point.
struct SuperPhi {
  int N = 1;
  int n = 1;
  std::vector<GrassmannPoly> omega;      // omega_{i alpha}, index 2i + alpha
  std::vector<GrassmannPoly> omega_bar;  // omegabar^i_{alphadot}, index 2i + alphadot
  std::array<GrassmannPoly, 4> a;        // A_{alpha alphadot}, slot order
};

SuperPhi zero_phi(int N, int n, int order);
SuperPhi truncated(const SuperPhi& phi, int order);

struct SuperConnection {
  int N = 1;
  int n = 1;
  std::string name;
  std::function<SuperPhi(const Bispinor& x0, int order)> at;
};

SuperConnection zero_connection(int N, int n = 1);
/// Exact polynomial data about the origin, re-expanded at each point.
SuperConnection polynomial_connection(std::string name, const SuperPhi& about_origin);
/// Random odd omega, omegabar and even A with constant and linear terms.
SuperConnection random_connection(int N, int n, unsigned seed, double scale = 1.0);

struct LineOps {
  std::vector<SuperVectorOp> t, t_bar;
  SuperVectorOp d;
};

/// T_i = l^a (q_{ia} + omega_{ia}), Tbar^i = lt^ad (qbar^i_ad + omegabar^i_ad),
/// D = l^a lt^ad (d_{a ad} + A_{a ad}).
LineOps covariant_line_ops(const SuperPhi& phi, const Spinor& l, const CoSpinor& lt);

struct SuperNullLine {
  Bispinor base = Bispinor::Zero();
  Spinor dir_l{1.0, 0.0};
  CoSpinor dir_r{1.0, 0.0};
  int N = 1;
  NullLine body() const { return NullLine{base, dir_l, dir_r}; }
};

/// Max over body samples x = base + s l lt^T of the integrability defects
/// {T_i,T_j}, {Tbar^i,Tbar^j} and {T_i,Tbar^j} - 2i delta D.
double line_integrability_residual(const SuperConnection& phi, const SuperNullLine& line,
                                   const std::vector<cplx>& samples);

/// Coordinates of a super curve or of a mapped superspace, expanded about a
/// body point.
struct SuperCurve {
  int N = 1;
  Bispinor body = Bispinor::Zero();
  std::array<GrassmannPoly, 4> dx;     // x - body
  std::vector<GrassmannPoly> theta;    // index 2i + alpha
  std::vector<GrassmannPoly> theta_bar;
};

/// The identity chart of superspace about x0.
SuperCurve superspace_chart(int N, const Bispinor& x0, int order);
/// A super null line in its parameters sigma = (s, xi^i, xibar_i), written on
/// the sub-superspace (x^0, theta^{i0}, thetabar_i^{0}) about s = s0:
/// x = base + s l lt^T, theta^{ia} = xi^i l^a, thetabar_i^ad = xibar_i lt^ad.
SuperCurve line_chart(const SuperNullLine& line, cplx s0, int order);

/// Components of a pushed vector in the frame (q, qbar, d):
/// Y = a^k q_k + b^k qbar_k + c^mu d_mu at the image point.
struct FrameComponents {
  std::vector<GrassmannPoly> a, b;
  std::array<GrassmannPoly, 4> c;
};

/// Pushforward of `op` through the coordinates `image`.
FrameComponents push_frame(const SuperVectorOp& op, const SuperCurve& image);

struct SuperProlongation {
  Spinor l;
  CoSpinor lt;
  std::vector<std::vector<GrassmannPoly>> m, m_bar;  // [i][j]
  double form_residual = 0.0;
  double mm_residual = 0.0;
};

/// Reads (l, lt) and the frame matrices M, Mbar off the pushforward of
/// (d_s, q_i, qbar^k) along a super curve written in line-chart form.
SuperProlongation super_prolong(const SuperCurve& chi, double tol = 1e-8);

/// Frames acting on the odd coordinates: theta' = V theta, thetabar' = Vt thetabar.
/// `kappa` couples V to theta^{00} thetabar_0^{0} and breaks the frame's
/// independence of the odd coordinates; it is nonzero only in controls.
struct ExtendedCausalMorphism {
  CausalMorphism f;
  std::function<Mat2(const Bispinor&, const Spinor&, const CoSpinor&)> v, vt;
  double kappa = 0.0;
};

struct SuperCausalMorphism {
  std::string name;
  /// Image of a super curve whose fiber is (l, lt).
  std::function<SuperCurve(const SuperCurve&, const Spinor&, const CoSpinor&, int)> map;
  std::function<std::pair<Spinor, CoSpinor>(const Bispinor&, const Spinor&, const CoSpinor&)> fiber;
  ExtendedCausalMorphism data;
};

SuperCausalMorphism extend_causal(const ExtendedCausalMorphism& ext);
ExtendedCausalMorphism constant_frames(const CausalMorphism& f, const Mat2& v, const Mat2& vt,
                                       double kappa = 0.0);

/// ||V v Vt^T - (f on L)_* v|| at the given parameters along L.
double vv_compatibility_residual(const ExtendedCausalMorphism& ext, const NullLine& line,
                                 const std::vector<cplx>& samples);

/// Pulled-back superconnection about x0 for the fiber (l, lt): each frame
/// vector is pushed forward and contracted with phi at the image point.
SuperPhi pullback_phi(const SuperCausalMorphism& f, const SuperConnection& phi,
                      const Bispinor& x0, const Spinor& l, const CoSpinor& lt, int order);
SuperConnection pullback_connection(const SuperCausalMorphism& f, const SuperConnection& phi,
                                    const Spinor& l, const CoSpinor& lt);

/// v . f^*phi for the line directions: l.omega', lt.omegabar', l lt.A'.
struct LineComponents {
  std::vector<GrassmannPoly> t, t_bar;
  GrassmannPoly d;
};
LineComponents super_pullback_component(const SuperCausalMorphism& f, const SuperConnection& phi,
                                        const SuperPoint& z, const SuperNullLine& line,
                                        int order = 1);

/// tau^{a ad} = sum_i theta^{ia} thetabar_i^{ad}, slot order, rank 1.
std::array<GrassmannPoly, 4> tau_of(int N, int order = 0);
/// theta^{i a} omega_{i a} + thetabar_i^{ad} omegabar^i_{ad}.
GrassmannPoly superfield_gauge(const SuperPhi& phi);

struct SuperCertReport {
  double max_vv = 0.0;
  double max_mm = 0.0;
  double max_contact = 0.0;
  int samples = 0;
  std::vector<std::string> errors;
};

std::vector<SuperNullLine> super_certification_lines(int N);
SuperCertReport certify_extended(const ExtendedCausalMorphism& ext, int N);

}  // namespace causal
