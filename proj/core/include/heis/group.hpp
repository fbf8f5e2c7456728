#pragma once

#include <cmath>

#include <Eigen/Core>

namespace heis {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// A point (v, z) of the Heisenberg group realized as R^2 x R.
struct GroupElement {
  Vec2 v = Vec2::Zero();
  double z = 0.0;

  GroupElement() = default;
  GroupElement(const Vec2& v_, double z_) : v(v_), z(z_) {}
  GroupElement(double x, double y, double z_) : v(x, y), z(z_) {}

  static GroupElement identity() { return {}; }

  double x() const { return v.x(); }
  double y() const { return v.y(); }

  /// Coordinates stacked as the column (x, y, z).
  Vec3 coords() const { return {v.x(), v.y(), z}; }
  static GroupElement from_coords(const Vec3& c) { return {c.x(), c.y(), c.z()}; }

  bool is_finite() const { return v.allFinite() && std::isfinite(z); }
};

/// An element (zeta, alpha) of the Lie algebra, also read as the
/// left-invariant vector field it generates.
struct AlgebraElement {
  Vec2 zeta = Vec2::Zero();
  double alpha = 0.0;

  AlgebraElement() = default;
  AlgebraElement(const Vec2& zeta_, double alpha_) : zeta(zeta_), alpha(alpha_) {}
  AlgebraElement(double a, double b, double c) : zeta(a, b), alpha(c) {}

  Vec3 coords() const { return {zeta.x(), zeta.y(), alpha}; }
};

/// Linear vector field given by the derivation D = [[A, 0], [eta^T, tr A]].
struct LinearField {
  Mat2 A = Mat2::Zero();
  Vec2 eta = Vec2::Zero();

  LinearField() = default;
  LinearField(const Mat2& A_, const Vec2& eta_) : A(A_), eta(eta_) {}

  Mat3 derivation() const;
  double trace() const { return A.trace(); }
};

/// Automorphism (v, z) -> (P v, <eta, v> + z det P). P must be invertible.
class GroupAutomorphism {
 public:
  /// Throws PreconditionError when |det P| is below `det_tol`.
  GroupAutomorphism(const Mat2& P, const Vec2& eta, double det_tol = 1e-12);

  const Mat2& P() const { return P_; }
  const Vec2& eta() const { return eta_; }
  Mat3 matrix() const;

  GroupElement apply(const GroupElement& g) const;

 private:
  Mat2 P_;
  Vec2 eta_;
};

/// Counter-clockwise quarter turn, (x, y) -> (-y, x).
inline Vec2 rotate_quarter(const Vec2& v) { return {-v.y(), v.x()}; }

/// Symplectic pairing <a, theta b>.
inline double twist(const Vec2& a, const Vec2& b) { return a.dot(rotate_quarter(b)); }

GroupElement multiply(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);

/// Conjugation g1 * g2 * g1^-1.
GroupElement conjugate(const GroupElement& g1, const GroupElement& g2);

AlgebraElement bracket(const AlgebraElement& b1, const AlgebraElement& b2);

/// Apply a derivation to an algebra element.
AlgebraElement apply_derivation(const LinearField& X, const AlgebraElement& b);

/// Left-invariant field of `b` evaluated at `g`: (zeta, alpha + 1/2 <v, theta zeta>).
Vec3 left_invariant_eval(const AlgebraElement& b, const GroupElement& g);

/// Linear field evaluated at `g`: (A v, <eta, v> + z tr A).
Vec3 linear_field_eval(const LinearField& X, const GroupElement& g);

/// Integral of exp(s B^T) eta over s in [0, t].
Vec2 lambda_operator(const Mat2& B, const Vec2& eta, double t);

/// exp(tD) assembled from the block formula
/// [[e^{tA}, 0], [(e^{t tr A} Lambda_t^{A - tr A I} eta)^T, e^{t tr A}]].
Mat3 exp_tD(const LinearField& X, double t);

/// Flow of the linear field: phi_t(v, z) = (e^{tA} v, <r_t, v> + z e^{t tr A}).
GroupElement flow(const LinearField& X, double t, const GroupElement& g);

/// The flow at a fixed time with its blocks precomputed, for applying one
/// time slice to many points.
struct FlowMap {
  Mat2 linear;       // e^{tA}
  Vec2 center_row;   // e^{t tr A} Lambda_t^{A - tr A I}(eta)
  double center_scale;  // e^{t tr A}

  GroupElement operator()(const GroupElement& g) const {
    return {linear * g.v, center_row.dot(g.v) + g.z * center_scale};
  }
};

FlowMap flow_map(const LinearField& X, double t);

/// The flow at time t packaged as an automorphism.
GroupAutomorphism flow_automorphism(const LinearField& X, double t);

/// Max-norm distance between coordinate triples.
inline double coord_distance(const GroupElement& a, const GroupElement& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

}  // namespace heis
