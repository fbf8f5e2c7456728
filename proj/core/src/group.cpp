#include "heis/group.hpp"

#include <cmath>

#include "heis/errors.hpp"
#include "heis/expm.hpp"

#include <Eigen/LU>

namespace heis {

Mat3 LinearField::derivation() const {
  Mat3 d = Mat3::Zero();
  d.topLeftCorner<2, 2>() = A;
  d.bottomLeftCorner<1, 2>() = eta.transpose();
  d(2, 2) = A.trace();
  return d;
}

GroupAutomorphism::GroupAutomorphism(const Mat2& P, const Vec2& eta, double det_tol)
    : P_(P), eta_(eta) {
  if (!(std::abs(P.determinant()) > det_tol)) {
    throw PreconditionError("automorphism requires an invertible linear part (det P = 0)");
  }
}

Mat3 GroupAutomorphism::matrix() const {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = P_;
  m.bottomLeftCorner<1, 2>() = eta_.transpose();
  m(2, 2) = P_.determinant();
  return m;
}

GroupElement GroupAutomorphism::apply(const GroupElement& g) const {
  return {P_ * g.v, eta_.dot(g.v) + g.z * P_.determinant()};
}

GroupElement multiply(const GroupElement& g1, const GroupElement& g2) {
  return {g1.v + g2.v, g1.z + g2.z + 0.5 * twist(g1.v, g2.v)};
}

GroupElement inverse(const GroupElement& g) { return {-g.v, -g.z}; }

GroupElement conjugate(const GroupElement& g1, const GroupElement& g2) {
  return multiply(multiply(g1, g2), inverse(g1));
}

AlgebraElement bracket(const AlgebraElement& b1, const AlgebraElement& b2) {
  return {Vec2::Zero(), twist(b1.zeta, b2.zeta)};
}

AlgebraElement apply_derivation(const LinearField& X, const AlgebraElement& b) {
  return {X.A * b.zeta, X.eta.dot(b.zeta) + X.trace() * b.alpha};
}

Vec3 left_invariant_eval(const AlgebraElement& b, const GroupElement& g) {
  return {b.zeta.x(), b.zeta.y(), b.alpha + 0.5 * twist(g.v, b.zeta)};
}

Vec3 linear_field_eval(const LinearField& X, const GroupElement& g) {
  const Vec2 dv = X.A * g.v;
  return {dv.x(), dv.y(), X.eta.dot(g.v) + g.z * X.trace()};
}

Vec2 lambda_operator(const Mat2& B, const Vec2& eta, double t) {
  // Top-right block of exp([[t B^T, t eta], [0, 0]]) is the integral.
  Mat3 aug = Mat3::Zero();
  aug.topLeftCorner<2, 2>() = t * B.transpose();
  aug.topRightCorner<2, 1>() = t * eta;
  return expm(aug).topRightCorner<2, 1>();
}

namespace {

// Bottom-left row of exp(tD): e^{t tr A} Lambda_t^{A - tr A I}(eta).
Vec2 center_row(const LinearField& X, double t) {
  const double tr = X.trace();
  return std::exp(t * tr) * lambda_operator(X.A - tr * Mat2::Identity(), X.eta, t);
}

}  // namespace

Mat3 exp_tD(const LinearField& X, double t) {
  Mat3 m = Mat3::Zero();
  m.topLeftCorner<2, 2>() = expm(t * X.A);
  m.bottomLeftCorner<1, 2>() = center_row(X, t).transpose();
  m(2, 2) = std::exp(t * X.trace());
  return m;
}

FlowMap flow_map(const LinearField& X, double t) {
  return {expm(t * X.A), center_row(X, t), std::exp(t * X.trace())};
}

GroupElement flow(const LinearField& X, double t, const GroupElement& g) { return flow_map(X, t)(g); }

GroupAutomorphism flow_automorphism(const LinearField& X, double t) {
  return GroupAutomorphism(expm(t * X.A), center_row(X, t), 0.0);
}

}  // namespace heis
