#include "heis/induced.hpp"

#include <algorithm>
#include <limits>

namespace heis {

namespace {

bool nonzero(double x) { return std::abs(x) > kZeroTol; }

void check_alpha_gamma(double alpha, double gamma, const char* who) {
  if (nonzero(gamma) && nonzero(alpha)) {
    throw PreconditionError(std::string(who) + ": alpha must be 0 when gamma != 0");
  }
}

void check_p01(int p, const char* who) {
  if (p != 0 && p != 1) throw PreconditionError(std::string(who) + ": p must be 0 or 1");
}

void check_control_dim(std::size_t inputs, std::size_t controls, const char* who) {
  if (inputs != controls) {
    throw PreconditionError(std::string(who) + ": " + std::to_string(controls) + " control values for " +
                            std::to_string(inputs) + " inputs");
  }
}

// sum w_i * field_i for the a, b, c coefficients.
struct InputSums {
  double a = 0.0, b = 0.0, c = 0.0;
};

InputSums weigh(std::span<const InputField> inputs, std::span<const double> w) {
  InputSums sums;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    sums.a += w[i] * inputs[i].a;
    sums.b += w[i] * inputs[i].b;
    sums.c += w[i] * inputs[i].c;
  }
  return sums;
}

std::span<const double> as_span(const Vec3& w) { return {w.data(), 3}; }

}  // namespace

ControlBox::ControlBox(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() < 1 || lower_.size() > 3) {
    throw PreconditionError("control box: bounds must have equal dimension 1..3");
  }
  if (!lower_.allFinite() || !upper_.allFinite()) throw PreconditionError("control box: non-finite bound");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < 0.0 && 0.0 < upper_[i])) {
      throw PreconditionError("control box: need lower < 0 < upper in every component");
    }
  }
}

ControlBox ControlBox::interval(double lo, double hi) {
  return ControlBox(Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi));
}

bool ControlBox::contains(const Eigen::VectorXd& w, double tol) const {
  if (w.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] < lower_[i] - tol || w[i] > upper_[i] + tol) return false;
  }
  return true;
}

ControlSignal::ControlSignal(std::vector<ControlPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PreconditionError("control signal: no pieces");
  const auto m = pieces_.front().value.size();
  for (const auto& piece : pieces_) {
    if (!(piece.duration > 0.0) || !std::isfinite(piece.duration)) {
      throw PreconditionError("control signal: piece durations must be positive");
    }
    if (piece.value.size() != m || m < 1) throw PreconditionError("control signal: inconsistent control dimension");
    if (!piece.value.allFinite()) throw PreconditionError("control signal: non-finite control value");
  }
}

ControlSignal ControlSignal::constant(double duration, double value) {
  return ControlSignal({{duration, Eigen::VectorXd::Constant(1, value)}});
}

ControlSignal ControlSignal::constant(double duration, const Eigen::VectorXd& value) {
  return ControlSignal({{duration, value}});
}

double ControlSignal::total_duration() const {
  double total = 0.0;
  for (const auto& piece : pieces_) total += piece.duration;
  return total;
}

double ControlSignal::shortest_piece() const {
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& piece : pieces_) shortest = std::min(shortest, piece.duration);
  return shortest;
}

void ControlSignal::check_within(const ControlBox& box) const {
  for (const auto& piece : pieces_) {
    if (piece.value.size() != box.dim()) throw PreconditionError("control signal: dimension differs from control box");
    if (!box.contains(piece.value)) throw PreconditionError("control signal: value outside the control box");
  }
}

void Sigma11Params::validate() const { check_alpha_gamma(alpha, gamma, "Sigma11"); }
void Sigma10Params::validate() const { check_alpha_gamma(alpha, gamma, "Sigma10"); }

void Sigma0pParams::validate() const {
  check_p01(p, "Sigma0p");
  check_alpha_gamma(alpha, gamma, "Sigma0p");
  if (p == 1 && nonzero(beta)) {
    throw PreconditionError("Sigma0p: beta must be 0 for p = 1 (Z e1 x Z invariance forces A e2 = alpha e1)");
  }
}

InducedSystem1p InducedSystem1p::from(const Sigma11Params& P) {
  P.validate();
  return {1, P.lambda, -P.lambda, P.alpha, P.gamma, {P.input()}};
}

InducedSystem1p InducedSystem1p::from(const Sigma10Params& P) {
  P.validate();
  return {0, P.lambda, P.beta, P.alpha, P.gamma, {P.inputs.begin(), P.inputs.end()}};
}

Vec2 InducedSystem1p::rhs(std::span<const double> w, double s, double t) const {
  check_control_dim(inputs.size(), w.size(), "InducedSystem1p");
  const InputSums in = weigh(inputs, w);
  // On the torus (p = 1) lambda + beta vanishes, so t never feeds back.
  const double t_coeff = p == 1 ? 0.0 : lambda + beta;
  return {beta * s + in.b, t_coeff * t + 0.5 * alpha * s * s + gamma * s + in.c + in.a * s};
}

InducedSystem0p InducedSystem0p::from(const Sigma0pParams& P) {
  P.validate();
  return {P.p, P.beta, P.alpha, P.gamma, {P.inputs.begin(), P.inputs.end()}};
}

Vec3 InducedSystem0p::rhs(std::span<const double> w, double /*u*/, double s, double t) const {
  check_control_dim(inputs.size(), w.size(), "InducedSystem0p");
  const InputSums in = weigh(inputs, w);
  const double b_eff = p == 0 ? beta : 0.0;
  return {alpha * s + in.a, b_eff * s + in.b, b_eff * t + 0.5 * alpha * s * s + gamma * s + in.c + in.a * s};
}

Vec3 SigmaH::rhs(std::span<const double> w, const GroupElement& g) const {
  return sigma_H_rhs(drift, inputs, w, g);
}

Vec3 sigma_H_rhs(const LinearField& X, std::span<const AlgebraElement> Bs, std::span<const double> w,
                 const GroupElement& g) {
  check_control_dim(Bs.size(), w.size(), "sigma_H_rhs");
  Vec3 out = linear_field_eval(X, g);
  for (std::size_t j = 0; j < Bs.size(); ++j) out += w[j] * left_invariant_eval(Bs[j], g);
  return out;
}

InducedDrift induced_drift_1p(int p, const LinearField& X, double tol) {
  check_p01(p, "induced_drift_1p");
  const InvarianceReport report = invariance_conditions(LineTimesLattice{p}, X, tol);
  if (!report.invariant()) {
    throw PreconditionError("induced_drift_1p: R e1 x Z p is not invariant (violated: " + report.violated.front() +
                            ")");
  }
  return {X.A(0, 0), X.A(1, 1), X.A(0, 1), X.eta.y()};
}

InputField induced_invariant_1p(const AlgebraElement& B) { return {B.zeta.x(), B.zeta.y(), B.alpha}; }

InducedSystem1p induced_system_1p(int p, const LinearField& X, std::span<const AlgebraElement> Bs, double tol) {
  const InducedDrift d = induced_drift_1p(p, X, tol);
  InducedSystem1p sys{p, d.lambda, d.beta, d.alpha, d.gamma, {}};
  for (const auto& B : Bs) sys.inputs.push_back(induced_invariant_1p(B));
  return sys;
}

InducedSystem0p induced_system_0p(int p, const LinearField& X, std::span<const AlgebraElement> Bs, double tol) {
  check_p01(p, "induced_system_0p");
  const InvarianceReport report = invariance_conditions(DiscreteLine{p}, X, tol);
  if (!report.invariant()) {
    throw PreconditionError("induced_system_0p: Z e1 x Z p is not invariant (violated: " + report.violated.front() +
                            ")");
  }
  InducedSystem0p sys{p, p == 0 ? X.A(1, 1) : 0.0, X.A(0, 1), X.eta.y(), {}};
  for (const auto& B : Bs) sys.inputs.push_back(induced_invariant_1p(B));
  return sys;
}

Vec2 sigma_11_rhs(const Sigma11Params& P, double w, const QuotientPoint1p& q) {
  return InducedSystem1p::from(P).rhs(std::span<const double>(&w, 1), q.s, q.t);
}

Vec2 sigma_10_rhs(const Sigma10Params& P, const Vec3& w, const QuotientPoint1p& q) {
  return InducedSystem1p::from(P).rhs(as_span(w), q.s, q.t);
}

Vec3 sigma_0p_rhs(const Sigma0pParams& P, const Vec3& w, const QuotientPoint0p& q) {
  return InducedSystem0p::from(P).rhs(as_span(w), q.u, q.s, q.t);
}

double sigma_R_closed_form(double lambda, double b, double s0, double w, double tau) {
  if (lambda == 0.0) return s0 + b * w * tau;
  // e^{-tau lambda}(s0 - b w / lambda) + b w / lambda, written to stay
  // accurate as lambda -> 0.
  return s0 * std::exp(-tau * lambda) - b * w * std::expm1(-tau * lambda) / lambda;
}

StateSystem<3> as_state_system(const SigmaH& sys) {
  StateSystem<3> out;
  out.rhs = [sys](const Vec3& x, std::span<const double> w) { return sys.rhs(w, GroupElement::from_coords(x)); };
  return out;
}

StateSystem<2> as_state_system(const InducedSystem1p& sys) {
  StateSystem<2> out;
  out.rhs = [sys](const Vec2& x, std::span<const double> w) { return sys.rhs(w, x[0], x[1]); };
  out.torus = {false, sys.p == 1};
  return out;
}

StateSystem<3> as_state_system(const InducedSystem0p& sys) {
  StateSystem<3> out;
  out.rhs = [sys](const Vec3& x, std::span<const double> w) { return sys.rhs(w, x[0], x[1], x[2]); };
  out.torus = {true, false, sys.p == 1};
  return out;
}

Trajectory<3> integrate(const SigmaH& sys, const GroupElement& g0, const ControlSignal& signal, double dt) {
  return integrate(as_state_system(sys), g0.coords(), signal, dt);
}

Trajectory<2> integrate(const Sigma11Params& P, const QuotientPoint1p& q0, const ControlSignal& signal,
                        double dt) {
  return integrate(as_state_system(InducedSystem1p::from(P)), Vec2(q0.s, q0.t), signal, dt);
}

Trajectory<2> integrate(const Sigma10Params& P, const QuotientPoint1p& q0, const ControlSignal& signal,
                        double dt) {
  return integrate(as_state_system(InducedSystem1p::from(P)), Vec2(q0.s, q0.t), signal, dt);
}

Trajectory<3> integrate(const Sigma0pParams& P, const QuotientPoint0p& q0, const ControlSignal& signal,
                        double dt) {
  return integrate(as_state_system(InducedSystem0p::from(P)), Vec3(q0.u, q0.s, q0.t), signal, dt);
}

double conjugation_residual(const SigmaH& upstairs, const InducedSystem1p& downstairs, const GroupElement& g0,
                            const ControlSignal& signal, double dt) {
  const auto up = integrate(upstairs, g0, signal, dt);
  const QuotientPoint1p q0 = project_1p(downstairs.p, g0);
  const auto down = integrate(as_state_system(downstairs), Vec2(q0.s, q0.t), signal, dt);

  double worst = 0.0;
  for (std::size_t i = 0; i < up.states.size(); ++i) {
    const QuotientPoint1p projected = project_1p(downstairs.p, GroupElement::from_coords(up.states[i]));
    const QuotientPoint1p direct{downstairs.p, down.states[i][0], down.states[i][1]};
    worst = std::max(worst, quotient_distance(projected, direct));
  }
  return worst;
}

double conjugation_residual(const SigmaH& upstairs, const InducedSystem0p& downstairs, const GroupElement& g0,
                            const ControlSignal& signal, double dt) {
  const auto up = integrate(upstairs, g0, signal, dt);
  const QuotientPoint0p q0 = project_0p(downstairs.p, g0);
  const auto down = integrate(as_state_system(downstairs), Vec3(q0.u, q0.s, q0.t), signal, dt);

  double worst = 0.0;
  for (std::size_t i = 0; i < up.states.size(); ++i) {
    const QuotientPoint0p projected = project_0p(downstairs.p, GroupElement::from_coords(up.states[i]));
    const QuotientPoint0p direct{downstairs.p, down.states[i][0], down.states[i][1], down.states[i][2]};
    worst = std::max(worst, quotient_distance(projected, direct));
  }
  return worst;
}

double conjugation_residual(const LinearField& X, std::span<const AlgebraElement> Bs, int p,
                            const GroupElement& g0, const ControlSignal& signal, double dt) {
  const InducedSystem1p downstairs = induced_system_1p(p, X, Bs);
  const SigmaH upstairs{X, {Bs.begin(), Bs.end()}};
  return conjugation_residual(upstairs, downstairs, g0, signal, dt);
}

}  // namespace heis
