#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "heis/errors.hpp"
#include "heis/group.hpp"
#include "heis/subgroups.hpp"

namespace heis {

/// Threshold below which a coefficient counts as zero.
inline constexpr double kZeroTol = 1e-12;

/// Box [lower, upper] of admissible control values, 0 in its interior.
class ControlBox {
 public:
  ControlBox(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ControlBox interval(double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  bool contains(const Eigen::VectorXd& w, double tol = 1e-12) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

struct ControlPiece {
  double duration = 0.0;
  Eigen::VectorXd value;
};

/// Piecewise-constant control.
class ControlSignal {
 public:
  ControlSignal() = default;
  explicit ControlSignal(std::vector<ControlPiece> pieces);

  static ControlSignal constant(double duration, double value);
  static ControlSignal constant(double duration, const Eigen::VectorXd& value);

  const std::vector<ControlPiece>& pieces() const { return pieces_; }
  int dim() const { return pieces_.empty() ? 0 : static_cast<int>(pieces_.front().value.size()); }
  double total_duration() const;
  double shortest_piece() const;

  /// Throws PreconditionError when a value leaves the box or dimensions differ.
  void check_within(const ControlBox& box) const;

 private:
  std::vector<ControlPiece> pieces_;
};

/// Coefficients (a, b, c) of the field (b, c + a s) induced by B = ((a, b), c).
struct InputField {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// One-input system on R x T:
///   s' = -lambda s + w b,   [t]' = alpha s^2 / 2 + gamma s + w (c + a s).
struct Sigma11Params {
  double lambda = 0.0;
  double b = 0.0;
  double a = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;

  void validate() const;
  InputField input() const { return {a, b, c}; }
};

/// System on R^2 (quotient by R e1 x {0}).
struct Sigma10Params {
  double lambda = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::array<InputField, 3> inputs{};

  void validate() const;
};

/// System on (T x R) x T^p (quotient by Z e1 x Z p). The beta term only
/// survives for p = 0; invariance of Z e1 x Z forces it to vanish for p = 1.
struct Sigma0pParams {
  int p = 0;
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::array<InputField, 3> inputs{};

  void validate() const;
};

/// Induced system on R x T^p with any number of inputs:
///   s' = beta s + sum w_i b_i,
///   t' = (lambda + beta) t + alpha s^2 / 2 + gamma s + sum w_i (c_i + a_i s).
/// Sigma_{1,1} is the case p = 1, beta = -lambda.
struct InducedSystem1p {
  int p = 1;
  double lambda = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<InputField> inputs;

  static InducedSystem1p from(const Sigma11Params& P);
  static InducedSystem1p from(const Sigma10Params& P);

  Vec2 rhs(std::span<const double> w, double s, double t) const;
};

/// Induced system on (T x R) x T^p with any number of inputs.
struct InducedSystem0p {
  int p = 0;
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<InputField> inputs;

  static InducedSystem0p from(const Sigma0pParams& P);

  Vec3 rhs(std::span<const double> w, double u, double s, double t) const;
};

/// Linear control system on H: X + sum w_j B_j.
struct SigmaH {
  LinearField drift;
  std::vector<AlgebraElement> inputs;

  Vec3 rhs(std::span<const double> w, const GroupElement& g) const;
};

Vec3 sigma_H_rhs(const LinearField& X, std::span<const AlgebraElement> Bs, std::span<const double> w,
                 const GroupElement& g);

/// Drift coefficients read off a field leaving R e1 x Z p invariant:
/// lambda = A11, alpha = A12, gamma = eta2, beta = A22 (equal to -lambda for p = 1).
struct InducedDrift {
  double lambda = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
};

InducedDrift induced_drift_1p(int p, const LinearField& X, double tol = kDefaultTol);
InputField induced_invariant_1p(const AlgebraElement& B);

/// Downstairs system for (X, Bs) on the quotient by R e1 x Z p.
InducedSystem1p induced_system_1p(int p, const LinearField& X, std::span<const AlgebraElement> Bs,
                                  double tol = kDefaultTol);
/// Downstairs system for (X, Bs) on the quotient by Z e1 x Z p.
InducedSystem0p induced_system_0p(int p, const LinearField& X, std::span<const AlgebraElement> Bs,
                                  double tol = kDefaultTol);

Vec2 sigma_11_rhs(const Sigma11Params& P, double w, const QuotientPoint1p& q);
Vec2 sigma_10_rhs(const Sigma10Params& P, const Vec3& w, const QuotientPoint1p& q);
Vec3 sigma_0p_rhs(const Sigma0pParams& P, const Vec3& w, const QuotientPoint0p& q);

/// s(tau) for s' = -lambda s + b w from s0 under constant w.
double sigma_R_closed_form(double lambda, double b, double s0, double w, double tau);

/// Sampled solution. `states[i]` is the state at `times[i]`.
template <int N>
struct Trajectory {
  using State = Eigen::Matrix<double, N, 1>;
  std::vector<double> times;
  std::vector<State> states;
  ControlSignal signal;
};

/// Right-hand side plus the mask of coordinates living on R/Z.
template <int N>
struct StateSystem {
  using State = Eigen::Matrix<double, N, 1>;
  // rhs(state, control) -> derivative
  std::function<State(const State&, std::span<const double>)> rhs;
  std::array<bool, N> torus{};
};

template <typename F, typename State>
State rk4_step(const F& f, const State& x, double h) {
  const State k1 = f(x);
  const State k2 = f(State(x + 0.5 * h * k1));
  const State k3 = f(State(x + 0.5 * h * k2));
  const State k4 = f(State(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step classical RK4, piecewise over the constant pieces of `signal`.
/// Each piece is split into ceil(duration / dt) equal steps; torus
/// coordinates are wrapped to [0, 1) after every step.
template <int N>
Trajectory<N> integrate(const StateSystem<N>& sys, const Eigen::Matrix<double, N, 1>& x0,
                        const ControlSignal& signal, double dt) {
  using State = Eigen::Matrix<double, N, 1>;
  if (!(dt > 0.0)) throw PreconditionError("integrate: dt must be positive");
  if (signal.pieces().empty()) throw PreconditionError("integrate: empty control signal");
  if (dt > signal.shortest_piece() * (1.0 + 1e-12)) {
    throw PreconditionError("integrate: dt exceeds the shortest control piece");
  }

  auto wrap = [&](State& x) {
    for (int i = 0; i < N; ++i) {
      if (sys.torus[static_cast<std::size_t>(i)]) x[i] = wrap_unit(x[i]);
    }
  };

  Trajectory<N> traj;
  traj.signal = signal;
  State x = x0;
  wrap(x);
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  for (const auto& piece : signal.pieces()) {
    const std::span<const double> w(piece.value.data(), static_cast<std::size_t>(piece.value.size()));
    const auto f = [&](const State& s) { return sys.rhs(s, w); };
    const auto steps = static_cast<long>(std::ceil(piece.duration / dt - 1e-9));
    const double h = piece.duration / static_cast<double>(steps);
    const double t_start = t;
    for (long k = 1; k <= steps; ++k) {
      x = rk4_step(f, x, h);
      t = t_start + static_cast<double>(k) * h;
      if (!x.allFinite()) {
        throw NumericalError("integrate: state became non-finite at t = " + std::to_string(t), t);
      }
      wrap(x);
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

StateSystem<3> as_state_system(const SigmaH& sys);
StateSystem<2> as_state_system(const InducedSystem1p& sys);
StateSystem<3> as_state_system(const InducedSystem0p& sys);

Trajectory<3> integrate(const SigmaH& sys, const GroupElement& g0, const ControlSignal& signal, double dt);
Trajectory<2> integrate(const Sigma11Params& P, const QuotientPoint1p& q0, const ControlSignal& signal,
                        double dt);
Trajectory<2> integrate(const Sigma10Params& P, const QuotientPoint1p& q0, const ControlSignal& signal,
                        double dt);
Trajectory<3> integrate(const Sigma0pParams& P, const QuotientPoint0p& q0, const ControlSignal& signal,
                        double dt);

/// Integrates the upstairs system and the given downstairs system under the
/// same signal and returns the largest quotient distance between the
/// projected upstairs state and the downstairs state over all sample times.
double conjugation_residual(const SigmaH& upstairs, const InducedSystem1p& downstairs, const GroupElement& g0,
                            const ControlSignal& signal, double dt);
double conjugation_residual(const SigmaH& upstairs, const InducedSystem0p& downstairs, const GroupElement& g0,
                            const ControlSignal& signal, double dt);

/// Residual against the induced system derived from (X, Bs). Requires
/// R e1 x Z p to be invariant under X.
double conjugation_residual(const LinearField& X, std::span<const AlgebraElement> Bs, int p,
                            const GroupElement& g0, const ControlSignal& signal, double dt);

}  // namespace heis
