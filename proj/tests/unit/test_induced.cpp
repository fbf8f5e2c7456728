#include <doctest.h>

#include <cmath>
#include <vector>

#include "heis/errors.hpp"
#include "heis/induced.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace heis;

namespace {

Mat2 mat(double a11, double a12, double a21, double a22) {
  Mat2 m;
  m << a11, a12, a21, a22;
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double sigma_R_max_error(double lambda, double b, double s0, double w, double tau, double dt) {
  Sigma11Params P;
  P.lambda = lambda;
  P.b = b;
  const auto traj = integrate(P, QuotientPoint1p{1, s0, 0.0}, ControlSignal::constant(tau, w), dt);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double ref = static_cast<double>(oracle::sigma_R(lambda, b, s0, w, traj.times[i]));
    err = std::max(err, std::fabs(traj.states[i][0] - ref));
  }
  return err;
}

// Representative of d modulo 1 closest to zero.
double wrapped_difference(double d) { return d - std::round(d); }

}  // namespace

TEST_CASE("control boxes need zero in the interior") {
  CHECK_NOTHROW(ControlBox::interval(-1, 1));
  CHECK_THROWS_AS(ControlBox::interval(0, 1), PreconditionError);
  CHECK_THROWS_AS(ControlBox::interval(-1, 0), PreconditionError);
  CHECK_THROWS_AS(ControlBox(vec({-1, -1}), vec({1})), PreconditionError);
  CHECK_THROWS_AS(ControlBox(vec({-1, -1, -1, -1}), vec({1, 1, 1, 1})), PreconditionError);
  const ControlBox box(vec({-1, -2}), vec({1, 0.5}));
  CHECK(box.contains(vec({0.9, -2})));
  CHECK_FALSE(box.contains(vec({0.9, 0.6})));
}

TEST_CASE("control signals") {
  CHECK_THROWS_AS(ControlSignal(std::vector<ControlPiece>{}), PreconditionError);
  CHECK_THROWS_AS(ControlSignal({{0.0, vec({1})}}), PreconditionError);
  CHECK_THROWS_AS(ControlSignal({{1.0, vec({1})}, {1.0, vec({1, 2})}}), PreconditionError);
  const ControlSignal s({{0.5, vec({1})}, {0.25, vec({-1})}, {1.0, vec({0})}});
  CHECK(s.total_duration() == doctest::Approx(1.75));
  CHECK(s.shortest_piece() == 0.25);
  CHECK_NOTHROW(s.check_within(ControlBox::interval(-1, 1)));
  CHECK_THROWS_AS(s.check_within(ControlBox::interval(-0.5, 1)), PreconditionError);
}

TEST_CASE("parameter constraints") {
  Sigma11Params P;
  P.alpha = 1;
  P.gamma = 1;
  CHECK_THROWS_AS(P.validate(), PreconditionError);
  P.alpha = 0;
  CHECK_NOTHROW(P.validate());

  Sigma0pParams Q;
  Q.p = 1;
  Q.beta = 1;
  CHECK_THROWS_AS(Q.validate(), PreconditionError);
  Q.p = 0;
  CHECK_NOTHROW(Q.validate());
  Q.p = 2;
  CHECK_THROWS_AS(Q.validate(), PreconditionError);
}

TEST_CASE("upstairs right-hand side") {
  gen::Gen g(201);
  for (int i = 0; i < 20; ++i) {
    const auto X = g.field(2.0);
    const auto x = g.group(3.0);
    const std::vector<AlgebraElement> Bs = {g.algebra(1.0), g.algebra(1.0)};
    const double w0[2] = {0.0, 0.0};
    CHECK(sigma_H_rhs(X, Bs, w0, x) == linear_field_eval(X, x));

    // Affine in the control: the input directions add up one per input.
    const double w[2] = {g.uniform(-1, 1), g.uniform(-1, 1)};
    const Vec3 expected =
        linear_field_eval(X, x) + w[0] * left_invariant_eval(Bs[0], x) + w[1] * left_invariant_eval(Bs[1], x);
    CHECK((sigma_H_rhs(X, Bs, w, x) - expected).cwiseAbs().maxCoeff() < 1e-12);
    const double w2[2] = {2 * w[0], 2 * w[1]};
    const Vec3 doubled = 2 * sigma_H_rhs(X, Bs, w, x) - linear_field_eval(X, x);
    CHECK((sigma_H_rhs(X, Bs, w2, x) - doubled).cwiseAbs().maxCoeff() < 1e-12);
  }
  const AlgebraElement e1(1, 0, 0);
  const double one[1] = {1.0};
  CHECK(sigma_H_rhs({}, std::span<const AlgebraElement>(&e1, 1), one, {0, 2, 0}) == Vec3(1, 0, 1));
}

TEST_CASE("drift read-off") {
  const auto d1 = induced_drift_1p(1, {mat(2, 0, 0, -2), {0, 0}});
  CHECK(d1.lambda == 2);
  CHECK(d1.alpha == 0);
  CHECK(d1.gamma == 0);
  CHECK(d1.beta == -2);
  const auto d2 = induced_drift_1p(1, {Mat2::Zero(), {0, 3}});
  CHECK(d2.lambda == 0);
  CHECK(d2.alpha == 0);
  CHECK(d2.gamma == 3);
  const auto d3 = induced_drift_1p(0, {mat(1, 1, 0, 2), {0, 0}});
  CHECK(d3.lambda == 1);
  CHECK(d3.beta == 2);
  CHECK(d3.alpha == 1);
  CHECK(d3.gamma == 0);
  CHECK_THROWS_AS(induced_drift_1p(1, {Mat2::Identity(), {0, 0}}), PreconditionError);
}

TEST_CASE("drift read-off round-trips through the normal form") {
  gen::Gen g(202);
  for (int i = 0; i < 100; ++i) {
    const int p = g.integer(0, 1);
    const auto X = g.line_lattice_field(p, 3.0);
    const auto d = induced_drift_1p(p, X);
    CHECK(d.lambda == X.A(0, 0));
    CHECK(d.alpha == X.A(0, 1));
    CHECK(d.beta == X.A(1, 1));
    CHECK(d.gamma == X.eta.y());
  }
}

TEST_CASE("input read-off") {
  auto check = [](const AlgebraElement& B, double a, double b, double c) {
    const auto f = induced_invariant_1p(B);
    CHECK(f.a == a);
    CHECK(f.b == b);
    CHECK(f.c == c);
  };
  check({1, 0, 0}, 1, 0, 0);
  check({0, 1, 0}, 0, 1, 0);
  check({0, 0, 1}, 0, 0, 1);
  check({0.5, -2, 3}, 0.5, -2, 3);
}

TEST_CASE("one-input system on the cylinder") {
  Sigma11Params P;
  P.lambda = 1;
  P.b = 1;
  CHECK(sigma_11_rhs(P, 0.0, {1, 2, 0}) == Vec2(-2, 0));
  Sigma11Params Q;
  Q.b = 1;
  Q.c = 1;
  CHECK(sigma_11_rhs(Q, 0.5, {1, 0, 0}) == Vec2(0.5, 0.5));

  gen::Gen g(203);
  for (int i = 0; i < 50; ++i) {
    const auto R = g.sigma11(2.0);
    CHECK(sigma_11_rhs(R, 0.0, {1, 0.0, g.uniform(0, 1)}).norm() == 0.0);
    const double s = g.uniform(-3, 3);
    const double w = g.uniform(-1, 1);
    CHECK(sigma_11_rhs(R, w, {1, s, 0.1})[0] == sigma_11_rhs(R, w, {1, s, 0.9})[0]);
    const Vec2 got = sigma_11_rhs(R, w, {1, s, 0.3});
    CHECK(got[0] == doctest::Approx(-R.lambda * s + w * R.b));
    CHECK(got[1] == doctest::Approx(0.5 * R.alpha * s * s + R.gamma * s + w * (R.c + R.a * s)));
  }
}

TEST_CASE("three-input system on the plane") {
  Sigma10Params P;
  CHECK(sigma_10_rhs(P, Vec3(1, -1, 0.5), {0, 0.3, 0.4}).norm() == 0.0);
  P.beta = 1;
  P.lambda = 1;
  P.inputs[0].b = 1;
  CHECK(sigma_10_rhs(P, Vec3(1, 0, 0), {0, 1, 1}) == Vec2(2, 2));

  gen::Gen g(204);
  for (int i = 0; i < 20; ++i) {
    Sigma10Params R;
    R.lambda = g.uniform(-1, 1);
    R.beta = g.uniform(-1, 1);
    R.alpha = g.uniform(-1, 1);
    for (auto& f : R.inputs) f = {g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)};
    const double s = g.uniform(-2, 2), t = g.uniform(-2, 2);
    const Vec2 drift(R.beta * s, (R.lambda + R.beta) * t + 0.5 * R.alpha * s * s);
    CHECK((sigma_10_rhs(R, Vec3::Zero(), {0, s, t}) - drift).norm() < 1e-14);
  }
}

TEST_CASE("system on the torus bundle") {
  Sigma0pParams P;
  CHECK(sigma_0p_rhs(P, Vec3(1, 1, 1), {0, 0.2, 1, 0.3}).norm() == 0.0);
  P.beta = 1;
  CHECK(sigma_0p_rhs(P, Vec3::Zero(), {0, 0.7, 2, 0.5}) == Vec3(0, 2, 0.5));
  Sigma0pParams Q;
  Q.p = 1;
  Q.inputs[0].a = 1;
  CHECK(sigma_0p_rhs(Q, Vec3(1, 0, 0), {1, 0, 3, 0}) == Vec3(1, 0, 3));
}

TEST_CASE("closed form of the scalar part") {
  CHECK(sigma_R_closed_form(1.3, 0.7, 0.4, 0.2, 0.0) == 0.4);
  CHECK(sigma_R_closed_form(1, 1, 0, 1, 50.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_R_closed_form(0, 2, 1, 0.5, 3) == 4.0);
  gen::Gen g(205);
  for (int i = 0; i < 100; ++i) {
    const double lambda = g.uniform(-2, 2), b = g.uniform(-2, 2), s0 = g.uniform(-3, 3), w = g.uniform(-1, 1),
                 tau = g.uniform(0, 5);
    CHECK(sigma_R_closed_form(lambda, b, s0, w, tau) ==
          doctest::Approx(static_cast<double>(oracle::sigma_R(lambda, b, s0, w, tau))).epsilon(1e-12));
  }
}

TEST_CASE("fixed points of the scalar part") {
  gen::Gen g(206);
  for (int i = 0; i < 100; ++i) {
    Sigma11Params P;
    P.lambda = g.uniform(0.1, 2) * (g.coin() ? 1 : -1);
    P.b = g.uniform(-2, 2);
    const double w = g.uniform(-1, 1);
    const double fixed = P.b * w / P.lambda;
    CHECK(std::fabs(sigma_11_rhs(P, w, {1, fixed, 0})[0]) < 1e-14);
  }
}

TEST_CASE("integration of a zero system is constant") {
  const auto traj = integrate(Sigma0pParams{}, QuotientPoint0p{0, 0.25, -1.5, 3.0}, ControlSignal::constant(1.0, Vec3(1, -1, 0.5)), 0.01);
  for (const auto& x : traj.states) CHECK(x == Vec3(0.25, -1.5, 3.0));
  CHECK(traj.times.back() == doctest::Approx(1.0));
}

TEST_CASE("RK4 against the closed form") {
  CHECK(sigma_R_max_error(1.0, 1.0, 0.5, 1.0, 1.0, 1e-3) <= 1e-8);
  CHECK(sigma_R_max_error(-1.0, 2.0, 0.5, -0.5, 5.0, 1e-3) <= 1e-8);
  CHECK(sigma_R_max_error(0.0, 1.0, 0.5, 0.7, 5.0, 1e-3) <= 1e-12);
}

TEST_CASE("RK4 converges at fourth order") {
  const double e1 = sigma_R_max_error(2.0, 1.0, 1.5, 0.5, 2.0, 0.2);
  const double e2 = sigma_R_max_error(2.0, 1.0, 1.5, 0.5, 2.0, 0.1);
  const double e3 = sigma_R_max_error(2.0, 1.0, 1.5, 0.5, 2.0, 0.05);
  CHECK(std::log2(e1 / e2) > 3.8);
  CHECK(std::log2(e2 / e3) > 3.8);
}

TEST_CASE("integration preconditions") {
  Sigma11Params P;
  P.lambda = 1;
  P.b = 1;
  const auto sig = ControlSignal({{0.5, vec({1})}, {0.01, vec({0})}});
  CHECK_THROWS_AS(integrate(P, QuotientPoint1p{1, 0, 0}, sig, 0.05), PreconditionError);
  CHECK_THROWS_AS(integrate(P, QuotientPoint1p{1, 0, 0}, sig, 0.0), PreconditionError);
  CHECK_NOTHROW(integrate(P, QuotientPoint1p{1, 0, 0}, sig, 0.01));
}

TEST_CASE("a diverging state aborts the integration") {
  Sigma11Params P;
  P.lambda = -1000;
  P.b = 1;
  try {
    integrate(P, QuotientPoint1p{1, 1.0, 0}, ControlSignal::constant(2.0, 0.0), 1e-3);
    FAIL("expected a numerical failure");
  } catch (const NumericalError& e) {
    CHECK(e.blowup_time() > 0.0);
    CHECK(e.blowup_time() < 2.0);
  }
}

TEST_CASE("torus coordinates stay in [0, 1) and the seam does not matter") {
  gen::Gen g(207);
  for (int i = 0; i < 20; ++i) {
    const auto P = g.sigma11(2.0);
    const auto sig = g.signal(1, 4, 0.5, 1.0);
    const double s0 = g.uniform(-1, 1), t0 = g.uniform(0, 1);
    const auto a = integrate(P, QuotientPoint1p{1, s0, t0}, sig, 1e-3);
    const auto b = integrate(P, QuotientPoint1p{1, s0, t0 + 1.0}, sig, 1e-3);
    const auto c = integrate(P, QuotientPoint1p{1, s0, t0 - 3.0}, sig, 1e-3);
    REQUIRE(a.states.size() == b.states.size());
    double diff = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      CHECK(a.states[k][1] >= 0.0);
      CHECK(a.states[k][1] < 1.0);
      diff = std::max(diff, std::fabs(a.states[k][0] - b.states[k][0]));
      diff = std::max(diff, circular_distance(a.states[k][1] - b.states[k][1]));
      diff = std::max(diff, circular_distance(a.states[k][1] - c.states[k][1]));
    }
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("projection intertwines the upstairs and downstairs fields") {
  gen::Gen g(208);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const int p = g.integer(0, 1);
    const bool first = g.coin();
    const auto X = first ? g.discrete_line_field(p, 1.5) : g.line_lattice_field(p, 1.5);
    const int m = g.integer(1, 3);
    std::vector<AlgebraElement> Bs;
    std::vector<double> w;
    for (int k = 0; k < m; ++k) {
      Bs.push_back(g.algebra(1.0));
      w.push_back(g.uniform(-1, 1));
    }
    const auto x = g.group(2.0);
    const Vec3 F = sigma_H_rhs(X, Bs, w, x);
    const auto plus = GroupElement::from_coords(x.coords() + h * F);
    const auto minus = GroupElement::from_coords(x.coords() - h * F);
    if (first) {
      const auto sys = induced_system_0p(p, X, Bs);
      const auto a = project_0p(p, plus), b = project_0p(p, minus), q = project_0p(p, x);
      const Vec3 fd(wrapped_difference(a.u - b.u), a.s - b.s,
                    p == 1 ? wrapped_difference(a.t - b.t) : a.t - b.t);
      const Vec3 rhs = sys.rhs(w, q.u, q.s, q.t);
      CHECK((fd / (2 * h) - rhs).cwiseAbs().maxCoeff() < 1e-6);
    } else {
      const auto sys = induced_system_1p(p, X, Bs);
      const auto a = project_1p(p, plus), b = project_1p(p, minus), q = project_1p(p, x);
      const Vec2 fd(a.s - b.s, p == 1 ? wrapped_difference(a.t - b.t) : a.t - b.t);
      const Vec2 rhs = sys.rhs(w, q.s, q.t);
      CHECK((fd / (2 * h) - rhs).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("the one-input system is the induced system of its normal form") {
  gen::Gen g(209);
  for (int i = 0; i < 50; ++i) {
    const auto P = g.sigma11(2.0);
    const LinearField X{mat(P.lambda, P.alpha, 0, -P.lambda), {0, P.gamma}};
    const AlgebraElement B(P.a, P.b, P.c);
    const auto sys = induced_system_1p(1, X, std::span<const AlgebraElement>(&B, 1));
    const double s = g.uniform(-2, 2), t = g.uniform(0, 1);
    const double w[1] = {g.uniform(-1, 1)};
    CHECK((sys.rhs(w, s, t) - sigma_11_rhs(P, w[0], {1, s, t})).norm() < 1e-13);
  }
}

TEST_CASE("conjugation residual") {
  const auto sig = ControlSignal::constant(1.0, 0.5);
  const std::vector<AlgebraElement> zero_inputs = {AlgebraElement{}};
  CHECK(conjugation_residual(LinearField{}, zero_inputs, 1, {0.3, -0.2, 0.1}, sig, 1e-3) == 0.0);

  gen::Gen g(210);
  for (int i = 0; i < 10; ++i) {
    const int p = g.integer(0, 1);
    const auto X = g.line_lattice_field(p, 1.0);
    const std::vector<AlgebraElement> Bs = {g.algebra(1.0)};
    const auto signal = g.signal(1, 3, 0.5, 1.0);
    CHECK(conjugation_residual(X, Bs, p, g.group(1.0), signal, 1e-3) <= 1e-6);
  }
}

TEST_CASE("conjugation residual detects a wrong downstairs system") {
  gen::Gen g(211);
  for (int i = 0; i < 10; ++i) {
    const auto X = g.line_lattice_field(1, 1.0);
    const std::vector<AlgebraElement> Bs = {AlgebraElement(g.uniform(0.5, 1), g.uniform(0.5, 1), g.uniform(0.5, 1))};
    const SigmaH up{X, Bs};
    auto down = induced_system_1p(1, X, Bs);
    down.inputs[0].c += 0.25;
    const double r = conjugation_residual(up, down, {0.2, 0.3, 0.1}, ControlSignal::constant(1.0, 1.0), 1e-3);
    CHECK(r > 1e-2);
  }
}
