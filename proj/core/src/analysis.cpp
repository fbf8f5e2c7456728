#include "heis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/SVD>

namespace heis {

namespace {

bool nonzero(double x) { return std::abs(x) > kZeroTol; }

// Polynomial in s, coefficients in ascending degree.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> c) : c_(std::move(c)) {}

  double operator()(double s) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& x, const Poly& y) {
    std::vector<double> r(std::max(x.c_.size(), y.c_.size()), 0.0);
    for (std::size_t k = 0; k < x.c_.size(); ++k) r[k] += x.c_[k];
    for (std::size_t k = 0; k < y.c_.size(); ++k) r[k] += y.c_[k];
    return Poly(std::move(r));
  }

  friend Poly operator-(const Poly& x, const Poly& y) { return x + (-1.0) * y; }

  friend Poly operator*(double k, const Poly& x) {
    std::vector<double> r = x.c_;
    for (double& v : r) v *= k;
    return Poly(std::move(r));
  }

  friend Poly operator*(const Poly& x, const Poly& y) {
    if (x.c_.empty() || y.c_.empty()) return {};
    std::vector<double> r(x.c_.size() + y.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.c_.size(); ++i)
      for (std::size_t j = 0; j < y.c_.size(); ++j) r[i + j] += x.c_[i] * y.c_[j];
    return Poly(std::move(r));
  }

 private:
  std::vector<double> c_;
};

// Vector field on R x T whose components depend on s only. Every field in the
// Lie algebra generated by the drift and the input field has this form.
struct PolyField {
  Poly ds;
  Poly dt;
};

// [X, Y] = DY . X - DX . Y; the t-columns of both Jacobians vanish.
PolyField lie_bracket(const PolyField& X, const PolyField& Y) {
  return {Y.ds.derivative() * X.ds - X.ds.derivative() * Y.ds,
          Y.dt.derivative() * X.ds - X.dt.derivative() * Y.ds};
}

}  // namespace

bool IntervalSet::contains(double s, double tol) const {
  if (whole_line) return true;
  const bool above = closed_lo ? s >= lo - tol : s > lo - tol;
  const bool below = closed_hi ? s <= hi + tol : s < hi + tol;
  return above && below;
}

std::string IntervalSet::to_string() const {
  if (whole_line) return "R";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%c%.17g, %.17g%c", closed_lo ? '[' : '(', lo, hi, closed_hi ? ']' : ')');
  return buf;
}

std::array<double, 2> larc_terms(const Sigma11Params& P) {
  return {P.b * (2.0 * P.a * P.lambda + P.b * P.alpha), P.b * (P.b * P.gamma + P.lambda * P.c)};
}

bool larc_predicate(const Sigma11Params& P) {
  P.validate();
  const auto terms = larc_terms(P);
  return nonzero(terms[0]) || nonzero(terms[1]);
}

int larc_numeric_rank(const Sigma11Params& P, const QuotientPoint1p& q, int depth, double sv_tol) {
  if (depth < 2) throw PreconditionError("larc_numeric_rank: depth must be at least 2");
  P.validate();

  const PolyField drift{Poly({0.0, -P.lambda}), Poly({0.0, P.gamma, 0.5 * P.alpha})};
  const PolyField input{Poly({P.b}), Poly({P.c, P.a})};
  const std::array<PolyField, 2> generators{drift, input};

  // Right-normed words span the generated Lie algebra.
  std::vector<PolyField> all(generators.begin(), generators.end());
  std::vector<PolyField> level(generators.begin(), generators.end());
  for (int d = 2; d <= depth; ++d) {
    std::vector<PolyField> next;
    for (const auto& w : level)
      for (const auto& g : generators) next.push_back(lie_bracket(g, w));
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(all.size()), 2);
  for (std::size_t i = 0; i < all.size(); ++i) {
    rows(static_cast<Eigen::Index>(i), 0) = all[i].ds(q.s);
    rows(static_cast<Eigen::Index>(i), 1) = all[i].dt(q.s);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  return static_cast<int>((sv.array() > sv_tol).count());
}

IntervalSet control_set_sigma_R(double lambda, double b, const ControlBox& box) {
  if (!nonzero(b)) throw PreconditionError("control set of s' = -lambda s + w b requires b != 0");
  if (box.dim() != 1) throw PreconditionError("control set of s' = -lambda s + w b requires a scalar control");
  if (!nonzero(lambda)) return IntervalSet::line();

  const double e1 = b / lambda * box.lower()[0];
  const double e2 = b / lambda * box.upper()[0];
  const double lo = std::min(e1, e2), hi = std::max(e1, e2);
  return lambda > 0.0 ? IntervalSet::closed(lo, hi) : IntervalSet::open(lo, hi);
}

ControlSetDescription control_set_sigma_11(const Sigma11Params& P, const ControlBox& box) {
  P.validate();
  if (!nonzero(P.b)) throw PreconditionError("control set of Sigma11 requires b != 0");
  if (!larc_predicate(P)) throw PreconditionError("control set of Sigma11 requires the Lie algebra rank condition");
  return {control_set_sigma_R(P.lambda, P.b, box), true};
}

std::array<double, 2> p_coefficients(const Sigma11Params& P) {
  if (!nonzero(P.lambda)) throw PreconditionError("p(w) is defined only for lambda != 0");
  const double l = P.lambda;
  return {P.b / (2.0 * l * l) * (P.b * P.alpha + 2.0 * P.a * l), (P.b * P.gamma + P.c * l) / l};
}

double p_polynomial(const Sigma11Params& P, double w) {
  const auto k = p_coefficients(P);
  return k[0] * w * w + k[1] * w;
}

double q_polynomial(const Sigma11Params& P, double s) { return 0.5 * P.alpha * s * s + P.gamma * s; }

}  // namespace heis
