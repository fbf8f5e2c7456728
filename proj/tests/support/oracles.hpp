#pragma once

// Reference computations written directly from the defining formulas, in
// long double and without calling into the library.

#include <array>
#include <cmath>
#include <cstddef>

namespace oracle {

using Real = long double;
using M3 = std::array<std::array<Real, 3>, 3>;
using V3 = std::array<Real, 3>;

inline V3 product(const V3& g, const V3& h) {
  // z-part: z1 + z2 + 1/2 (y1 x2 - x1 y2)
  return {g[0] + h[0], g[1] + h[1], g[2] + h[2] + 0.5L * (g[1] * h[0] - g[0] * h[1])};
}

inline M3 zero3() { return M3{}; }

inline M3 identity3() {
  M3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1.0L;
  return m;
}

inline M3 mul(const M3& a, const M3& b) {
  M3 c{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline V3 apply(const M3& a, const V3& v) {
  V3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
  return r;
}

// Taylor series in long double, halving until the entries are below 1/8.
inline M3 expm_series(M3 a) {
  Real norm = 0.0L;
  for (const auto& row : a)
    for (Real x : row) norm = std::max(norm, std::fabs(x));
  int squarings = 0;
  while (norm > 0.125L) {
    norm *= 0.5L;
    ++squarings;
  }
  const Real scale = std::ldexp(1.0L, -squarings);
  for (auto& row : a)
    for (Real& x : row) x *= scale;

  M3 sum = identity3();
  M3 term = identity3();
  for (int n = 1; n <= 40; ++n) {
    term = mul(term, a);
    for (auto& row : term)
      for (Real& x : row) x /= static_cast<Real>(n);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sum[i][j] += term[i][j];
  }
  for (int k = 0; k < squarings; ++k) sum = mul(sum, sum);
  return sum;
}

// Derivation matrix of the field (A, eta) times t.
inline M3 scaled_derivation(const std::array<Real, 4>& A, const std::array<Real, 2>& eta, Real t) {
  M3 d{};
  d[0][0] = t * A[0];
  d[0][1] = t * A[1];
  d[1][0] = t * A[2];
  d[1][1] = t * A[3];
  d[2][0] = t * eta[0];
  d[2][1] = t * eta[1];
  d[2][2] = t * (A[0] + A[3]);
  return d;
}

// Integral of exp(s B^T) eta over [0, t], composite Simpson on n panels.
inline std::array<Real, 2> lambda_simpson(const std::array<Real, 4>& B, const std::array<Real, 2>& eta, Real t,
                                          int n = 2000) {
  auto integrand = [&](Real s) {
    M3 m{};
    m[0][0] = s * B[0];
    m[0][1] = s * B[2];
    m[1][0] = s * B[1];
    m[1][1] = s * B[3];
    const M3 e = expm_series(m);
    return std::array<Real, 2>{e[0][0] * eta[0] + e[0][1] * eta[1], e[1][0] * eta[0] + e[1][1] * eta[1]};
  };
  const Real h = t / n;
  std::array<Real, 2> acc{};
  for (int i = 0; i <= n; ++i) {
    const Real w = (i == 0 || i == n) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    const auto f = integrand(h * i);
    acc[0] += w * f[0];
    acc[1] += w * f[1];
  }
  return {acc[0] * h / 3.0L, acc[1] * h / 3.0L};
}

// Solution of s' = -lambda s + b w from s0, constant w.
inline Real sigma_R(Real lambda, Real b, Real s0, Real w, Real tau) {
  if (lambda == 0.0L) return s0 + b * w * tau;
  const Real fixed = b * w / lambda;
  return std::exp(-tau * lambda) * (s0 - fixed) + fixed;
}

// Fractional part in [0, 1).
inline Real frac(Real x) {
  Real r = x - std::floor(x);
  if (r >= 1.0L) r = 0.0L;
  return r;
}

}  // namespace oracle
