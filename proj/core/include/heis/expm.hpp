#pragma once

#include <cmath>

#include <Eigen/Core>

namespace heis {

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by 2^-k until its infinity norm is at most 1/4, the
/// series is summed until the next term no longer changes the sum, and the
/// result is squared k times. For the 2x2 and 3x3 blocks used here this is
/// accurate to a few ulps relative to the result norm.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime,
              Derived::ColsAtCompileTime>
expm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime,
                            Derived::ColsAtCompileTime>;

  const Scalar norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > Scalar(0.25)) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / Scalar(0.25))));
  }
  const Mat scaled = m / std::ldexp(Scalar(1), squarings);

  Mat result = Mat::Identity(m.rows(), m.cols());
  Mat term = Mat::Identity(m.rows(), m.cols());
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / Scalar(k);
    const Mat next = result + term;
    if (next == result) break;
    result = next;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace heis
