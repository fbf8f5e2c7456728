#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heis/induced.hpp"

namespace heis {

/// A real interval with open/closed ends, or the whole line.
struct IntervalSet {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = true;
  bool closed_hi = true;
  bool whole_line = false;

  static IntervalSet closed(double lo, double hi) { return {lo, hi, true, true, false}; }
  static IntervalSet open(double lo, double hi) { return {lo, hi, false, false, false}; }
  static IntervalSet line() { return {0.0, 0.0, false, false, true}; }

  bool contains(double s, double tol = 0.0) const;
  std::string to_string() const;
};

/// Control set of the form base x T (times_torus) or base alone.
struct ControlSetDescription {
  IntervalSet base;
  bool times_torus = true;
};

/// The two quantities whose non-vanishing decides the rank condition:
/// b (2 a lambda + b alpha) and b (b gamma + lambda c).
std::array<double, 2> larc_terms(const Sigma11Params& P);

/// Rank condition for the one-input system on R x T (|term| > 1e-12 counts as nonzero).
bool larc_predicate(const Sigma11Params& P);

/// Dimension of the span of the drift, the input field and their iterated
/// brackets up to `depth` letters, evaluated at q. Singular values above
/// `sv_tol` count.
int larc_numeric_rank(const Sigma11Params& P, const QuotientPoint1p& q, int depth = 3, double sv_tol = 1e-9);

/// The unique control set of s' = -lambda s + w b on R, w in [lo, hi]:
/// (b/lambda) Omega for lambda > 0, its interior for lambda < 0, R for lambda = 0.
IntervalSet control_set_sigma_R(double lambda, double b, const ControlBox& box);

/// Control set of the one-input system on R x T under the rank condition.
ControlSetDescription control_set_sigma_11(const Sigma11Params& P, const ControlBox& box);

/// p(w) = b/(2 lambda^2) (b alpha + 2 a lambda) w^2 + (b gamma + c lambda) w / lambda.
double p_polynomial(const Sigma11Params& P, double w);
/// Coefficients (quadratic, linear) of p.
std::array<double, 2> p_coefficients(const Sigma11Params& P);

/// q(s) = alpha s^2 / 2 + gamma s.
double q_polynomial(const Sigma11Params& P, double s);

/// Resolution and discretization for grid reachability.
struct GridConfig {
  std::optional<double> s_lo;  // defaults from the predicted set, or [-3, 3]
  std::optional<double> s_hi;
  int s_cells = 200;
  int t_cells = 200;
  int control_levels = 9;  // per control axis, uniform across the box
  double dwell = 0.05;     // shortest constant-control arc worth starting
  double dt = 0.01;        // RK4 step; cells are sampled after every step
  double sweep = 1.0;      // longest constant-control arc started from a cell
  double horizon = 20.0;   // T
  std::optional<std::array<double, 2>> seed_state;  // control_set_estimate seed

  void validate() const;
};

/// Occupancy grid over [s_lo, s_hi) x [0, 1).
struct RegionEstimate {
  double s_lo = 0.0;
  double s_hi = 0.0;
  int s_cells = 0;
  int t_cells = 0;
  std::vector<unsigned char> occupancy;  // row-major in s
  double horizon = 0.0;
  int control_levels = 0;
  double dwell = 0.0;
  double dt = 0.0;
  bool escaped = false;
  std::vector<std::string> diagnostics;

  double s_width() const { return (s_hi - s_lo) / s_cells; }
  double t_width() const { return 1.0 / t_cells; }
  bool occupied(int i, int j) const {
    return occupancy[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_cells) + static_cast<std::size_t>(j)] != 0;
  }
  std::size_t occupied_count() const;
  /// Occupied s-cell rows.
  int occupied_rows() const;
  /// Number of distinct occupied t-cell columns.
  int occupied_columns() const;

  struct Box {
    double s_min, s_max, t_min, t_max;
  };
  /// Bounding box of occupied cells (cell edges); nullopt if empty.
  std::optional<Box> bounding_box() const;

  /// Cells whose center lies in set x T.
  std::vector<unsigned char> predicted_mask(const IntervalSet& set) const;
  /// Cells where the estimate and the predicted set x T disagree.
  std::size_t symmetric_difference(const IntervalSet& set) const;
  /// Predicted cells with a 4-neighbour outside the prediction (t wraps).
  std::size_t perimeter_cells(const IntervalSet& set) const;
};

/// Forward occupancy of the one-input system from q0 within horizon T.
///
/// Cells are expanded in order of earliest arrival. From the stored point
/// of a cell every discretized control value is held for up to `sweep`
/// (and never past the horizon), and the cell under the state after every
/// RK4 step is marked. Cells leaving the s-window are dropped and
/// set `escaped`.
RegionEstimate reachable_grid(const Sigma11Params& P, const ControlBox& box, const QuotientPoint1p& q0, double T,
                              const GridConfig& cfg);

/// Cells that can reach q0 within T (time-reversed dynamics).
RegionEstimate backward_reachable_grid(const Sigma11Params& P, const ControlBox& box, const QuotientPoint1p& q0,
                                       double T, const GridConfig& cfg);

/// Forward occupancy intersected with backward occupancy from a seed inside
/// the predicted control set. Degenerate outcomes are reported in
/// `diagnostics`.
RegionEstimate control_set_estimate(const Sigma11Params& P, const ControlBox& box, const GridConfig& cfg);

/// Default s-window: one unit beyond the predicted interval, or [-3, 3].
std::array<double, 2> default_window(const Sigma11Params& P, const ControlBox& box);

}  // namespace heis
