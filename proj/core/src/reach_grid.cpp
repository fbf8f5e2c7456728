#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "heis/analysis.hpp"

namespace heis {

void GridConfig::validate() const {
  if (s_cells < 8 || t_cells < 8) throw PreconditionError("grid: resolutions must be at least 8");
  if (control_levels < 2) throw PreconditionError("grid: need at least 2 control levels");
  if (!(dwell > 0.0) || !(dt > 0.0) || dt > dwell) throw PreconditionError("grid: need 0 < dt <= dwell");
  if (!(sweep >= dwell)) throw PreconditionError("grid: sweep must be at least one dwell");
  if (!(horizon > 0.0)) throw PreconditionError("grid: horizon must be positive");
  if (s_lo.has_value() != s_hi.has_value()) throw PreconditionError("grid: give both s_lo and s_hi or neither");
  if (s_lo && !(*s_lo < *s_hi)) throw PreconditionError("grid: s_lo must be below s_hi");
}

std::size_t RegionEstimate::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
}

int RegionEstimate::occupied_rows() const {
  int rows = 0;
  for (int i = 0; i < s_cells; ++i) {
    for (int j = 0; j < t_cells; ++j) {
      if (occupied(i, j)) {
        ++rows;
        break;
      }
    }
  }
  return rows;
}

int RegionEstimate::occupied_columns() const {
  int cols = 0;
  for (int j = 0; j < t_cells; ++j) {
    for (int i = 0; i < s_cells; ++i) {
      if (occupied(i, j)) {
        ++cols;
        break;
      }
    }
  }
  return cols;
}

std::optional<RegionEstimate::Box> RegionEstimate::bounding_box() const {
  int i_min = s_cells, i_max = -1, j_min = t_cells, j_max = -1;
  for (int i = 0; i < s_cells; ++i) {
    for (int j = 0; j < t_cells; ++j) {
      if (!occupied(i, j)) continue;
      i_min = std::min(i_min, i);
      i_max = std::max(i_max, i);
      j_min = std::min(j_min, j);
      j_max = std::max(j_max, j);
    }
  }
  if (i_max < 0) return std::nullopt;
  const double ds = s_width(), dtc = t_width();
  return Box{s_lo + i_min * ds, s_lo + (i_max + 1) * ds, j_min * dtc, (j_max + 1) * dtc};
}

std::vector<unsigned char> RegionEstimate::predicted_mask(const IntervalSet& set) const {
  std::vector<unsigned char> mask(occupancy.size(), 0);
  const double ds = s_width();
  for (int i = 0; i < s_cells; ++i) {
    if (!set.contains(s_lo + (i + 0.5) * ds)) continue;
    std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(i) * t_cells, t_cells, 1);
  }
  return mask;
}

std::size_t RegionEstimate::symmetric_difference(const IntervalSet& set) const {
  const auto mask = predicted_mask(set);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < mask.size(); ++k) diff += (mask[k] != occupancy[k]) ? 1 : 0;
  return diff;
}

std::size_t RegionEstimate::perimeter_cells(const IntervalSet& set) const {
  const auto mask = predicted_mask(set);
  auto at = [&](int i, int j) {
    if (i < 0 || i >= s_cells) return false;
    j = (j % t_cells + t_cells) % t_cells;
    return mask[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_cells) + static_cast<std::size_t>(j)] != 0;
  };
  std::size_t count = 0;
  for (int i = 0; i < s_cells; ++i) {
    for (int j = 0; j < t_cells; ++j) {
      if (!at(i, j)) continue;
      if (!at(i - 1, j) || !at(i + 1, j) || !at(i, j - 1) || !at(i, j + 1)) ++count;
    }
  }
  return count;
}

std::array<double, 2> default_window(const Sigma11Params& P, const ControlBox& box) {
  if (std::abs(P.b) > kZeroTol && box.dim() == 1) {
    const IntervalSet set = control_set_sigma_R(P.lambda, P.b, box);
    if (!set.whole_line) return {set.lo - 1.0, set.hi + 1.0};
  }
  return {-3.0, 3.0};
}

namespace {

std::vector<double> control_levels(const ControlBox& box, int levels) {
  const double lo = box.lower()[0], hi = box.upper()[0];
  std::vector<double> out(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (levels - 1);
  return out;
}

// Earliest-arrival expansion over the occupancy grid. `direction` is +1 for
// forward time and -1 for the time-reversed system.
RegionEstimate flood(const Sigma11Params& P, const ControlBox& box, const QuotientPoint1p& q0, double T,
                     const GridConfig& cfg, double direction) {
  P.validate();
  cfg.validate();
  if (!(T > 0.0)) throw PreconditionError("grid: horizon must be positive");
  if (box.dim() != 1) throw PreconditionError("grid: the one-input system needs a scalar control box");

  const auto window = cfg.s_lo ? std::array<double, 2>{*cfg.s_lo, *cfg.s_hi} : default_window(P, box);

  RegionEstimate est;
  est.s_lo = window[0];
  est.s_hi = window[1];
  est.s_cells = cfg.s_cells;
  est.t_cells = cfg.t_cells;
  est.horizon = T;
  est.control_levels = cfg.control_levels;
  est.dwell = cfg.dwell;
  est.dt = cfg.dt;

  const int S = cfg.s_cells, C = cfg.t_cells;
  const double ds = (est.s_hi - est.s_lo) / S;
  auto cell_of = [&](const Vec2& x) -> long {
    const double fi = std::floor((x[0] - est.s_lo) / ds);
    if (!(fi >= 0.0 && fi < S)) return -1;
    const int j = std::min(C - 1, static_cast<int>(wrap_unit(x[1]) * C));
    return static_cast<long>(fi) * C + j;
  };

  const Vec2 start(q0.s, wrap_unit(q0.t));
  const long seed = cell_of(start);
  if (seed < 0) throw PreconditionError("grid: initial state outside the s-window");

  const std::size_t n = static_cast<std::size_t>(S) * static_cast<std::size_t>(C);
  std::vector<double> arrival(n, std::numeric_limits<double>::infinity());
  std::vector<Vec2> point(n, Vec2::Zero());

  using Entry = std::pair<double, long>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  arrival[static_cast<std::size_t>(seed)] = 0.0;
  point[static_cast<std::size_t>(seed)] = start;
  queue.emplace(0.0, seed);

  const std::vector<double> levels = control_levels(box, cfg.control_levels);
  const auto substeps = static_cast<int>(std::ceil(cfg.dwell / cfg.dt - 1e-9));
  const double h = cfg.dwell / substeps;  // sampling step along each arc
  const double lambda = P.lambda, b = P.b, a = P.a, c = P.c, alpha = P.alpha, gamma = P.gamma;

  while (!queue.empty()) {
    const auto [time, cell] = queue.top();
    queue.pop();
    if (time > arrival[static_cast<std::size_t>(cell)]) continue;

    const double budget = std::min(cfg.sweep, T - time);
    if (budget < cfg.dwell * (1.0 - 1e-9)) continue;
    const auto steps = static_cast<long>(std::floor(budget / h + 1e-9));

    for (double w : levels) {
      const auto f = [&](const Vec2& x) -> Vec2 {
        const double s = x[0];
        return direction * Vec2(-lambda * s + w * b, 0.5 * alpha * s * s + gamma * s + w * (c + a * s));
      };
      Vec2 x = point[static_cast<std::size_t>(cell)];
      for (long k = 1; k <= steps; ++k) {
        x = rk4_step(f, x, h);
        if (!x.allFinite()) break;
        x[1] = wrap_unit(x[1]);
        const long target = cell_of(x);
        if (target < 0) {
          est.escaped = true;
          continue;
        }
        const double t_arr = time + static_cast<double>(k) * h;
        auto& best = arrival[static_cast<std::size_t>(target)];
        if (t_arr < best) {
          best = t_arr;
          point[static_cast<std::size_t>(target)] = x;
          queue.emplace(t_arr, target);
        }
      }
    }
  }

  est.occupancy.resize(n);
  for (std::size_t k = 0; k < n; ++k) est.occupancy[k] = std::isfinite(arrival[k]) ? 1 : 0;
  if (est.escaped) est.diagnostics.emplace_back("trajectories left the s-window; those cells were dropped");
  return est;
}

}  // namespace

RegionEstimate reachable_grid(const Sigma11Params& P, const ControlBox& box, const QuotientPoint1p& q0, double T,
                              const GridConfig& cfg) {
  return flood(P, box, q0, T, cfg, 1.0);
}

RegionEstimate backward_reachable_grid(const Sigma11Params& P, const ControlBox& box, const QuotientPoint1p& q0,
                                       double T, const GridConfig& cfg) {
  return flood(P, box, q0, T, cfg, -1.0);
}

RegionEstimate control_set_estimate(const Sigma11Params& P, const ControlBox& box, const GridConfig& cfg) {
  cfg.validate();
  GridConfig local = cfg;
  if (!local.s_lo) {
    const auto window = default_window(P, box);
    local.s_lo = window[0];
    local.s_hi = window[1];
  }

  QuotientPoint1p seed{1, 0.5 * (*local.s_lo + *local.s_hi), 0.0};
  if (local.seed_state) {
    seed.s = (*local.seed_state)[0];
    seed.t = wrap_unit((*local.seed_state)[1]);
  } else if (std::abs(P.b) > kZeroTol) {
    const IntervalSet set = control_set_sigma_R(P.lambda, P.b, box);
    if (!set.whole_line) seed.s = 0.5 * (set.lo + set.hi);
  }

  RegionEstimate fwd = reachable_grid(P, box, seed, local.horizon, local);
  const RegionEstimate bwd = backward_reachable_grid(P, box, seed, local.horizon, local);

  RegionEstimate out = fwd;
  out.escaped = fwd.escaped || bwd.escaped;
  out.diagnostics.clear();
  for (std::size_t k = 0; k < out.occupancy.size(); ++k) out.occupancy[k] = fwd.occupancy[k] & bwd.occupancy[k];

  if (fwd.escaped) out.diagnostics.emplace_back("forward trajectories left the s-window");
  if (bwd.escaped) out.diagnostics.emplace_back("backward trajectories left the s-window");
  if (!larc_predicate(P)) out.diagnostics.emplace_back("rank condition fails; the estimate is not a control set");
  if (out.occupied_count() == 0) {
    out.diagnostics.emplace_back("empty intersection of forward and backward occupancy");
  } else if (out.occupied_columns() < out.t_cells) {
    out.diagnostics.emplace_back("degenerate t-band: occupancy confined to " + std::to_string(out.occupied_columns()) +
                                 " of " + std::to_string(out.t_cells) + " t-columns");
  }
  return out;
}

}  // namespace heis
