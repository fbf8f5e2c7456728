#include "heisctl/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "heis/analysis.hpp"
#include "heis/errors.hpp"
#include "heis/group.hpp"
#include "heis/induced.hpp"
#include "heis/subgroups.hpp"

namespace heisctl {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void csv_row(std::ostream& os, std::initializer_list<double> xs) {
  bool first = true;
  for (double x : xs) {
    if (!first) os << ',';
    os << format_double(x);
    first = false;
  }
  os << '\n';
}

Json group_json(const heis::GroupElement& g) {
  return Json::array({g.x(), g.y(), g.z});
}

Json interval_json(const heis::IntervalSet& I) {
  Json j;
  j["set"] = I.to_string();
  j["whole_line"] = I.whole_line;
  if (!I.whole_line) {
    j["lo"] = I.lo;
    j["hi"] = I.hi;
    j["closed_lo"] = I.closed_lo;
    j["closed_hi"] = I.closed_hi;
  }
  return j;
}

bool keep_sample(std::size_t i, std::size_t n, int stride) {
  return i % static_cast<std::size_t>(stride) == 0 || i + 1 == n;
}

Json simulate_conjugation(const SimulateConfig& cfg, const ConjugationSetup& setup, std::ostream* csv) {
  const heis::SigmaH upstairs{setup.field, setup.inputs};
  const heis::GroupElement g0(cfg.initial[0], cfg.initial[1], cfg.initial[2]);
  const auto up = heis::integrate(upstairs, g0, cfg.signal, cfg.dt);

  double residual = 0.0;
  const std::size_t n = up.times.size();
  if (setup.quotient == "1p") {
    const auto down_sys = heis::induced_system_1p(setup.p, setup.field, setup.inputs);
    const auto q0 = heis::project_1p(setup.p, g0);
    const auto down = heis::integrate(heis::as_state_system(down_sys), heis::Vec2(q0.s, q0.t), cfg.signal, cfg.dt);
    if (csv) *csv << "time,x,y,z,s,t,s_projected,t_projected\n";
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = heis::GroupElement::from_coords(up.states[i]);
      const auto proj = heis::project_1p(setup.p, g);
      const heis::QuotientPoint1p q{setup.p, down.states[i][0], down.states[i][1]};
      residual = std::max(residual, heis::quotient_distance(proj, q));
      if (csv && keep_sample(i, n, cfg.output_stride)) {
        csv_row(*csv, {up.times[i], g.x(), g.y(), g.z, q.s, q.t, proj.s, proj.t});
      }
    }
  } else {
    const auto down_sys = heis::induced_system_0p(setup.p, setup.field, setup.inputs);
    const auto q0 = heis::project_0p(setup.p, g0);
    const auto down =
        heis::integrate(heis::as_state_system(down_sys), heis::Vec3(q0.u, q0.s, q0.t), cfg.signal, cfg.dt);
    if (csv) *csv << "time,x,y,z,u,s,t,u_projected,s_projected,t_projected\n";
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = heis::GroupElement::from_coords(up.states[i]);
      const auto proj = heis::project_0p(setup.p, g);
      const heis::QuotientPoint0p q{setup.p, down.states[i][0], down.states[i][1], down.states[i][2]};
      residual = std::max(residual, heis::quotient_distance(proj, q));
      if (csv && keep_sample(i, n, cfg.output_stride)) {
        csv_row(*csv, {up.times[i], g.x(), g.y(), g.z, q.u, q.s, q.t, proj.u, proj.s, proj.t});
      }
    }
  }

  Json summary;
  summary["command"] = "simulate";
  summary["system"] = "conjugation";
  summary["quotient"] = setup.quotient;
  summary["p"] = setup.p;
  summary["samples"] = n;
  summary["residual"] = residual;
  summary["within_tolerance"] = residual <= 1e-6;
  return summary;
}

template <int N>
void write_trajectory(const heis::Trajectory<N>& traj, const char* header, int stride, std::ostream& csv) {
  csv << header << '\n';
  const std::size_t n = traj.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep_sample(i, n, stride)) continue;
    csv << format_double(traj.times[i]);
    for (int k = 0; k < N; ++k) csv << ',' << format_double(traj.states[i][k]);
    csv << '\n';
  }
}

Json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  bool is_open() const { return !path_.empty(); }
  std::ostream* stream() { return is_open() ? &file_ : nullptr; }
  void close() {
    if (!is_open()) return;
    file_.close();
    if (!file_) throw std::runtime_error("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

}  // namespace

void write_flow(const FlowConfig& cfg, std::ostream& csv) {
  csv << "t,x,y,z\n";
  for (int i = 0; i < cfg.samples; ++i) {
    const double t = cfg.samples == 1 ? cfg.t_start
                                      : cfg.t_start + (cfg.t_end - cfg.t_start) * i / (cfg.samples - 1);
    const auto g = heis::flow(cfg.field, t, cfg.initial);
    if (!g.is_finite()) throw heis::NumericalError("flow: non-finite state at t = " + format_double(t), t);
    csv_row(csv, {t, g.x(), g.y(), g.z});
  }
}

Json invariance_report(const InvarianceConfig& cfg) {
  const auto report = heis::invariance_conditions(cfg.subgroup, cfg.field, cfg.tol);
  heis::BruteForceOptions opts;
  opts.samples = cfg.samples;
  opts.times = cfg.times;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;
  const auto witnesses = heis::invariance_violations(cfg.subgroup, cfg.field, opts, 1);
  const bool brute = witnesses.empty();

  Json j;
  j["command"] = "invariance";
  j["subgroup"] = heis::to_string(cfg.subgroup);
  j["predicate"] = report.invariant();
  j["bruteforce"] = brute;
  j["verdict"] = std::string("invariant: ") + (report.invariant() ? "true" : "false") + "/" + (brute ? "true" : "false");
  j["violated"] = report.violated;
  if (brute) {
    j["witness"] = nullptr;
  } else {
    Json w;
    w["member"] = group_json(witnesses.front().member);
    w["time"] = witnesses.front().time;
    w["image"] = group_json(witnesses.front().image);
    j["witness"] = std::move(w);
  }
  return j;
}

Json run_simulate(const SimulateConfig& cfg, std::ostream* csv) {
  return std::visit(
      [&](const auto& sys) -> Json {
        using S = std::decay_t<decltype(sys)>;
        if constexpr (std::is_same_v<S, ConjugationSetup>) {
          return simulate_conjugation(cfg, sys, csv);
        } else if constexpr (std::is_same_v<S, heis::Sigma0pParams>) {
          const heis::QuotientPoint0p q0{sys.p, cfg.initial[0], cfg.initial[1], cfg.initial[2]};
          const auto traj = heis::integrate(sys, q0, cfg.signal, cfg.dt);
          if (csv) write_trajectory(traj, "time,u,s,t", cfg.output_stride, *csv);
          return nullptr;
        } else {
          const int p = std::is_same_v<S, heis::Sigma11Params> ? 1 : 0;
          const heis::QuotientPoint1p q0{p, cfg.initial[0], cfg.initial[1]};
          const auto traj = heis::integrate(sys, q0, cfg.signal, cfg.dt);
          if (csv) write_trajectory(traj, "time,s,t", cfg.output_stride, *csv);
          return nullptr;
        }
      },
      cfg.system);
}

Json run_controlset(const ControlSetConfig& cfg, std::ostream* csv) {
  const auto& P = cfg.params;
  if (std::abs(P.b) <= heis::kZeroTol) {
    throw heis::PreconditionError(
        "controlset: b != 0 is required; for b = 0 the controls never move s and s' = -lambda s has no control set");
  }
  const bool larc = heis::larc_predicate(P);
  const auto terms = heis::larc_terms(P);
  const auto est = heis::control_set_estimate(P, cfg.control_box, cfg.grid);

  if (csv) {
    *csv << "s_index,t_index,occupied\n";
    for (int i = 0; i < est.s_cells; ++i) {
      for (int k = 0; k < est.t_cells; ++k) *csv << i << ',' << k << ',' << (est.occupied(i, k) ? 1 : 0) << '\n';
    }
  }

  Json j;
  j["command"] = "controlset";
  j["larc"] = larc;
  j["larc_terms"] = Json::array({terms[0], terms[1]});
  std::optional<heis::IntervalSet> predicted;
  if (larc) {
    const auto desc = heis::control_set_sigma_11(P, cfg.control_box);
    predicted = desc.base;
    Json cf = interval_json(desc.base);
    cf["times_torus"] = desc.times_torus;
    j["closed_form"] = std::move(cf);
  }
  Json window;
  window["s_lo"] = est.s_lo;
  window["s_hi"] = est.s_hi;
  window["s_cells"] = est.s_cells;
  window["t_cells"] = est.t_cells;
  j["window"] = std::move(window);
  const std::size_t occupied = est.occupied_count();
  j["occupied_cells"] = occupied;
  if (const auto box = est.bounding_box()) {
    Json b;
    b["s_min"] = box->s_min;
    b["s_max"] = box->s_max;
    b["t_min"] = box->t_min;
    b["t_max"] = box->t_max;
    j["bounding_box"] = std::move(b);
  } else {
    j["bounding_box"] = nullptr;
  }
  if (predicted) {
    const std::size_t diff = est.symmetric_difference(*predicted);
    const std::size_t perimeter = est.perimeter_cells(*predicted);
    j["symmetric_difference"] = diff;
    j["perimeter_cells"] = perimeter;
    j["within_tolerance"] = diff <= perimeter;
  }
  j["controllable"] = occupied == est.occupancy.size();
  j["escaped"] = est.escaped;
  j["diagnostics"] = est.diagnostics;
  return j;
}

Json larc_report(const LarcConfig& cfg) {
  const auto& P = cfg.params;
  std::vector<std::array<double, 2>> points = cfg.points;
  if (points.empty()) {
    // The rank can only drop on the line s = 0, so it is always probed.
    points.push_back({0.0, 0.0});
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> s_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> t_dist(0.0, 1.0);
    for (int i = 0; i < cfg.generic_points; ++i) {
      const double s = s_dist(rng);
      points.push_back({s, t_dist(rng)});
    }
  }

  Json j;
  j["command"] = "larc";
  j["predicate"] = heis::larc_predicate(P);
  const auto terms = heis::larc_terms(P);
  j["terms"] = Json::array({terms[0], terms[1]});
  j["depth"] = cfg.depth;
  Json pts = Json::array();
  int min_rank = 2;
  for (const auto& q : points) {
    const int rank = heis::larc_numeric_rank(P, heis::QuotientPoint1p{1, q[0], q[1]}, cfg.depth);
    min_rank = std::min(min_rank, rank);
    Json e;
    e["s"] = q[0];
    e["t"] = q[1];
    e["rank"] = rank;
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  j["numeric_full_rank"] = min_rank == 2;
  if (std::abs(P.lambda) > heis::kZeroTol) {
    const auto pc = heis::p_coefficients(P);
    j["p_coefficients"] = Json::array({pc[0], pc[1]});
  } else {
    j["p_coefficients"] = nullptr;
  }
  j["q_coefficients"] = Json::array({0.5 * P.alpha, P.gamma});
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear control systems on the Heisenberg group and its quotients", "heisctl"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_path, "output file");
    sub->add_option("--seed", seed, "RNG seed, overrides the config");
  };
  auto* flow_cmd = app.add_subcommand("flow", "sample the flow of a linear field (CSV t,x,y,z)");
  auto* inv_cmd = app.add_subcommand("invariance", "predicate and sampling verdicts for subgroup invariance");
  auto* sim_cmd = app.add_subcommand("simulate", "integrate a quotient system, or compare upstairs and downstairs");
  auto* cs_cmd = app.add_subcommand("controlset", "grid estimate of the control set of the system on R x T");
  auto* larc_cmd = app.add_subcommand("larc", "rank condition, symbolic and numeric");
  for (auto* sub : {flow_cmd, inv_cmd, sim_cmd, cs_cmd, larc_cmd}) add_common(sub);

  // CLI11 consumes a reversed argument list without the program name.
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "heisctl: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const Json doc = read_config(config_path);
    OutputFile file(out_path);
    // Commands with a JSON summary send it to stdout and need --out for bulk
    // data; the others stream CSV to stdout when --out is absent.
    std::optional<Json> summary;
    if (flow_cmd->parsed()) {
      auto cfg = parse_flow(doc);
      if (seed) cfg.seed = *seed;
      write_flow(cfg, file.is_open() ? *file.stream() : out);
    } else if (inv_cmd->parsed()) {
      auto cfg = parse_invariance(doc);
      if (seed) cfg.seed = *seed;
      const Json report = invariance_report(cfg);
      (file.is_open() ? *file.stream() : out) << report.dump(2) << '\n';
    } else if (sim_cmd->parsed()) {
      auto cfg = parse_simulate(doc);
      if (seed) cfg.seed = *seed;
      const bool has_summary = std::holds_alternative<ConjugationSetup>(cfg.system);
      std::ostream* csv = file.is_open() ? file.stream() : (has_summary ? nullptr : &out);
      Json s = run_simulate(cfg, csv);
      if (!s.is_null()) summary = std::move(s);
    } else if (cs_cmd->parsed()) {
      auto cfg = parse_controlset(doc);
      if (seed) cfg.seed = *seed;
      summary = run_controlset(cfg, file.stream());
    } else if (larc_cmd->parsed()) {
      auto cfg = parse_larc(doc);
      if (seed) cfg.seed = *seed;
      const Json report = larc_report(cfg);
      (file.is_open() ? *file.stream() : out) << report.dump(2) << '\n';
    }
    file.close();
    if (summary) out << summary->dump(2) << '\n';
    return kExitOk;
  } catch (const heis::NumericalError& e) {
    err << "heisctl: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "heisctl: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const heis::PreconditionError& e) {
    err << "heisctl: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "heisctl: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace heisctl
