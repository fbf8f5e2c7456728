#include "heisctl/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

namespace heisctl {
namespace {

// Reads the members of one JSON object and rejects anything it was not asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const Json& at(const std::string& key) {
    if (!has(key)) fail("missing key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) { return as_number(at(key), key); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<int>();
  }

  std::uint64_t seed(std::uint64_t fallback = 0) {
    if (!has("seed")) return fallback;
    const Json& v = j_.at("seed");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail("'seed' must be a non-negative integer");
  }

  std::string string(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail("'" + key + "' must be a number or an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, key));
    return out;
  }

  std::string child(const std::string& key) const { return where_ + "." + key; }

  // Call last: any member not consulted is an error.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where_ + ": " + msg); }

 private:
  double as_number(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail("'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("'" + key + "' must be finite");
    return x;
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

Json number_array(std::initializer_list<double> xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(x);
  return a;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::vector<double> fixed_numbers(ObjectReader& r, const std::string& key, std::size_t n) {
  auto xs = r.numbers(key);
  if (xs.size() != n) r.fail("'" + key + "' must have " + std::to_string(n) + " entries");
  return xs;
}

heis::LinearField field_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  const Json& A = r.at("A");
  if (!A.is_array() || A.size() != 2) r.fail("'A' must be a 2x2 array");
  heis::LinearField X;
  for (int i = 0; i < 2; ++i) {
    const Json& row = A.at(static_cast<std::size_t>(i));
    if (!row.is_array() || row.size() != 2) r.fail("'A' must be a 2x2 array");
    for (int k = 0; k < 2; ++k) {
      const Json& e = row.at(static_cast<std::size_t>(k));
      if (!e.is_number()) r.fail("'A' entries must be numbers");
      X.A(i, k) = e.get<double>();
    }
  }
  if (!X.A.allFinite()) r.fail("'A' entries must be finite");
  auto eta = r.has("eta") ? fixed_numbers(r, "eta", 2) : std::vector<double>{0.0, 0.0};
  X.eta = {eta[0], eta[1]};
  r.finish();
  return X;
}

Json field_to_json(const heis::LinearField& X) {
  Json j;
  j["A"] = Json::array({number_array({X.A(0, 0), X.A(0, 1)}), number_array({X.A(1, 0), X.A(1, 1)})});
  j["eta"] = number_array({X.eta.x(), X.eta.y()});
  return j;
}

heis::AlgebraElement algebra_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  auto zeta = fixed_numbers(r, "zeta", 2);
  const double alpha = r.number("alpha", 0.0);
  r.finish();
  return {zeta[0], zeta[1], alpha};
}

Json algebra_to_json(const heis::AlgebraElement& B) {
  Json j;
  j["zeta"] = number_array({B.zeta.x(), B.zeta.y()});
  j["alpha"] = B.alpha;
  return j;
}

heis::InputField input_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  heis::InputField f{r.number("a", 0.0), r.number("b", 0.0), r.number("c", 0.0)};
  r.finish();
  return f;
}

Json input_to_json(const heis::InputField& f) {
  Json j;
  j["a"] = f.a;
  j["b"] = f.b;
  j["c"] = f.c;
  return j;
}

std::array<heis::InputField, 3> three_inputs(ObjectReader& r) {
  std::array<heis::InputField, 3> out{};
  if (!r.has("inputs")) return out;
  const Json& v = r.at("inputs");
  if (!v.is_array() || v.size() > 3) r.fail("'inputs' must be an array of at most 3 input fields");
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = input_from_json(v[i], r.child("inputs[" + std::to_string(i) + "]"));
  return out;
}

Json three_inputs_json(const std::array<heis::InputField, 3>& in) {
  Json a = Json::array();
  for (const auto& f : in) a.push_back(input_to_json(f));
  return a;
}

heis::Sigma11Params sigma11_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  heis::Sigma11Params P;
  P.lambda = r.number("lambda", 0.0);
  P.b = r.number("b", 0.0);
  P.a = r.number("a", 0.0);
  P.c = r.number("c", 0.0);
  P.alpha = r.number("alpha", 0.0);
  P.gamma = r.number("gamma", 0.0);
  r.finish();
  P.validate();
  return P;
}

Json sigma11_to_json(const heis::Sigma11Params& P) {
  Json j;
  j["lambda"] = P.lambda;
  j["b"] = P.b;
  j["a"] = P.a;
  j["c"] = P.c;
  j["alpha"] = P.alpha;
  j["gamma"] = P.gamma;
  return j;
}

heis::Sigma10Params sigma10_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  heis::Sigma10Params P;
  P.lambda = r.number("lambda", 0.0);
  P.beta = r.number("beta", 0.0);
  P.alpha = r.number("alpha", 0.0);
  P.gamma = r.number("gamma", 0.0);
  P.inputs = three_inputs(r);
  r.finish();
  P.validate();
  return P;
}

heis::Sigma0pParams sigma0p_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  heis::Sigma0pParams P;
  P.p = r.integer("p", 0);
  P.beta = r.number("beta", 0.0);
  P.alpha = r.number("alpha", 0.0);
  P.gamma = r.number("gamma", 0.0);
  P.inputs = three_inputs(r);
  r.finish();
  P.validate();
  return P;
}

ConjugationSetup conjugation_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  ConjugationSetup c;
  if (r.has("quotient")) c.quotient = r.string("quotient");
  if (c.quotient != "1p" && c.quotient != "0p") r.fail("'quotient' must be \"1p\" or \"0p\"");
  c.p = r.integer("p", 1);
  if (c.p != 0 && c.p != 1) r.fail("'p' must be 0 or 1");
  c.field = field_from_json(r.at("field"), r.child("field"));
  if (r.has("inputs")) {
    const Json& v = r.at("inputs");
    if (!v.is_array() || v.size() > 3) r.fail("'inputs' must be an array of at most 3 algebra elements");
    for (std::size_t i = 0; i < v.size(); ++i) {
      c.inputs.push_back(algebra_from_json(v[i], r.child("inputs[" + std::to_string(i) + "]")));
    }
  }
  r.finish();
  return c;
}

heis::ControlBox box_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  auto lo = r.numbers("lower");
  auto hi = r.numbers("upper");
  r.finish();
  return heis::ControlBox(to_vector(lo), to_vector(hi));
}

Json box_to_json(const heis::ControlBox& box) {
  Json j;
  j["lower"] = vector_json(box.lower());
  j["upper"] = vector_json(box.upper());
  return j;
}

heis::ControlSignal signal_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array of pieces");
  std::vector<heis::ControlPiece> pieces;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader r(j[i], where + "[" + std::to_string(i) + "]");
    heis::ControlPiece piece;
    piece.duration = r.number("duration");
    piece.value = to_vector(r.numbers("value"));
    r.finish();
    pieces.push_back(std::move(piece));
  }
  return heis::ControlSignal(std::move(pieces));
}

Json signal_to_json(const heis::ControlSignal& signal) {
  Json a = Json::array();
  for (const auto& piece : signal.pieces()) {
    Json j;
    j["duration"] = piece.duration;
    j["value"] = vector_json(piece.value);
    a.push_back(std::move(j));
  }
  return a;
}

heis::GridConfig grid_from_json(const Json& j, const std::string& where) {
  ObjectReader r(j, where);
  heis::GridConfig g;
  if (r.has("s_lo")) g.s_lo = r.number("s_lo");
  if (r.has("s_hi")) g.s_hi = r.number("s_hi");
  g.s_cells = r.integer("s_cells", g.s_cells);
  g.t_cells = r.integer("t_cells", g.t_cells);
  g.control_levels = r.integer("control_levels", g.control_levels);
  g.dwell = r.number("dwell", g.dwell);
  g.dt = r.number("dt", g.dt);
  g.sweep = r.number("sweep", g.sweep);
  g.horizon = r.number("horizon", g.horizon);
  if (r.has("seed_state")) {
    auto q = fixed_numbers(r, "seed_state", 2);
    g.seed_state = std::array<double, 2>{q[0], q[1]};
  }
  r.finish();
  g.validate();
  return g;
}

Json grid_to_json(const heis::GridConfig& g) {
  Json j;
  if (g.s_lo) j["s_lo"] = *g.s_lo;
  if (g.s_hi) j["s_hi"] = *g.s_hi;
  j["s_cells"] = g.s_cells;
  j["t_cells"] = g.t_cells;
  j["control_levels"] = g.control_levels;
  j["dwell"] = g.dwell;
  j["dt"] = g.dt;
  j["sweep"] = g.sweep;
  j["horizon"] = g.horizon;
  if (g.seed_state) j["seed_state"] = number_array({(*g.seed_state)[0], (*g.seed_state)[1]});
  return j;
}

}  // namespace

Json subgroup_to_json(const heis::SubgroupKind& L) {
  Json j;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, heis::Dim2>) {
          j["kind"] = "Dim2";
          j["p"] = k.p;
        } else if constexpr (std::is_same_v<K, heis::LatticeCylinder>) {
          j["kind"] = "LatticeCylinder";
          j["k"] = k.k;
        } else if constexpr (std::is_same_v<K, heis::LineTimesLattice>) {
          j["kind"] = "LineTimesLattice";
          j["p"] = k.p;
        } else if constexpr (std::is_same_v<K, heis::DiscreteLine>) {
          j["kind"] = "DiscreteLine";
          j["p"] = k.p;
        } else if constexpr (std::is_same_v<K, heis::CenterLattice>) {
          j["kind"] = "CenterLattice";
        } else {
          j["kind"] = "FullLattice";
          j["p"] = k.p;
        }
      },
      L);
  return j;
}

heis::SubgroupKind subgroup_from_json(const Json& j) {
  ObjectReader r(j, "subgroup");
  const std::string kind = r.string("kind");
  heis::SubgroupKind L;
  if (kind == "Dim2") {
    L = heis::Dim2{r.integer("p", 0)};
  } else if (kind == "LatticeCylinder") {
    L = heis::LatticeCylinder{r.integer("k", 1)};
  } else if (kind == "LineTimesLattice") {
    L = heis::LineTimesLattice{r.integer("p", 1)};
  } else if (kind == "DiscreteLine") {
    L = heis::DiscreteLine{r.integer("p", 1)};
  } else if (kind == "CenterLattice") {
    L = heis::CenterLattice{};
  } else if (kind == "FullLattice") {
    L = heis::FullLattice{r.integer("p", 1)};
  } else {
    r.fail("unknown subgroup kind '" + kind + "'");
  }
  r.finish();
  heis::validate(L);
  return L;
}

std::string SimulateConfig::system_name() const {
  switch (system.index()) {
    case 0: return "sigma11";
    case 1: return "sigma10";
    case 2: return "sigma0p";
    default: return "conjugation";
  }
}

FlowConfig parse_flow(const Json& j) {
  ObjectReader r(j, "flow");
  FlowConfig c;
  c.field = field_from_json(r.at("field"), "flow.field");
  if (r.has("initial")) {
    auto g = fixed_numbers(r, "initial", 3);
    c.initial = {g[0], g[1], g[2]};
  }
  c.t_start = r.number("t_start", c.t_start);
  c.t_end = r.number("t_end", c.t_end);
  c.samples = r.integer("samples", c.samples);
  c.seed = r.seed();
  r.finish();
  if (c.samples < 1) r.fail("'samples' must be positive");
  if (c.samples == 1 && c.t_start != c.t_end) r.fail("a single sample needs t_start == t_end");
  return c;
}

Json to_json(const FlowConfig& c) {
  Json j;
  j["field"] = field_to_json(c.field);
  j["initial"] = number_array({c.initial.x(), c.initial.y(), c.initial.z});
  j["t_start"] = c.t_start;
  j["t_end"] = c.t_end;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  return j;
}

InvarianceConfig parse_invariance(const Json& j) {
  ObjectReader r(j, "invariance");
  InvarianceConfig c;
  c.subgroup = subgroup_from_json(r.at("subgroup"));
  c.field = field_from_json(r.at("field"), "invariance.field");
  c.samples = r.integer("samples", c.samples);
  if (r.has("times")) c.times = r.numbers("times");
  c.tol = r.number("tol", c.tol);
  c.seed = r.seed();
  r.finish();
  if (c.samples < 1) r.fail("'samples' must be positive");
  if (c.times.empty()) r.fail("'times' must not be empty");
  if (!(c.tol > 0.0)) r.fail("'tol' must be positive");
  return c;
}

Json to_json(const InvarianceConfig& c) {
  Json j;
  j["subgroup"] = subgroup_to_json(c.subgroup);
  j["field"] = field_to_json(c.field);
  j["samples"] = c.samples;
  Json times = Json::array();
  for (double t : c.times) times.push_back(t);
  j["times"] = std::move(times);
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  return j;
}

SimulateConfig parse_simulate(const Json& j) {
  ObjectReader r(j, "simulate");
  SimulateConfig c;
  const std::string name = r.string("system");
  const Json& params = r.at("params");
  std::size_t state_dim = 2;
  if (name == "sigma11") {
    c.system = sigma11_from_json(params, "simulate.params");
  } else if (name == "sigma10") {
    c.system = sigma10_from_json(params, "simulate.params");
  } else if (name == "sigma0p") {
    c.system = sigma0p_from_json(params, "simulate.params");
    state_dim = 3;
  } else if (name == "conjugation") {
    c.system = conjugation_from_json(params, "simulate.params");
    state_dim = 3;
  } else {
    r.fail("'system' must be one of sigma11, sigma10, sigma0p, conjugation");
  }
  c.control_box = box_from_json(r.at("control_box"), "simulate.control_box");
  c.signal = signal_from_json(r.at("signal"), "simulate.signal");
  c.initial = fixed_numbers(r, "initial", state_dim);
  c.dt = r.number("dt", c.dt);
  c.output_stride = r.integer("output_stride", c.output_stride);
  c.seed = r.seed();
  r.finish();
  if (!(c.dt > 0.0)) r.fail("'dt' must be positive");
  if (c.output_stride < 1) r.fail("'output_stride' must be positive");
  c.signal.check_within(c.control_box);
  const int needed = std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, heis::Sigma11Params>) {
          return 1;
        } else if constexpr (std::is_same_v<S, ConjugationSetup>) {
          return static_cast<int>(s.inputs.size());
        } else {
          return 3;
        }
      },
      c.system);
  if (c.control_box.dim() != needed) {
    r.fail("control box has dimension " + std::to_string(c.control_box.dim()) + ", the system takes " +
           std::to_string(needed) + " controls");
  }
  return c;
}

Json to_json(const SimulateConfig& c) {
  Json j;
  j["system"] = c.system_name();
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        Json p;
        if constexpr (std::is_same_v<S, heis::Sigma11Params>) {
          p = sigma11_to_json(s);
        } else if constexpr (std::is_same_v<S, heis::Sigma10Params>) {
          p["lambda"] = s.lambda;
          p["beta"] = s.beta;
          p["alpha"] = s.alpha;
          p["gamma"] = s.gamma;
          p["inputs"] = three_inputs_json(s.inputs);
        } else if constexpr (std::is_same_v<S, heis::Sigma0pParams>) {
          p["p"] = s.p;
          p["beta"] = s.beta;
          p["alpha"] = s.alpha;
          p["gamma"] = s.gamma;
          p["inputs"] = three_inputs_json(s.inputs);
        } else {
          p["quotient"] = s.quotient;
          p["p"] = s.p;
          p["field"] = field_to_json(s.field);
          Json in = Json::array();
          for (const auto& B : s.inputs) in.push_back(algebra_to_json(B));
          p["inputs"] = std::move(in);
        }
        j["params"] = std::move(p);
      },
      c.system);
  j["control_box"] = box_to_json(c.control_box);
  j["signal"] = signal_to_json(c.signal);
  Json init = Json::array();
  for (double x : c.initial) init.push_back(x);
  j["initial"] = std::move(init);
  j["dt"] = c.dt;
  j["output_stride"] = c.output_stride;
  j["seed"] = c.seed;
  return j;
}

ControlSetConfig parse_controlset(const Json& j) {
  ObjectReader r(j, "controlset");
  ControlSetConfig c;
  c.params = sigma11_from_json(r.at("params"), "controlset.params");
  if (r.has("control_box")) c.control_box = box_from_json(r.at("control_box"), "controlset.control_box");
  if (r.has("grid")) c.grid = grid_from_json(r.at("grid"), "controlset.grid");
  c.seed = r.seed();
  r.finish();
  if (c.control_box.dim() != 1) r.fail("the control box must be one-dimensional");
  return c;
}

Json to_json(const ControlSetConfig& c) {
  Json j;
  j["params"] = sigma11_to_json(c.params);
  j["control_box"] = box_to_json(c.control_box);
  j["grid"] = grid_to_json(c.grid);
  j["seed"] = c.seed;
  return j;
}

LarcConfig parse_larc(const Json& j) {
  ObjectReader r(j, "larc");
  LarcConfig c;
  c.params = sigma11_from_json(r.at("params"), "larc.params");
  if (r.has("points")) {
    const Json& pts = r.at("points");
    if (!pts.is_array()) r.fail("'points' must be an array of [s, t] pairs");
    for (const auto& q : pts) {
      if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number()) {
        r.fail("'points' must be an array of [s, t] pairs");
      }
      c.points.push_back({q[0].get<double>(), q[1].get<double>()});
    }
  }
  c.depth = r.integer("depth", c.depth);
  c.generic_points = r.integer("generic_points", c.generic_points);
  c.seed = r.seed();
  r.finish();
  if (c.depth < 2) r.fail("'depth' must be at least 2");
  if (c.generic_points < 0) r.fail("'generic_points' must be non-negative");
  return c;
}

Json to_json(const LarcConfig& c) {
  Json j;
  j["params"] = sigma11_to_json(c.params);
  Json pts = Json::array();
  for (const auto& q : c.points) pts.push_back(number_array({q[0], q[1]}));
  j["points"] = std::move(pts);
  j["depth"] = c.depth;
  j["generic_points"] = c.generic_points;
  j["seed"] = c.seed;
  return j;
}

}  // namespace heisctl
