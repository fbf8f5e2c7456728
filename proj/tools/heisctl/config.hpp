#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "heis/analysis.hpp"
#include "heis/induced.hpp"
#include "heis/subgroups.hpp"

namespace heisctl {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent configuration document.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FlowConfig {
  heis::LinearField field;
  heis::GroupElement initial;
  double t_start = 0.0;
  double t_end = 1.0;
  int samples = 11;
  std::uint64_t seed = 0;
};

struct InvarianceConfig {
  heis::SubgroupKind subgroup = heis::LineTimesLattice{1};
  heis::LinearField field;
  int samples = 64;
  std::vector<double> times = heis::BruteForceOptions{}.times;
  double tol = heis::kDefaultTol;
  std::uint64_t seed = 0;
};

// Upstairs system for the conjugation demo, compared against the system it
// induces on the quotient by R e1 x Z p ("1p") or Z e1 x Z p ("0p").
struct ConjugationSetup {
  std::string quotient = "1p";
  int p = 1;
  heis::LinearField field;
  std::vector<heis::AlgebraElement> inputs;
};

struct SimulateConfig {
  using System = std::variant<heis::Sigma11Params, heis::Sigma10Params, heis::Sigma0pParams, ConjugationSetup>;

  System system = heis::Sigma11Params{};
  heis::ControlBox control_box = heis::ControlBox::interval(-1.0, 1.0);
  heis::ControlSignal signal = heis::ControlSignal::constant(1.0, 0.0);
  std::vector<double> initial;  // (s, t), (u, s, t), or (x, y, z) for the conjugation demo
  double dt = 1e-3;
  int output_stride = 1;
  std::uint64_t seed = 0;

  std::string system_name() const;
};

struct ControlSetConfig {
  heis::Sigma11Params params;
  heis::ControlBox control_box = heis::ControlBox::interval(-1.0, 1.0);
  heis::GridConfig grid;
  std::uint64_t seed = 0;
};

struct LarcConfig {
  heis::Sigma11Params params;
  std::vector<std::array<double, 2>> points;  // empty: draw generic points from the seed
  int depth = 3;
  int generic_points = 10;
  std::uint64_t seed = 0;
};

FlowConfig parse_flow(const Json& j);
InvarianceConfig parse_invariance(const Json& j);
SimulateConfig parse_simulate(const Json& j);
ControlSetConfig parse_controlset(const Json& j);
LarcConfig parse_larc(const Json& j);

Json to_json(const FlowConfig& c);
Json to_json(const InvarianceConfig& c);
Json to_json(const SimulateConfig& c);
Json to_json(const ControlSetConfig& c);
Json to_json(const LarcConfig& c);

Json subgroup_to_json(const heis::SubgroupKind& L);
heis::SubgroupKind subgroup_from_json(const Json& j);

}  // namespace heisctl
