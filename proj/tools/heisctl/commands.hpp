#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "heisctl/config.hpp"

namespace heisctl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Writes "t,x,y,z" rows of the flow sampled on [t_start, t_end].
void write_flow(const FlowConfig& cfg, std::ostream& csv);

Json invariance_report(const InvarianceConfig& cfg);

/// Writes the trajectory CSV. Returns a summary only for the conjugation
/// demo (null otherwise).
Json run_simulate(const SimulateConfig& cfg, std::ostream* csv);

/// Writes the occupancy grid when `csv` is non-null and returns the summary.
Json run_controlset(const ControlSetConfig& cfg, std::ostream* csv);

Json larc_report(const LarcConfig& cfg);

/// Full command line: parses arguments, runs the subcommand and maps errors
/// to exit codes. JSON summaries go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formats with 17 significant digits.
std::string format_double(double x);

}  // namespace heisctl
