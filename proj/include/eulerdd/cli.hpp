#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eulerdd/config.hpp"

namespace eulerdd {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

// Entry point of the eulerdd tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommands on an already validated config.
int cmd_list(bool json, std::ostream& out);
int cmd_verify(const RunConfig& config, bool json, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_export_schedule(const RunConfig& config, std::ostream& out, std::ostream& err);

// Machine-readable verification summary; contains no timings, so identical
// configs give identical documents.
Json verify_summary(const RunConfig& config, const Scenario& scenario, const VerifyReport& report);
std::string sweep_csv(const ScalingTable& table);

}  // namespace eulerdd
