#pragma once

#include <string>

#include "config.hpp"

namespace rnlw::cli {

// Exit codes: 0 ok, 1 a check failed or the run aborted, 2 configuration error.
inline constexpr int kExitOk = 0, kExitFail = 1, kExitConfig = 2;

int cmd_randomize(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_decompose(const RunConfig& cfg);
int cmd_functionals(const RunConfig& cfg);
int cmd_mc(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

// by subcommand name; unknown names are a ConfigError
int run_command(const std::string& name, const RunConfig& cfg);

}  // namespace rnlw::cli
