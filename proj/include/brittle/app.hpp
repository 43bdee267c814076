#pragma once

#include <iosfwd>

#include "brittle/config.hpp"

namespace brittle {

// Exit codes: 0 success, 1 invalid configuration, 2 solver or I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFailure = 2;

// Validates the configuration, runs the experiment, writes its artifacts
// and the manifest into config.output. Progress and errors go to `log`.
int run_experiment(const RunConfig& config, std::ostream& log);

}  // namespace brittle
