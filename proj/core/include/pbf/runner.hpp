#pragma once

#include <ostream>

#include "pbf/config.hpp"
#include "pbf/io.hpp"

namespace pbf {

/// Command entry points shared by the CLI and the test drivers.  Artifacts
/// land in the config's output directory; `log` receives progress lines.
/// Exit codes: 0 success, 1 runtime or criterion failure, 2 config error.
int cmd_solve(const RunConfig& c, std::ostream& log);
int cmd_energy(const RunConfig& c, std::ostream& log);
int cmd_force(const RunConfig& c, std::ostream& log);
int cmd_validate(const RunConfig& c, std::ostream& log);

void apply_thread_setting(int threads);

}  // namespace pbf
