#pragma once

#include <cstdint>
#include <iosfwd>

#include "qlvar_cli/report.hpp"
#include "qlvar_cli/scenario.hpp"

namespace qlvar::cli {

struct RunOptions {
  int threads = 1;                   // sweep workers
  std::uint64_t seed = 20240611;     // check-static sampling
};

/// Reads QLVAR_THREADS and QLVAR_SEED.
[[nodiscard]] RunOptions options_from_environment();

/// Executes `op` on the scenario. Library errors propagate as qlvar::Error.
/// Node and profile dumps go to scenario.out_dir when it is set.
[[nodiscard]] RunReport run(const Scenario& scenario, Operation op, const RunOptions& options = {});

/// 0 on success, 2 when a theorem hypothesis is violated, 1 when a check
/// missed its tolerance.
[[nodiscard]] int exit_code(const RunReport& report);

/// Full command line: subcommand, flags, report emission and exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlvar::cli
