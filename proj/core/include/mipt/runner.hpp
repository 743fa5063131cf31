#pragma once

#include <string>

#include "mipt/runconfig.hpp"

namespace mipt {

struct RunOutcome {
  std::string csv_path;
  long data_rows = 0;
};

/// Executes a validated config and writes its CSV. Sweep points (chain
/// lengths and measurement rates) are independent jobs and may run on
/// `threads` workers; results are merged in a fixed order so the output is
/// byte-identical for any thread count.
///
/// Time-series files carry rows `t,gamma,L_A,value`; saturation files carry
/// `sweep_var,gamma,value,stderr` where sweep_var is the chain length when
/// sweep_sites is set and the subsystem size otherwise. Every file starts
/// with a `## mipt-sim <version>` line followed by the full config echo as
/// `# key = value` lines.
RunOutcome run(const RunConfig& cfg, int threads = 1);

}  // namespace mipt
