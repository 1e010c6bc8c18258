#pragma once

#include "solfv/config.hpp"

namespace solfv {

/// Command entry points shared by the CLI and the tests. Each writes its CSV
/// outputs plus manifest.csv under config.out_dir and returns the process
/// exit code: 0 on success, 3 when a run stopped on blow-up or lost
/// positivity (the outputs written so far are kept and listed in the
/// manifest). Configuration problems throw ConfigError.
int cmd_run(const RunConfig& config, bool emit_plots = false);
int cmd_sweep_eps(const SweepConfig& config, bool emit_plots = false);
int cmd_mesh_study(const MeshStudyConfig& config, bool emit_plots = false);
int cmd_eta_study(const EtaStudyConfig& config, bool emit_plots = false);

}  // namespace solfv
