#pragma once

// File export/import helpers shared by the CLI runner and tests: atomic text
// writes, the grid dump format, and the CSV layouts for trajectories,
// controls, and sweep tables. All writers are deterministic: the same data
// produces byte-identical output.

#include <string>
#include <vector>

#include "goodwill/dynamics.hpp"
#include "goodwill/verify.hpp"

namespace goodwill {

// Write via a temporary file in the same directory plus rename, so a crash
// never leaves a half-written file at `path`.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Grid dump format: line 1 "GRID nx ny L H", then nx*ny row-major cell
// values, one per line, printed with 17 significant digits.
std::string grid_to_text(const GridField& grid);
GridField grid_from_text(const std::string& text);

// CSV of per-mode trajectories: header "t, mode_00, mode_01, ..." in flat
// mode order (n fastest), one row per time sample.
std::string trajectory_csv(const Trajectory& traj);

// Same layout for a sampled control's coefficients.
std::string control_csv(const ControlSignal& u);

// Pointwise dump of a rule control: header "t, xi1, xi2, u", times on a
// uniform grid of `nt` steps over [0, horizon], space on nx-by-ny cell centers.
std::string pointwise_control_csv(const ControlSignal& u, const DomainSpec& domain,
                                  double horizon, int nt, int nx, int ny);

struct SweepRow {
    double k0 = 0.0;
    double value = 0.0;
    double terminal_miss = 0.0;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace goodwill
