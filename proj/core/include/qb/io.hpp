// io.hpp: CSV, JSON and SVG renderings of trajectories and sweeps.

#pragma once

#include <string>

#include "qb/runner.hpp"

namespace qb {

// Columns t,energy,ergotropy,efficiency,coherence,diag_norm_or_trace_err,min_eig
// at 12 significant digits, after one '#' comment line with units.
std::string trajectory_csv(const TrajectoryRecord& rec);

// {command, config_echo, peak_efficiency, tau_c, final_ergotropy_per_cell,
//  diagnostics{max_norm_err, min_eig}}; absent values are null.
std::string summary_json(const TrajectoryRecord& rec, const ExperimentConfig& cfg);

// Rows follow axis2, columns axis1; the first column holds the axis2 value.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result, const ExperimentConfig& cfg);

std::string trajectory_svg(const TrajectoryRecord& rec);
std::string sweep_svg(const SweepResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace qb
