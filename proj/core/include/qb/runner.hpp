// runner.hpp: charging, noisy charging and storage scenarios, plus 2-D sweeps.
//
// Every scenario reduces the propagated state to the battery and records one
// TrajectoryRow per output sample. Energies are in units of ω0, time in 1/ω0.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qb/config.hpp"

namespace qb {

struct TrajectoryRow {
    double t{0.0};
    double energy{0.0};      // <ω0 Sz> of the battery
    double ergotropy{0.0};
    double efficiency{0.0};  // ergotropy / charger supply, or ergotropy / (N ω0) in storage
    double coherence{0.0};
    double diag_error{0.0};  // norm error (pure) or trace error (mixed)
    double min_eig{0.0};     // smallest eigenvalue of the propagated state
};

struct TrajectoryRecord {
    std::string command;  // "charge", "charge-noisy" or "store"
    int n_cells{0};
    std::vector<TrajectoryRow> rows;

    // First prominent maximum of the efficiency column (charging runs only).
    std::optional<PeakResult> peak;
    // Largest top-Fock population up to the peak (joint layouts only).
    double leakage_to_peak{0.0};
    double max_leakage{0.0};

    double max_diag_error() const;
    double min_eigenvalue() const;
    double final_ergotropy_per_cell() const;
};

// Coherent charging; the battery starts in the configured state (default
// |N/2,-N/2>) and the charger in |N>.
TrajectoryRecord run_charging(const ExperimentConfig& cfg);

// Charging with collective decay S- (x) I at channel.gamma0 (or the engineered
// rate when a spectrum is configured).
TrajectoryRecord run_noisy_charging(const ExperimentConfig& cfg);

// Battery-only Lindblad evolution under the configured channel.
TrajectoryRecord run_storage(const ExperimentConfig& cfg);

// Battery state at τ_c of a coherent charging run with the same system and
// modulation, normalized to unit trace.
DensityMatrix charged_battery_state(const ExperimentConfig& cfg);

// "charge" dispatches to run_noisy_charging when the channel is dissipation.
TrajectoryRecord run_command(const std::string& command, const ExperimentConfig& cfg);

struct SweepResult {
    SweepGrid grid;
    std::vector<double> axis1;  // columns
    std::vector<double> axis2;  // rows
    Eigen::MatrixXd values;     // (axis2 index, axis1 index); NaN on failed cells
    std::vector<std::string> errors;

    bool ok() const noexcept { return errors.empty(); }
};

// Configuration used for the cell (i1, i2); a single run of it reproduces the
// cell value.
ExperimentConfig sweep_cell_config(const ExperimentConfig& cfg, const SweepGrid& grid, int i1,
                                   int i2);
// Scalar observable of one cell configuration.
double sweep_cell_value(const ExperimentConfig& cell, SweepObservable observable);

// Cells are independent and evaluated on up to `cfg.threads` threads
// (0 = hardware concurrency).
SweepResult sweep2d(const ExperimentConfig& cfg, const SweepGrid& grid);

}  // namespace qb
