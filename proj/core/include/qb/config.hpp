// config.hpp: experiment configuration and its flat-sectioned text format
//
//   [system]
//   N = 8
//   g = 1.0
//   [modulation]
//   xi = 1.202
//
// Every key can be overridden as section.key=value. Unknown sections or keys
// are rejected with ConfigError.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qb/dynamics.hpp"
#include "qb/model.hpp"
#include "qb/noise.hpp"
#include "qb/observables.hpp"

namespace qb {

enum class ChannelKind { none, dephasing, dissipation };

struct ChannelConfig {
    ChannelKind kind{ChannelKind::none};
    double gamma{0.0};                    // dephasing rate
    std::optional<double> omega;          // dephasing precession; defaults to omega0
    std::optional<double> gamma0;         // direct dissipation rate
    std::optional<LorentzianSpectrum> spectrum;  // engineered dissipation rate
};

enum class InitialStateKind { ground_fock_n, uniform_superposition, dicke, amplitudes, charged };

struct InitialStateConfig {
    InitialStateKind kind{InitialStateKind::ground_fock_n};
    int dicke_m{0};                // m_index for `dicke`
    std::vector<double> amplitudes;  // battery amplitudes for `amplitudes`
};

enum class SweepAxis { xi, g, tau_s };
enum class SweepObservable { peak_efficiency, ergotropy_at_time };

struct AxisRange {
    SweepAxis axis{SweepAxis::xi};
    double start{0.0};
    double stop{1.0};
    int count{2};

    double value(int i) const noexcept;
    std::vector<double> values() const;
};

struct SweepGrid {
    AxisRange axis1{SweepAxis::xi, 0.0, 3.0, 8};
    AxisRange axis2{SweepAxis::g, 0.25, 2.0, 13};
    SweepObservable observable{SweepObservable::peak_efficiency};

    void validate() const;
};

struct OutputConfig {
    std::string csv;
    std::string json;
    std::string plot;  // SVG path prefix; empty disables plots
    LogBase log_base{LogBase::natural};
};

struct ExperimentConfig {
    SystemParams system;
    bool n_max_explicit{false};  // otherwise max(5N, 30)
    ModulationParams modulation;
    ChargingWindow window;       // infinite tau_c = auto
    HamiltonianVariant variant{HamiltonianVariant::effective};
    ChannelConfig channel;
    InitialStateConfig initial;
    std::optional<TimeGrid> grid;  // nullopt: scenario default
    OutputConfig output;
    SweepGrid sweep;
    int threads{0};  // 0: hardware concurrency

    // Flat key/value echo of the resolved configuration.
    std::map<std::string, std::string> echo() const;
};

std::string to_string(ChannelKind k);
std::string to_string(SweepAxis a);
std::string to_string(SweepObservable o);
SweepAxis parse_axis(const std::string& s);

// section.key -> raw value, in file order of assignment.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);
// "section.key=value" into entries (replacing any earlier value).
void apply_override(ConfigEntries& entries, const std::string& assignment);

// Resolves entries into a configuration; unknown keys throw ConfigError.
ExperimentConfig build_config(const ConfigEntries& entries);

// Charging runs default to n_max = max(5N, 30) unless set explicitly.
int default_n_max(int n_cells);

}  // namespace qb
