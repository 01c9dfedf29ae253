// model.hpp: battery-charger parameters and the four Hamiltonian variants
//
//   lab                ω0 Sz + ωc c†c + λ(t) g Sx (c + c†) + ξν cos(νt) (Sz + c†c)
//   interaction_exact  (g/2)(S+ c + h.c.) + (g/2)(S- c e^{-2iω0 t - 2iξ sin νt} + h.c.)
//   effective          (g/2)(S+ c + h.c.) + (g/2) J0(2ξ) (S- c e^{-2iω0 t} + h.c.)
//   tc                 (g/2)(S+ c + h.c.)
//
// The three interaction-picture variants are taken with respect to
// ω0 (Sz + c†c) + ξν cos(νt)(Sz + c†c) and therefore require ωc = ω0.

#pragma once

#include <limits>
#include <string>

#include "qb/hilbert.hpp"
#include "qb/time_operator.hpp"

namespace qb {

struct SystemParams {
    int n_cells{8};
    double omega0{1.0};   // battery gap, the global energy unit
    double omega_c{1.0};  // charger frequency
    double g{1.0};        // Rabi frequency
    int n_max{40};        // Fock truncation

    void validate() const;
    bool resonant() const noexcept;
    SpinSector sector() const { return SpinSector(n_cells); }
    FockSpace fock() const { return FockSpace(n_max); }
    JointSpace joint() const { return {sector(), fock()}; }
};

struct ModulationParams {
    double xi{0.0};  // amplitude (dimensionless)
    double nu{0.0};  // frequency, units of ω0

    void validate() const;
    // Only |ξ| enters the physics; the sign is a gauge choice.
    double amplitude() const noexcept { return xi < 0.0 ? -xi : xi; }
    // Counter-rotating prefactor J0(2ξ).
    double cr_factor() const;
};

struct ChargingWindow {
    double tau_c{std::numeric_limits<double>::infinity()};

    static ChargingWindow always_on() { return {}; }
    void validate() const;
    double lambda(double t) const noexcept { return (t >= 0.0 && t <= tau_c) ? 1.0 : 0.0; }
    bool is_always_on() const noexcept { return tau_c == std::numeric_limits<double>::infinity(); }
};

enum class HamiltonianVariant { lab, interaction_exact, effective, tc };

std::string to_string(HamiltonianVariant v);
HamiltonianVariant parse_variant(const std::string& name);

Hamiltonian lab_hamiltonian(const SystemParams& p, const ModulationParams& m,
                            const ChargingWindow& w = ChargingWindow::always_on());
Hamiltonian exact_interaction_hamiltonian(const SystemParams& p, const ModulationParams& m);
Hamiltonian effective_hamiltonian(const SystemParams& p, const ModulationParams& m);
Hamiltonian tc_hamiltonian(const SystemParams& p);

// Dispatches on the variant; the interaction-picture variants are switched off
// outside the charging window as well.
Hamiltonian build_hamiltonian(HamiltonianVariant variant, const SystemParams& p,
                              const ModulationParams& m,
                              const ChargingWindow& w = ChargingWindow::always_on());

Operator h_lab(const SystemParams& p, const ModulationParams& m, const ChargingWindow& w, double t);
Operator h_int_exact(const SystemParams& p, const ModulationParams& m, double t);
Operator h_int_effective(const SystemParams& p, const ModulationParams& m, double t);
Operator h_tc(const SystemParams& p);

// ω0 Sz on the battery sector.
Operator battery_hamiltonian(const SystemParams& p);
// ωc c†c on the charger space.
Operator charger_hamiltonian(const SystemParams& p);

}  // namespace qb
