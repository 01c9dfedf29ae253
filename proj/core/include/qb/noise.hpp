// noise.hpp: Lorentzian bath, modulation-engineered decay rate Γ(ξ,ν), and
// the two storage channels as Lindblad specs on the battery sector.

#pragma once

#include "qb/dynamics.hpp"
#include "qb/hilbert.hpp"
#include "qb/model.hpp"

namespace qb {

struct LorentzianSpectrum {
    double Omega{1.0};     // characteristic coupling
    double lambda_w{4.0};  // width
    double omega_a{1.0};   // centre frequency

    void validate() const;
};

// Ω²λ / (2π[(ω - ω_a)² + (λ/2)²]) for ω > 0, zero otherwise.
double spectral_density(const LorentzianSpectrum& s, double omega);

// Sideband cutoff max(ceil|ξ|) + 20 used by effective_rate.
int sideband_cutoff(double xi);

// 2π sum_{|l| <= L} J_l(ξ)² D(ω0 + lν). Returns Γ0 = 2πD(ω0) exactly when
// ξ = 0 or ν = 0. `cutoff` < 0 selects sideband_cutoff(ξ).
double effective_rate(const ModulationParams& m, const LorentzianSpectrum& s, double omega0,
                      int cutoff = -1);

struct DephasingChannel {
    double gamma{0.0};  // dephasing rate
    double omega{1.0};  // precession frequency of the unitary part
};

struct DissipationChannel {
    double rate{0.0};

    // Rate derived from a spectrum and modulation via effective_rate.
    static DissipationChannel engineered(const ModulationParams& m, const LorentzianSpectrum& s,
                                         double omega0);
};

// H = ω Sz, single jump (Sz, γ).
LindbladSpec dephasing_spec(const DephasingChannel& ch, const SpinSector& sector);
// No Hamiltonian, single jump (S-, Γ).
LindbladSpec dissipation_spec(const DissipationChannel& ch, const SpinSector& sector);

}  // namespace qb
