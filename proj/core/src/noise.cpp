#include "qb/noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qb/bessel.hpp"

namespace qb {

void LorentzianSpectrum::validate() const {
    std::ostringstream os;
    if (!(Omega >= 0.0) || !std::isfinite(Omega)) os << "Omega must be >= 0; ";
    if (!(lambda_w > 0.0) || !std::isfinite(lambda_w)) os << "lambda must be > 0; ";
    if (!(omega_a > 0.0) || !std::isfinite(omega_a)) os << "omega_a must be > 0; ";
    if (!os.str().empty()) throw InvalidArgument("LorentzianSpectrum: " + os.str());
}

double spectral_density(const LorentzianSpectrum& s, double omega) {
    s.validate();
    if (!(omega > 0.0)) return 0.0;
    const double detuning = omega - s.omega_a;
    const double half_width = 0.5 * s.lambda_w;
    return s.Omega * s.Omega * s.lambda_w /
           (2.0 * std::numbers::pi * (detuning * detuning + half_width * half_width));
}

int sideband_cutoff(double xi) { return static_cast<int>(std::ceil(std::abs(xi))) + 20; }

double effective_rate(const ModulationParams& m, const LorentzianSpectrum& s, double omega0,
                      int cutoff) {
    m.validate();
    s.validate();
    if (!(omega0 > 0.0)) throw InvalidArgument("effective_rate: omega0 must be > 0");
    const double two_pi = 2.0 * std::numbers::pi;
    const double xi = m.amplitude();
    if (xi == 0.0 || m.nu == 0.0) return two_pi * spectral_density(s, omega0);
    const int L = cutoff < 0 ? sideband_cutoff(xi) : cutoff;
    if (L > kBesselMaxOrder) throw InvalidArgument("effective_rate: sideband cutoff too large");
    double sum = 0.0;
    for (int l = -L; l <= L; ++l) {
        const double j = bessel_j(l, xi);
        sum += j * j * spectral_density(s, omega0 + l * m.nu);
    }
    return two_pi * sum;
}

DissipationChannel DissipationChannel::engineered(const ModulationParams& m,
                                                  const LorentzianSpectrum& s, double omega0) {
    return {effective_rate(m, s, omega0)};
}

LindbladSpec dephasing_spec(const DephasingChannel& ch, const SpinSector& sector) {
    if (!(ch.gamma >= 0.0) || !std::isfinite(ch.gamma)) {
        throw InvalidArgument("dephasing_spec: gamma must be >= 0");
    }
    if (!std::isfinite(ch.omega)) throw InvalidArgument("dephasing_spec: omega must be finite");
    const SpinOps s = collective_spin_ops(sector);
    LindbladSpec spec;
    Hamiltonian h(sector);
    h.add(cplx(ch.omega, 0.0) * s.sz);
    spec.hamiltonian = std::move(h);
    spec.jumps.push_back({s.sz, ch.gamma});
    return spec;
}

LindbladSpec dissipation_spec(const DissipationChannel& ch, const SpinSector& sector) {
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
        throw InvalidArgument("dissipation_spec: rate must be >= 0");
    }
    LindbladSpec spec;
    spec.jumps.push_back({collective_spin_ops(sector).sm, ch.rate});
    return spec;
}

}  // namespace qb
