#include "qb/model.hpp"

#include <cmath>
#include <sstream>

#include "qb/bessel.hpp"

namespace qb {

void SystemParams::validate() const {
    std::ostringstream os;
    if (n_cells < 1) os << "N must be >= 1 (got " << n_cells << "); ";
    if (n_max < 1) os << "n_max must be >= 1 (got " << n_max << "); ";
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) os << "omega0 must be > 0; ";
    if (!std::isfinite(omega_c)) os << "omega_c must be finite; ";
    if (!(g >= 0.0) || !std::isfinite(g)) os << "g must be >= 0; ";
    if (!os.str().empty()) throw InvalidArgument("SystemParams: " + os.str());
}

bool SystemParams::resonant() const noexcept {
    return std::abs(omega_c - omega0) <= 1e-12 * std::abs(omega0);
}

void ModulationParams::validate() const {
    if (!std::isfinite(xi)) throw InvalidArgument("ModulationParams: xi must be finite");
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw InvalidArgument("ModulationParams: nu must be >= 0");
    }
}

double ModulationParams::cr_factor() const { return bessel_j(0, 2.0 * amplitude()); }

void ChargingWindow::validate() const {
    if (!(tau_c > 0.0)) throw InvalidArgument("ChargingWindow: tau_c must be > 0");
}

std::string to_string(HamiltonianVariant v) {
    switch (v) {
        case HamiltonianVariant::lab: return "lab";
        case HamiltonianVariant::interaction_exact: return "interaction_exact";
        case HamiltonianVariant::effective: return "effective";
        case HamiltonianVariant::tc: return "tc";
    }
    return "unknown";
}

HamiltonianVariant parse_variant(const std::string& name) {
    if (name == "lab") return HamiltonianVariant::lab;
    if (name == "interaction_exact" || name == "exact") return HamiltonianVariant::interaction_exact;
    if (name == "effective") return HamiltonianVariant::effective;
    if (name == "tc") return HamiltonianVariant::tc;
    throw InvalidArgument("unknown Hamiltonian variant '" + name +
                          "' (expected lab, interaction_exact, effective or tc)");
}

namespace {

struct JointOps {
    JointSpace joint;
    Operator sz, n, sx_x, sp_c, sm_c;
};

JointOps joint_ops(const SystemParams& p) {
    p.validate();
    const JointSpace j = p.joint();
    const SpinOps s = collective_spin_ops(j.spin);
    const FockOps f = fock_ops(j.fock);
    return {j,
            embed_battery(s.sz, j),
            embed_charger(f.num, j),
            tensor(s.sx, f.c + f.cdag),
            tensor(s.sp, f.c),
            tensor(s.sm, f.c)};
}

void require_resonance(const SystemParams& p, const char* what) {
    if (!p.resonant()) {
        std::ostringstream os;
        os << what << ": interaction-picture Hamiltonians require omega_c == omega0 (got omega_c="
           << p.omega_c << ", omega0=" << p.omega0 << ")";
        throw UnsupportedConfiguration(os.str());
    }
}

// (g/2)(S+ c + S- c†)
Operator rotating_term(const JointOps& o, double g) {
    return cplx(0.5 * g, 0.0) * (o.sp_c + o.sp_c.adjoint());
}

}  // namespace

Hamiltonian lab_hamiltonian(const SystemParams& p, const ModulationParams& m,
                            const ChargingWindow& w) {
    m.validate();
    w.validate();
    const JointOps o = joint_ops(p);
    Hamiltonian h(o.joint);
    h.add(cplx(p.omega0, 0.0) * o.sz + cplx(p.omega_c, 0.0) * o.n);
    if (p.g != 0.0) {
        const Operator coupling = cplx(p.g, 0.0) * o.sx_x;
        if (w.is_always_on()) {
            h.add(coupling);
        } else {
            h.add(coupling, [w](double t) { return cplx(w.lambda(t), 0.0); }, 1.0);
        }
    }
    const double xi = m.amplitude();
    if (xi != 0.0 && m.nu != 0.0) {
        const double amp = xi * m.nu;
        const double nu = m.nu;
        h.add(o.sz + o.n, [amp, nu](double t) { return cplx(amp * std::cos(nu * t), 0.0); }, amp);
    }
    return h;
}

namespace {

// Interaction-picture variants share the rotating term; λ(t) multiplies every
// coefficient when the charging window is finite.
Hamiltonian interaction_picture(HamiltonianVariant variant, const SystemParams& p,
                                const ModulationParams& m, const ChargingWindow& w) {
    const JointOps o = joint_ops(p);
    Hamiltonian h(o.joint);
    const bool gated = !w.is_always_on();
    auto lam = [w](double t) { return w.lambda(t); };

    if (gated) {
        h.add(rotating_term(o, p.g), [lam](double t) { return cplx(lam(t), 0.0); }, 1.0);
    } else {
        h.add(rotating_term(o, p.g));
    }
    if (variant == HamiltonianVariant::tc) return h;

    const double w0 = p.omega0;
    TimeDependentOperator::Coefficient phase;
    double bound = 0.0;
    if (variant == HamiltonianVariant::interaction_exact) {
        const double half_g = 0.5 * p.g;
        const double xi = m.amplitude();
        const double nu = m.nu;
        bound = half_g;
        phase = [half_g, w0, xi, nu](double t) {
            return half_g * std::exp(cplx(0.0, -2.0 * w0 * t - 2.0 * xi * std::sin(nu * t)));
        };
    } else {
        const double cr = 0.5 * p.g * m.cr_factor();
        if (cr == 0.0) return h;
        bound = std::abs(cr);
        phase = [cr, w0](double t) { return cr * std::exp(cplx(0.0, -2.0 * w0 * t)); };
    }
    if (gated) {
        phase = [phase, lam](double t) { return lam(t) * phase(t); };
    }
    h.add(o.sm_c, phase, bound);
    h.add(o.sm_c.adjoint(), [phase](double t) { return std::conj(phase(t)); }, bound);
    return h;
}

}  // namespace

Hamiltonian exact_interaction_hamiltonian(const SystemParams& p, const ModulationParams& m) {
    m.validate();
    require_resonance(p, "h_int_exact");
    return interaction_picture(HamiltonianVariant::interaction_exact, p, m,
                               ChargingWindow::always_on());
}

Hamiltonian effective_hamiltonian(const SystemParams& p, const ModulationParams& m) {
    m.validate();
    require_resonance(p, "h_int_effective");
    return interaction_picture(HamiltonianVariant::effective, p, m, ChargingWindow::always_on());
}

Hamiltonian tc_hamiltonian(const SystemParams& p) {
    return interaction_picture(HamiltonianVariant::tc, p, ModulationParams{},
                               ChargingWindow::always_on());
}

Hamiltonian build_hamiltonian(HamiltonianVariant variant, const SystemParams& p,
                              const ModulationParams& m, const ChargingWindow& w) {
    w.validate();
    m.validate();
    switch (variant) {
        case HamiltonianVariant::lab:
            return lab_hamiltonian(p, m, w);
        case HamiltonianVariant::interaction_exact:
            require_resonance(p, "h_int_exact");
            break;
        case HamiltonianVariant::effective:
            require_resonance(p, "h_int_effective");
            break;
        case HamiltonianVariant::tc:
            break;
    }
    return interaction_picture(variant, p, m, w);
}

Operator h_lab(const SystemParams& p, const ModulationParams& m, const ChargingWindow& w, double t) {
    return lab_hamiltonian(p, m, w).at(t);
}

Operator h_int_exact(const SystemParams& p, const ModulationParams& m, double t) {
    return exact_interaction_hamiltonian(p, m).at(t);
}

Operator h_int_effective(const SystemParams& p, const ModulationParams& m, double t) {
    return effective_hamiltonian(p, m).at(t);
}

Operator h_tc(const SystemParams& p) { return tc_hamiltonian(p).at(0.0); }

Operator battery_hamiltonian(const SystemParams& p) {
    p.validate();
    return cplx(p.omega0, 0.0) * collective_spin_ops(p.sector()).sz;
}

Operator charger_hamiltonian(const SystemParams& p) {
    p.validate();
    return cplx(p.omega_c, 0.0) * fock_ops(p.fock()).num;
}

}  // namespace qb
