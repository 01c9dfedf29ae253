#include "qb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace qb {

namespace {

constexpr double kLeakageLimit = 1e-6;
constexpr int kDefaultSamples = 2001;
constexpr int kDefaultSweepStorageSamples = 201;

TimeGrid resolve_grid(const ExperimentConfig& cfg, double default_t1) {
    TimeGrid g;
    g.t1 = default_t1;
    g.n_samples = kDefaultSamples;
    if (cfg.grid) {
        g = *cfg.grid;
        if (std::isnan(g.t1)) g.t1 = default_t1;
    }
    g.validate();
    return g;
}

PureState battery_initial(const InitialStateConfig& init, const SpinSector& sector) {
    switch (init.kind) {
        case InitialStateKind::ground_fock_n: return dicke_state(sector, 0);
        case InitialStateKind::uniform_superposition: return uniform_superposition(sector);
        case InitialStateKind::dicke: return dicke_state(sector, init.dicke_m);
        case InitialStateKind::amplitudes: {
            if (static_cast<int>(init.amplitudes.size()) != sector.dim()) {
                std::ostringstream os;
                os << "initial_state: " << init.amplitudes.size() << " amplitudes given, the sector has "
                   << sector.dim() << " levels";
                throw ConfigError(os.str());
            }
            Vector a(sector.dim());
            for (int i = 0; i < sector.dim(); ++i) a(i) = init.amplitudes[static_cast<std::size_t>(i)];
            if (!(a.norm() > 0.0)) throw ConfigError("initial_state: amplitudes are all zero");
            a.normalize();
            return {sector, a};
        }
        case InitialStateKind::charged:
            throw ConfigError("initial_state 'charged' is only valid for storage runs");
    }
    throw ConfigError("initial_state: unknown kind");
}

// Battery state (x) |N>_c.
PureState charging_initial(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    const JointSpace joint = p.joint();
    if (p.n_max < p.n_cells) {
        throw ConfigError("system.n_max must be >= N to hold the charger state |N>");
    }
    const PureState b = battery_initial(cfg.initial, joint.spin);
    Vector psi = Vector::Zero(joint.dim());
    for (int m = 0; m < joint.spin.dim(); ++m) psi(joint.index(m, p.n_cells)) = b.amplitudes()(m);
    return {joint, psi};
}

double leakage_of(const Matrix& rho, const JointSpace& joint) {
    double out = 0.0;
    const int nf = joint.fock.dim();
    for (int m = 0; m < joint.spin.dim(); ++m) {
        for (int n = std::max(0, nf - 2); n < nf; ++n) {
            out += rho(joint.index(m, n), joint.index(m, n)).real();
        }
    }
    return out;
}

double min_eig_of(const DensityMatrix& rho) {
    const Eigen::VectorXd ev = rho.eigenvalues();
    return ev.size() > 0 ? ev(0) : 0.0;
}

struct BatteryObservables {
    EnergyBasis h_b;
    double supply;  // divisor for the efficiency column
    LogBase base;

    TrajectoryRow row(double t, const DensityMatrix& rho_b, double diag_error,
                      double min_eig) const {
        TrajectoryRow r;
        r.t = t;
        r.energy = mean_energy(rho_b, h_b.h);
        r.ergotropy = ergotropy(rho_b, h_b);
        r.efficiency = r.ergotropy / supply;
        r.coherence = rel_entropy_coherence(rho_b, h_b, base);
        r.diag_error = diag_error;
        r.min_eig = min_eig;
        return r;
    }
};

double charger_supply(const ExperimentConfig& cfg, const PureState& psi0) {
    return mean_energy(partial_trace_charger(psi0), charger_hamiltonian(cfg.system));
}

// Peak of the efficiency column and the truncation check up to it.
void finish_charging(TrajectoryRecord& rec, const std::vector<double>& leakage,
                     const ChargingWindow& window) {
    std::vector<double> t, v;
    t.reserve(rec.rows.size());
    v.reserve(rec.rows.size());
    for (const auto& r : rec.rows) {
        t.push_back(r.t);
        v.push_back(r.efficiency);
    }
    rec.peak = first_prominent_max(t, v);
    const double horizon = std::min(t[rec.peak->index], window.tau_c);
    for (std::size_t i = 0; i < leakage.size(); ++i) {
        rec.max_leakage = std::max(rec.max_leakage, leakage[i]);
        if (t[i] <= horizon) rec.leakage_to_peak = std::max(rec.leakage_to_peak, leakage[i]);
    }
    if (rec.leakage_to_peak > kLeakageLimit) {
        std::ostringstream os;
        os << "Fock truncation: population " << rec.leakage_to_peak
           << " in the top two levels before the efficiency peak exceeds " << kLeakageLimit
           << "; increase system.n_max";
        throw TruncationError(os.str());
    }
}

TrajectoryRecord charging_impl(const ExperimentConfig& cfg, std::vector<Matrix>* battery_states) {
    if (cfg.channel.kind != ChannelKind::none) {
        throw ConfigError("coherent charging requires channel.kind = none");
    }
    const SystemParams& p = cfg.system;
    p.validate();
    const PureState psi0 = charging_initial(cfg);
    const BatteryObservables obs{EnergyBasis(battery_hamiltonian(p)), charger_supply(cfg, psi0),
                                 cfg.output.log_base};
    if (!(obs.supply > 0.0)) throw ConfigError("charging needs a charger with positive energy");

    const Hamiltonian h = build_hamiltonian(cfg.variant, p, cfg.modulation, cfg.window);
    const TimeGrid grid = resolve_grid(cfg, 10.0 / (p.g > 0.0 ? p.g : p.omega0));

    TrajectoryRecord rec;
    rec.command = "charge";
    rec.n_cells = p.n_cells;
    rec.rows.reserve(static_cast<std::size_t>(grid.n_samples));
    std::vector<double> leakage;
    leakage.reserve(static_cast<std::size_t>(grid.n_samples));

    PropagationOptions opts;
    opts.leakage_limit = std::nullopt;  // checked against the peak afterwards
    propagate_state(
        h, psi0, grid,
        [&](const StateSample& s) {
            const DensityMatrix rho_b = partial_trace_battery(s.state);
            rec.rows.push_back(obs.row(s.t, rho_b, s.norm_error, min_eig_of(rho_b)));
            leakage.push_back(s.leakage);
            if (battery_states) battery_states->push_back(rho_b.matrix());
        },
        opts);
    finish_charging(rec, leakage, cfg.window);
    return rec;
}

double dissipation_rate(const ExperimentConfig& cfg) {
    const ChannelConfig& ch = cfg.channel;
    if (ch.gamma0) return *ch.gamma0;
    if (ch.spectrum) return effective_rate(cfg.modulation, *ch.spectrum, cfg.system.omega0);
    throw ConfigError("channel: dissipation needs gamma0 or spectrum = lorentz");
}

LindbladSpec storage_spec(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    const SpinSector sector = p.sector();
    const ChannelConfig& ch = cfg.channel;
    switch (ch.kind) {
        case ChannelKind::none: {
            LindbladSpec spec;
            Hamiltonian h(sector);
            h.add(battery_hamiltonian(p));
            spec.hamiltonian = std::move(h);
            return spec;
        }
        case ChannelKind::dephasing:
            return dephasing_spec({ch.gamma, ch.omega.value_or(p.omega0)}, sector);
        case ChannelKind::dissipation:
            return dissipation_spec({dissipation_rate(cfg)}, sector);
    }
    throw ConfigError("channel: unknown kind");
}

}  // namespace

double TrajectoryRecord::max_diag_error() const {
    double out = 0.0;
    for (const auto& r : rows) out = std::max(out, r.diag_error);
    return out;
}

double TrajectoryRecord::min_eigenvalue() const {
    double out = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) out = std::min(out, r.min_eig);
    return rows.empty() ? 0.0 : out;
}

double TrajectoryRecord::final_ergotropy_per_cell() const {
    if (rows.empty() || n_cells <= 0) return 0.0;
    return rows.back().ergotropy / n_cells;
}

TrajectoryRecord run_charging(const ExperimentConfig& cfg) { return charging_impl(cfg, nullptr); }

TrajectoryRecord run_noisy_charging(const ExperimentConfig& cfg) {
    if (cfg.channel.kind != ChannelKind::dissipation) {
        throw ConfigError("noisy charging requires channel.kind = dissipation");
    }
    if (cfg.variant != HamiltonianVariant::effective && cfg.variant != HamiltonianVariant::tc) {
        throw UnsupportedConfiguration("noisy charging supports the effective and tc variants only");
    }
    const SystemParams& p = cfg.system;
    p.validate();
    const PureState psi0 = charging_initial(cfg);
    const JointSpace joint = p.joint();
    const BatteryObservables obs{EnergyBasis(battery_hamiltonian(p)), charger_supply(cfg, psi0),
                                 cfg.output.log_base};

    LindbladSpec spec;
    spec.hamiltonian = build_hamiltonian(cfg.variant, p, cfg.modulation, cfg.window);
    spec.jumps.push_back({embed_battery(collective_spin_ops(joint.spin).sm, joint),
                          dissipation_rate(cfg)});
    const TimeGrid grid = resolve_grid(cfg, 10.0 / (p.g > 0.0 ? p.g : p.omega0));

    TrajectoryRecord rec;
    rec.command = "charge-noisy";
    rec.n_cells = p.n_cells;
    std::vector<double> leakage;
    propagate_lindblad(spec, DensityMatrix::from_pure(psi0), grid, [&](const DensitySample& s) {
        const DensityMatrix rho_b = partial_trace_battery(s.rho);
        rec.rows.push_back(obs.row(s.t, rho_b, s.trace_error, s.min_eigenvalue));
        leakage.push_back(leakage_of(s.rho.matrix(), joint));
    });
    finish_charging(rec, leakage, cfg.window);
    return rec;
}

DensityMatrix charged_battery_state(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.channel = {};
    c.initial = {};
    c.grid = std::nullopt;
    std::vector<Matrix> states;
    const TrajectoryRecord rec = charging_impl(c, &states);
    Matrix rho = states[rec.peak->index];
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return {c.system.sector(), rho};
}

TrajectoryRecord run_storage(const ExperimentConfig& cfg) {
    const SystemParams& p = cfg.system;
    p.validate();
    const SpinSector sector = p.sector();
    const DensityMatrix rho0 = cfg.initial.kind == InitialStateKind::charged
                                   ? charged_battery_state(cfg)
                                   : DensityMatrix::from_pure(battery_initial(cfg.initial, sector));
    const LindbladSpec spec = storage_spec(cfg);
    const TimeGrid grid = resolve_grid(cfg, 20.0 / p.omega0);
    const BatteryObservables obs{EnergyBasis(battery_hamiltonian(p)), p.n_cells * p.omega0,
                                 cfg.output.log_base};

    TrajectoryRecord rec;
    rec.command = "store";
    rec.n_cells = p.n_cells;
    rec.rows.reserve(static_cast<std::size_t>(grid.n_samples));
    propagate_lindblad(spec, rho0, grid, [&](const DensitySample& s) {
        rec.rows.push_back(obs.row(s.t, s.rho, s.trace_error, s.min_eigenvalue));
    });
    return rec;
}

TrajectoryRecord run_command(const std::string& command, const ExperimentConfig& cfg) {
    if (command == "charge") {
        if (cfg.channel.kind == ChannelKind::dissipation) return run_noisy_charging(cfg);
        if (cfg.channel.kind == ChannelKind::dephasing) {
            throw ConfigError("charge: the dephasing channel is only available for storage runs");
        }
        return run_charging(cfg);
    }
    if (command == "store") return run_storage(cfg);
    throw ConfigError("unknown command '" + command + "'");
}

ExperimentConfig sweep_cell_config(const ExperimentConfig& cfg, const SweepGrid& grid, int i1,
                                   int i2) {
    ExperimentConfig c = cfg;
    auto set = [&](const AxisRange& axis, int i) {
        const double v = axis.value(i);
        switch (axis.axis) {
            case SweepAxis::xi: c.modulation.xi = v; break;
            case SweepAxis::g: c.system.g = v; break;
            case SweepAxis::tau_s: {
                TimeGrid g;
                g.n_samples = kDefaultSweepStorageSamples;
                if (cfg.grid) {
                    g.n_samples = cfg.grid->n_samples;
                    g.dt_max = cfg.grid->dt_max;
                }
                g.t0 = 0.0;
                g.t1 = v;
                c.grid = g;
                break;
            }
        }
    };
    set(grid.axis1, i1);
    set(grid.axis2, i2);
    return c;
}

double sweep_cell_value(const ExperimentConfig& cell, SweepObservable observable) {
    if (observable == SweepObservable::peak_efficiency) {
        return run_command("charge", cell).peak->value;
    }
    return run_storage(cell).rows.back().efficiency;
}

SweepResult sweep2d(const ExperimentConfig& cfg, const SweepGrid& grid) {
    grid.validate();
    SweepResult out;
    out.grid = grid;
    out.axis1 = grid.axis1.values();
    out.axis2 = grid.axis2.values();
    const int n1 = grid.axis1.count;
    const int n2 = grid.axis2.count;
    out.values = Eigen::MatrixXd::Constant(n2, n1, std::numeric_limits<double>::quiet_NaN());

    std::vector<std::string> errors(static_cast<std::size_t>(n1 * n2));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next++; k < n1 * n2; k = next++) {
            const int i2 = k / n1;
            const int i1 = k % n1;
            try {
                out.values(i2, i1) =
                    sweep_cell_value(sweep_cell_config(cfg, grid, i1, i2), grid.observable);
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << to_string(grid.axis1.axis) << "=" << out.axis1[i1] << ", "
                   << to_string(grid.axis2.axis) << "=" << out.axis2[i2] << ": " << e.what();
                errors[static_cast<std::size_t>(k)] = os.str();
            }
        }
    };

    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n1 * n2);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (!e.empty()) out.errors.push_back(std::move(e));
    }
    return out;
}

}  // namespace qb
