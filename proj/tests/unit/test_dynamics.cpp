#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qb/dynamics.hpp"
#include "qb/noise.hpp"

using namespace qb;

namespace {

SystemParams system(int cells, int n_max, double g = 1.0) {
    SystemParams p;
    p.n_cells = cells;
    p.n_max = n_max;
    p.g = g;
    return p;
}

TimeGrid grid(double t1, int samples, double dt_max = 1e-3) {
    TimeGrid g;
    g.t1 = t1;
    g.n_samples = samples;
    g.dt_max = dt_max;
    return g;
}

PureState charger_start(const SystemParams& p) { return basis_state(p.joint(), 0, p.n_cells); }

Eigen::VectorXd battery_populations(const PureState& psi) {
    return partial_trace_battery(psi).matrix().diagonal().real();
}

}  // namespace

TEST_CASE("step plan honours the norm rule and lands on samples") {
    const TimeGrid g = grid(2.0, 11, 1e-3);
    const StepPlan a = plan_steps(g, 10.0);
    CHECK(a.dt * 10.0 <= kStepNormProduct + 1e-15);
    CHECK(a.dt * a.steps_per_sample == doctest::Approx(0.2).epsilon(1e-14));
    const StepPlan b = plan_steps(g, 1e-3);
    CHECK(b.dt <= 1e-3 + 1e-15);
    CHECK_THROWS_AS(plan_steps(grid(1.0, 1), 1.0), InvalidArgument);
    CHECK_THROWS_AS(plan_steps(grid(-1.0, 5), 1.0), InvalidArgument);
}

TEST_CASE("constant Hamiltonian propagation matches the exact exponential") {
    const SystemParams p = system(2, 4, 0.8);
    const Hamiltonian h = tc_hamiltonian(p);
    const PureState psi0 = charger_start(p);
    const TimeGrid g = grid(3.0, 7);
    const auto samples = propagate_state(h, psi0, g);
    REQUIRE(samples.size() == 7);
    const Matrix hm = h.at(0.0).matrix();
    for (const auto& s : samples) {
        const Vector ref = oracle::unitary_step(hm, s.t) * psi0.amplitudes();
        CHECK((s.state.amplitudes() - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("single cell Tavis-Cummings Rabi oscillation") {
    for (double g : {0.5, 1.0, 2.0}) {
        const SystemParams p = system(1, 3, g);
        const auto samples = propagate_state(tc_hamiltonian(p), charger_start(p), grid(10.0, 201));
        double worst = 0.0;
        for (const auto& s : samples) {
            const double ref = std::pow(std::sin(0.5 * g * s.t), 2);
            worst = std::max(worst, std::abs(battery_populations(s.state)(1) - ref));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("time-dependent propagation converges under step halving") {
    const SystemParams p = system(2, 5);
    const ModulationParams m{0.9, 3.0};
    const Hamiltonian h = exact_interaction_hamiltonian(p, m);
    const PureState psi0 = charger_start(p);
    const auto coarse = propagate_state(h, psi0, grid(2.0, 5, 2e-3));
    const auto fine = propagate_state(h, psi0, grid(2.0, 5, 1e-3));
    const auto finer = propagate_state(h, psi0, grid(2.0, 5, 5e-4));
    const double e1 = (coarse.back().state.amplitudes() - finer.back().state.amplitudes()).norm();
    const double e2 = (fine.back().state.amplitudes() - finer.back().state.amplitudes()).norm();
    CHECK(e1 < 1e-8);
    // Fourth order: halving the step cuts the error by about 16.
    if (e1 > 1e-13) CHECK(e2 < e1 / 8.0);
}

TEST_CASE("amplitude ladder equations agree with dense propagation") {
    for (int cells : {1, 2, 3}) {
        CAPTURE(cells);
        const SystemParams p = system(cells, cells + 6);
        for (double xi : {0.0, 0.7}) {
            const ModulationParams m{xi, 0.0};
            const TimeGrid g = grid(4.0, 41);
            const auto dense = propagate_state(effective_hamiltonian(p, m), charger_start(p), g);
            const auto amps = propagate_amplitudes(p, m, g, {1e-8, std::nullopt});
            REQUIRE(dense.size() == amps.size());
            double worst = 0.0;
            for (std::size_t i = 0; i < dense.size(); ++i) {
                const PureState a = amplitudes_to_state(amps[i].amplitudes, p.joint());
                worst = std::max(worst, (battery_populations(a) - battery_populations(dense[i].state))
                                            .cwiseAbs()
                                            .maxCoeff());
                worst = std::max(worst, (a.amplitudes() - dense[i].state.amplitudes()).cwiseAbs().maxCoeff());
            }
            CHECK(worst < 1e-9);
        }
    }
}

TEST_CASE("tolerance and truncation failures are reported") {
    const SystemParams p = system(2, 2);
    const PureState psi0 = charger_start(p);
    PropagationOptions strict;
    strict.norm_tolerance = 1e-300;
    CHECK_THROWS_AS(propagate_state(tc_hamiltonian(p), psi0, grid(1.0, 3), strict), AccuracyError);
    PropagationOptions leak;
    leak.leakage_limit = 1e-6;
    // With n_max = N the initial state already sits in the top level.
    CHECK_THROWS_AS(propagate_state(tc_hamiltonian(p), psi0, grid(1.0, 3), leak), TruncationError);
    CHECK_THROWS_AS(propagate_amplitudes(system(3, 2), {}, grid(1.0, 3)), InvalidArgument);
}

TEST_CASE("Lindblad right-hand side") {
    std::mt19937 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    const SpinSector s(3);
    Matrix a(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = cplx(n(rng), n(rng));
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    const DensityMatrix r(s, rho);
    const SpinOps o = collective_spin_ops(s);

    LindbladSpec unitary;
    Hamiltonian h(s);
    h.add(o.sx);
    unitary.hamiltonian = h;
    const Matrix ref = cplx(0.0, -1.0) * (o.sx.matrix() * rho - rho * o.sx.matrix());
    CHECK((lindblad_rhs(unitary, r) - ref).cwiseAbs().maxCoeff() < 1e-13);

    LindbladSpec decay;
    decay.jumps.push_back({o.sm, 0.7});
    const Matrix l = o.sm.matrix();
    const Matrix ld = l.adjoint() * l;
    const Matrix ref2 = 0.7 * (l * rho * l.adjoint() - 0.5 * (ld * rho + rho * ld));
    const Matrix got = lindblad_rhs(decay, r);
    CHECK((got - ref2).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(got.trace()) < 1e-13);
    CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Lindblad propagation without jumps reproduces the pure-state propagator") {
    const SystemParams p = system(2, 4);
    const ModulationParams m{0.5, 0.0};
    LindbladSpec spec;
    spec.hamiltonian = effective_hamiltonian(p, m);
    const PureState psi0 = charger_start(p);
    const TimeGrid g = grid(2.0, 5);
    const auto rho = propagate_lindblad(spec, DensityMatrix::from_pure(psi0), g);
    const auto psi = propagate_state(*spec.hamiltonian, psi0, g);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const Vector& v = psi[i].state.amplitudes();
        CHECK((rho[i].rho.matrix() - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("single emitter decay matches the analytic solution") {
    const SpinSector s(1);
    const double rate = 0.8;
    const LindbladSpec spec = dissipation_spec({rate}, s);
    Matrix rho0(2, 2);
    rho0 << 0.3, cplx(0.2, 0.35), cplx(0.2, -0.35), 0.7;  // index 1 = excited
    const auto out = propagate_lindblad(spec, DensityMatrix(s, rho0), grid(5.0, 51));
    for (const auto& smp : out) {
        const double e = std::exp(-rate * smp.t);
        CHECK(std::abs(smp.rho.matrix()(1, 1).real() - 0.7 * e) < 1e-10);
        CHECK(std::abs(smp.rho.matrix()(0, 1) - rho0(0, 1) * std::exp(-0.5 * rate * smp.t)) < 1e-10);
        CHECK(smp.trace_error < 1e-12);
    }
}

TEST_CASE("collective dephasing closed form") {
    const SpinSector s(4);
    const DephasingChannel ch{1.3, 0.9};
    const PureState u = uniform_superposition(s);
    const Matrix rho0 = u.amplitudes() * u.amplitudes().adjoint();
    const auto out = propagate_lindblad(dephasing_spec(ch, s), DensityMatrix(s, rho0), grid(3.0, 31));
    double worst = 0.0;
    for (const auto& smp : out) {
        for (int a = 0; a < s.dim(); ++a) {
            for (int b = 0; b < s.dim(); ++b) {
                const double dm = s.m_value(a) - s.m_value(b);
                const cplx ref = rho0(a, b) * std::exp(cplx(-0.5 * ch.gamma * dm * dm * smp.t,
                                                            -ch.omega * dm * smp.t));
                worst = std::max(worst, std::abs(smp.rho.matrix()(a, b) - ref));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("Lindblad invariants are enforced") {
    const SpinSector s(2);
    LindbladOptions strict;
    strict.trace_tolerance = -1.0;
    const LindbladSpec spec = dissipation_spec({0.1}, s);
    CHECK_THROWS_AS(propagate_lindblad(spec, DensityMatrix::maximally_mixed(s), grid(1.0, 3), strict),
                    AccuracyError);
    LindbladSpec mixed;
    mixed.jumps.push_back({collective_spin_ops(s).sm, 0.1});
    mixed.jumps.push_back({Operator::identity(SpinSector(3)), 0.1});
    CHECK_THROWS_AS(mixed.validate(), LayoutError);
    LindbladSpec negative;
    negative.jumps.push_back({collective_spin_ops(s).sm, -0.1});
    CHECK_THROWS_AS(negative.validate(), InvalidArgument);
}
