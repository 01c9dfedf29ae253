#include <benchmark/benchmark.h>

#include <random>

#include "qb/bessel.hpp"
#include "qb/dynamics.hpp"
#include "qb/noise.hpp"
#include "qb/observables.hpp"

namespace {

qb::SystemParams system_of(int cells) {
    qb::SystemParams p;
    p.n_cells = cells;
    p.n_max = 5 * cells;
    return p;
}

void BM_HamiltonianApply(benchmark::State& state) {
    const qb::SystemParams p = system_of(static_cast<int>(state.range(0)));
    const qb::Hamiltonian h = qb::effective_hamiltonian(p, {0.3, 0.0});
    const qb::Vector x = qb::Vector::Ones(p.joint().dim()).normalized();
    qb::Vector y;
    double t = 0.0;
    for (auto _ : state) {
        h.apply(t, x, y);
        t += 1e-3;
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_HamiltonianApply)->Arg(4)->Arg(8)->Arg(16);

void BM_ChargingPropagation(benchmark::State& state) {
    const qb::SystemParams p = system_of(static_cast<int>(state.range(0)));
    const qb::Hamiltonian h = qb::effective_hamiltonian(p, {0.3, 0.0});
    const qb::PureState psi0 = qb::basis_state(p.joint(), 0, p.n_cells);
    qb::TimeGrid g;
    g.t1 = 1.0;
    g.n_samples = 11;
    for (auto _ : state) {
        qb::propagate_state(h, psi0, g, [](const qb::StateSample& s) { benchmark::DoNotOptimize(s.t); });
    }
}
BENCHMARK(BM_ChargingPropagation)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_StorageLindblad(benchmark::State& state) {
    const qb::SpinSector s(static_cast<int>(state.range(0)));
    const qb::LindbladSpec spec = qb::dephasing_spec({2.0, 1.0}, s);
    const qb::DensityMatrix rho0 = qb::DensityMatrix::from_pure(qb::uniform_superposition(s));
    qb::TimeGrid g;
    g.t1 = 1.0;
    g.n_samples = 11;
    for (auto _ : state) {
        qb::propagate_lindblad(spec, rho0, g, [](const qb::DensitySample& x) { benchmark::DoNotOptimize(x.t); });
    }
}
BENCHMARK(BM_StorageLindblad)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Ergotropy(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const qb::SpinSector s(cells);
    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    qb::Matrix a(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = qb::cplx(n(rng), n(rng));
    qb::Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    const qb::DensityMatrix r(s, rho);
    const qb::EnergyBasis h(qb::collective_spin_ops(s).sz);
    for (auto _ : state) benchmark::DoNotOptimize(qb::ergotropy(r, h));
}
BENCHMARK(BM_Ergotropy)->Arg(8)->Arg(32);

void BM_BesselJ(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qb::bessel_j(static_cast<int>(state.range(0)), x));
        x += 1e-6;
    }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(5)->Arg(40);

void BM_EffectiveRate(benchmark::State& state) {
    const qb::LorentzianSpectrum s{1.0, 4.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(qb::effective_rate({2.404, 1e4}, s, 1.0));
}
BENCHMARK(BM_EffectiveRate);

}  // namespace

BENCHMARK_MAIN();
