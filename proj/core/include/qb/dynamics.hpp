// dynamics.hpp: fixed-step RK4 propagation of pure states, the amplitude
// ladder equations, and Lindblad master equations.
//
// Every propagator uses the step dt = min(dt_max, 0.05 / ||generator||),
// shortened so that an integer number of steps lands on each output sample.
// States are never renormalized; drift is reported and checked.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qb/hilbert.hpp"
#include "qb/model.hpp"
#include "qb/time_operator.hpp"

namespace qb {

struct TimeGrid {
    double t0{0.0};
    double t1{10.0};
    int n_samples{2001};  // output points including both ends
    double dt_max{1e-3};

    void validate() const;
    double sample_time(int i) const noexcept;
    std::vector<double> sample_times() const;
};

inline constexpr double kStepNormProduct = 0.05;
inline constexpr double kMaxStepNormProduct = 0.1;

// Step actually used between samples for a generator of norm `norm`.
struct StepPlan {
    double dt{0.0};
    int steps_per_sample{1};
};
StepPlan plan_steps(const TimeGrid& grid, double norm);

struct PropagationOptions {
    double norm_tolerance{1e-8};
    // Enforced on joint layouts only; nullopt disables the check.
    std::optional<double> leakage_limit{};
};

struct StateSample {
    double t{0.0};
    PureState state;
    double norm_error{0.0};
    double leakage{0.0};  // population in the top two Fock levels (joint layouts)
};

using StateObserver = std::function<void(const StateSample&)>;

// i d|psi>/dt = H(t)|psi>. Throws AccuracyError when the norm drifts by more
// than options.norm_tolerance.
void propagate_state(const Hamiltonian& h, const PureState& psi0, const TimeGrid& grid,
                     const StateObserver& observer, const PropagationOptions& options = {});
std::vector<StateSample> propagate_state(const Hamiltonian& h, const PureState& psi0,
                                         const TimeGrid& grid,
                                         const PropagationOptions& options = {});

// Population in the two highest Fock levels of a joint state.
double top_fock_leakage(const PureState& state);

// Amplitude table d(m_index, n) of sum d_{m,n} |m, n>, battery index as row.
struct AmplitudeSample {
    double t{0.0};
    Matrix amplitudes;
    double norm_error{0.0};
    double leakage{0.0};
};

struct AmplitudeOptions {
    double norm_tolerance{1e-8};
    std::optional<double> leakage_limit{1e-6};
};

// Ladder equations for the effective Hamiltonian, starting from d_{0,N} = 1.
// Rotating couplings (m,n) <-> (m±1, n∓1) at (g/2) x ladder factors; the
// counter-rotating couplings (m,n) <-> (m±1, n±1) carry (g/2) J0(2ξ) e^{±2iω0 t}.
std::vector<AmplitudeSample> propagate_amplitudes(const SystemParams& p, const ModulationParams& m,
                                                  const TimeGrid& grid,
                                                  const AmplitudeOptions& options = {});

// Flatten an amplitude table into a joint PureState (battery-first ordering).
PureState amplitudes_to_state(const Matrix& table, const JointSpace& joint);

struct Jump {
    Operator op;
    double rate{0.0};
};

struct LindbladSpec {
    std::optional<Hamiltonian> hamiltonian;
    std::vector<Jump> jumps;

    // Layout shared by the Hamiltonian and every jump operator.
    Layout layout() const;
    void validate() const;
};

// -i[H(t), rho] + sum_k rate_k (O rho O† - {O†O, rho}/2)
Matrix lindblad_rhs(const LindbladSpec& spec, const DensityMatrix& rho, double t = 0.0);

struct DensitySample {
    double t{0.0};
    DensityMatrix rho;
    double trace_error{0.0};
    double hermiticity_error{0.0};
    double min_eigenvalue{0.0};
};

struct LindbladOptions {
    double trace_tolerance{1e-8};
    double hermiticity_tolerance{1e-10};
    double min_eigenvalue{-1e-8};
};

using DensityObserver = std::function<void(const DensitySample&)>;

void propagate_lindblad(const LindbladSpec& spec, const DensityMatrix& rho0, const TimeGrid& grid,
                        const DensityObserver& observer, const LindbladOptions& options = {});
std::vector<DensitySample> propagate_lindblad(const LindbladSpec& spec, const DensityMatrix& rho0,
                                              const TimeGrid& grid,
                                              const LindbladOptions& options = {});

}  // namespace qb
