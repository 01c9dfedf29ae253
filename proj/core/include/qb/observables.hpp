// observables.hpp: energy, passive state, ergotropy, efficiency, entropy,
// relative-entropy coherence and first-maximum detection

#pragma once

#include <span>

#include "qb/hilbert.hpp"

namespace qb {

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Matrix eigenvectors;          // orthonormal columns
};

// Hermitian eigen-decomposition; throws InvalidArgument for non-Hermitian input.
Spectrum spectrum(const Operator& h);

// A Hamiltonian together with its spectrum, for repeated evaluations.
struct EnergyBasis {
    Operator h;
    Spectrum sp;

    explicit EnergyBasis(Operator hamiltonian);
};

double mean_energy(const DensityMatrix& rho, const Operator& h);

// sum_k r_k |e_k><e_k| with r_k descending against e_k ascending.
DensityMatrix passive_state(const DensityMatrix& rho, const Operator& h);

// Tr[rho H] - Tr[passive(rho) H]
double ergotropy(const DensityMatrix& rho, const Operator& h);
double ergotropy(const DensityMatrix& rho, const EnergyBasis& basis);

// Ergotropy over the initial charger energy Tr[rho_c(0) H_c].
double efficiency(double ergotropy_value, const DensityMatrix& charger0, const Operator& h_charger);

enum class LogBase { natural, two };

double vn_entropy(const DensityMatrix& rho, LogBase base = LogBase::natural);

// S(rho_dep) - S(rho); rho_dep keeps only the diagonal in the eigenbasis of h.
double rel_entropy_coherence(const DensityMatrix& rho, const Operator& h,
                             LogBase base = LogBase::natural);
double rel_entropy_coherence(const DensityMatrix& rho, const EnergyBasis& basis,
                             LogBase base = LogBase::natural);

struct PeakResult {
    double t{0.0};
    double value{0.0};
    std::size_t index{0};
    bool monotone{false};  // no interior maximum; the final sample is returned
};

// Rises smaller than this are treated as numerical noise, so flat
// zero-valued starts do not register as maxima.
inline constexpr double kPeakNoiseFloor = 1e-12;

// First i with v[i-1] < v[i] >= v[i+1], refined by a parabola through the
// three points.
PeakResult first_local_max(std::span<const double> t, std::span<const double> v);

// First local maximum that the trace falls below by at least
// `fraction` x (max v - min v) before exceeding it again. Ripples riding on
// the rise of a lab-frame trace are skipped this way.
inline constexpr double kPeakProminence = 0.05;
PeakResult first_prominent_max(std::span<const double> t, std::span<const double> v,
                               double fraction = kPeakProminence);

}  // namespace qb
