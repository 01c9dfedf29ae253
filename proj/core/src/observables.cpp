#include "qb/observables.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <sstream>
#include <vector>

namespace qb {

namespace {

constexpr double kNegativeEigenTolerance = 1e-10;

void require_compatible(const DensityMatrix& rho, const Operator& h, const char* what) {
    require_same_layout(rho.layout(), h.layout(), what);
    h.require_hermitian(what);
}

// Eigenvalues of rho after the -1e-10 check, clamped to [0, 1].
Eigen::VectorXd clamped_probabilities(const DensityMatrix& rho, const char* what) {
    Eigen::VectorXd r = rho.eigenvalues();
    if (r.size() > 0 && r.minCoeff() < -kNegativeEigenTolerance) {
        std::ostringstream os;
        os << what << ": density matrix has eigenvalue " << r.minCoeff() << " below -1e-10";
        throw InvalidArgument(os.str());
    }
    return r.cwiseMax(0.0).cwiseMin(1.0);
}

double entropy_of(const Eigen::VectorXd& p, LogBase base) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) s -= p(i) * std::log(p(i));
    }
    return base == LogBase::two ? s / std::log(2.0) : s;
}

}  // namespace

Spectrum spectrum(const Operator& h) {
    h.require_hermitian("spectrum");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw AccuracyError("spectrum: eigen-decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

EnergyBasis::EnergyBasis(Operator hamiltonian)
    : h(std::move(hamiltonian)), sp(spectrum(h)) {}

double mean_energy(const DensityMatrix& rho, const Operator& h) {
    require_compatible(rho, h, "mean_energy");
    const cplx e = (rho.matrix() * h.matrix()).trace();
    if (std::abs(e.imag()) > 1e-10) {
        std::ostringstream os;
        os << "mean_energy: imaginary residue " << e.imag() << " exceeds 1e-10";
        throw AccuracyError(os.str());
    }
    return e.real();
}

DensityMatrix passive_state(const DensityMatrix& rho, const Operator& h) {
    require_compatible(rho, h, "passive_state");
    const Spectrum sp = spectrum(h);
    Eigen::VectorXd r = rho.eigenvalues();  // ascending
    const Eigen::Index d = r.size();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double rk = r(d - 1 - k);  // descending population on ascending energy
        out += rk * sp.eigenvectors.col(k) * sp.eigenvectors.col(k).adjoint();
    }
    return DensityMatrix::unchecked(rho.layout(), std::move(out));
}

double ergotropy(const DensityMatrix& rho, const Operator& h) {
    require_compatible(rho, h, "ergotropy");
    return ergotropy(rho, EnergyBasis(h));
}

double ergotropy(const DensityMatrix& rho, const EnergyBasis& basis) {
    require_same_layout(rho.layout(), basis.h.layout(), "ergotropy");
    const Eigen::VectorXd r = rho.eigenvalues();
    const Eigen::Index d = r.size();
    double passive_energy = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) passive_energy += r(d - 1 - k) * basis.sp.eigenvalues(k);
    return mean_energy(rho, basis.h) - passive_energy;
}

double efficiency(double ergotropy_value, const DensityMatrix& charger0, const Operator& h_charger) {
    const double supply = mean_energy(charger0, h_charger);
    if (!(supply > 0.0)) {
        std::ostringstream os;
        os << "efficiency: initial charger energy must be > 0, got " << supply;
        throw InvalidArgument(os.str());
    }
    return ergotropy_value / supply;
}

double vn_entropy(const DensityMatrix& rho, LogBase base) {
    return entropy_of(clamped_probabilities(rho, "vn_entropy"), base);
}

double rel_entropy_coherence(const DensityMatrix& rho, const Operator& h, LogBase base) {
    require_compatible(rho, h, "rel_entropy_coherence");
    return rel_entropy_coherence(rho, EnergyBasis(h), base);
}

double rel_entropy_coherence(const DensityMatrix& rho, const EnergyBasis& basis, LogBase base) {
    require_same_layout(rho.layout(), basis.h.layout(), "rel_entropy_coherence");
    const Spectrum& sp = basis.sp;
    const Matrix in_basis = sp.eigenvectors.adjoint() * rho.matrix() * sp.eigenvectors;
    Eigen::VectorXd dephased = in_basis.diagonal().real().cwiseMax(0.0).cwiseMin(1.0);
    return entropy_of(dephased, base) - vn_entropy(rho, base);
}

namespace {

struct Candidate {
    std::size_t i;  // first sample of the peak
    std::size_t j;  // last sample of its plateau
};

// Next local maximum at or after `from`.
std::optional<Candidate> next_local_max(std::span<const double> v, std::size_t from) {
    const std::size_t n = v.size();
    for (std::size_t i = std::max<std::size_t>(from, 1); i + 1 < n; ++i) {
        // Strict rise into i (beyond the noise floor), non-strict fall after it.
        if (!(v[i] > v[i - 1] + kPeakNoiseFloor)) continue;
        std::size_t j = i;
        // Flat-topped peak: walk the plateau.
        while (j + 1 < n && std::abs(v[j + 1] - v[j]) <= kPeakNoiseFloor) ++j;
        if (j + 1 >= n) return std::nullopt;
        if (v[j + 1] > v[j]) continue;
        return Candidate{i, j};
    }
    return std::nullopt;
}

PeakResult refine(std::span<const double> t, std::span<const double> v, Candidate c) {
    const std::size_t i = c.i;
    PeakResult peak{t[i], v[i], i, false};
    if (c.j != i) {
        peak.t = 0.5 * (t[i] + t[c.j]);
        return peak;
    }
    // Parabola through (i-1, i, i+1).
    const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    const double y0 = v[i - 1], y1 = v[i], y2 = v[i + 1];
    const double d01 = (y1 - y0) / (t1 - t0);
    const double d12 = (y2 - y1) / (t2 - t1);
    const double curvature = (d12 - d01) / (t2 - t0);
    if (curvature < 0.0) {
        const double b = d01 - curvature * (t0 + t1);
        const double ts = -b / (2.0 * curvature);
        if (ts >= t0 && ts <= t2) {
            peak.t = ts;
            peak.value = y0 + d01 * (ts - t0) + curvature * (ts - t0) * (ts - t1);
        }
    }
    return peak;
}

void check_trace(std::span<const double> t, std::span<const double> v, const char* what) {
    if (t.size() != v.size()) throw InvalidArgument(std::string(what) + ": size mismatch");
    if (v.size() < 3) throw InvalidArgument(std::string(what) + ": need at least 3 samples");
}

}  // namespace

PeakResult first_local_max(std::span<const double> t, std::span<const double> v) {
    check_trace(t, v, "first_local_max");
    if (const auto c = next_local_max(v, 1)) return refine(t, v, *c);
    const std::size_t n = v.size();
    return {t[n - 1], v[n - 1], n - 1, true};
}

PeakResult first_prominent_max(std::span<const double> t, std::span<const double> v,
                               double fraction) {
    check_trace(t, v, "first_prominent_max");
    if (!(fraction >= 0.0)) throw InvalidArgument("first_prominent_max: fraction must be >= 0");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double prominence = fraction * (*hi - *lo);
    const std::size_t n = v.size();
    std::size_t from = 1;
    while (const auto c = next_local_max(v, from)) {
        const double top = v[c->i];
        std::size_t k = c->j + 1;
        bool dropped = false;
        for (; k < n && v[k] <= top + kPeakNoiseFloor; ++k) {
            if (v[k] <= top - prominence) {
                dropped = true;
                break;
            }
        }
        // A candidate that is never exceeded again is accepted as well.
        if (dropped || k >= n) return refine(t, v, *c);
        from = k;
    }
    return {t[n - 1], v[n - 1], n - 1, true};
}

}  // namespace qb
