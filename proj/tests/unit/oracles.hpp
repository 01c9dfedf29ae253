// Independent reference implementations used by the unit tests. Nothing here
// calls into qb beyond the plain Eigen types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Full 2^N space, bit k set = cell k excited.
inline Matrix collective_full(int n, char which) {
    const int d = 1 << n;
    Matrix out = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s) {
        for (int k = 0; k < n; ++k) {
            const bool up = (s >> k) & 1;
            switch (which) {
                case 'z': out(s, s) += up ? 0.5 : -0.5; break;
                case '+':
                    if (!up) out(s | (1 << k), s) += 1.0;
                    break;
                case '-':
                    if (up) out(s & ~(1 << k), s) += 1.0;
                    break;
            }
        }
    }
    return out;
}

// Symmetric Dicke states as columns, column j = j excitations.
inline Matrix dicke_basis(int n) {
    const int d = 1 << n;
    Matrix out = Matrix::Zero(d, n + 1);
    for (int s = 0; s < d; ++s) out(s, __builtin_popcount(static_cast<unsigned>(s))) = 1.0;
    for (int j = 0; j <= n; ++j) out.col(j).normalize();
    return out;
}

// Restriction of a full-space operator to the symmetric sector.
inline Matrix project_symmetric(const Matrix& full, int n) {
    const Matrix b = dicke_basis(n);
    return b.adjoint() * full * b;
}

inline Matrix annihilation(int n_max) {
    Matrix out = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) out(n - 1, n) = std::sqrt(static_cast<double>(n));
    return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Brute-force minimum of sum_k p_{pi(k)} e_k over permutations (small d only).
inline double passive_energy_brute(std::vector<double> p, const std::vector<double>& e) {
    std::sort(p.begin(), p.end());
    double best = 1e300;
    do {
        double s = 0.0;
        for (std::size_t k = 0; k < e.size(); ++k) s += p[k] * e[k];
        best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

inline double shannon(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

// Matrix exponential of -i H dt by diagonalisation (H Hermitian).
inline Matrix unitary_step(const Matrix& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * dt));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Direct sideband sum with the standard-library Bessel function.
inline double lorentz(double w, double big_omega, double lambda, double wa) {
    if (w <= 0.0) return 0.0;
    return big_omega * big_omega * lambda /
           (2.0 * M_PI * ((w - wa) * (w - wa) + 0.25 * lambda * lambda));
}

inline double bessel(int n, double x) {
    const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
    const bool odd = (std::abs(n) % 2) == 1;
    double s = v;
    if (n < 0 && odd) s = -s;
    if (x < 0 && odd) s = -s;
    return s;
}

inline double rate_sum(double xi, double nu, double w0, double big_omega, double lambda,
                       double wa, int cutoff) {
    double s = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l) {
        const double j = bessel(l, xi);
        s += j * j * lorentz(w0 + l * nu, big_omega, lambda, wa);
    }
    return 2.0 * M_PI * s;
}

}  // namespace oracle
