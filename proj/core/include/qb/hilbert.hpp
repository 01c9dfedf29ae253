// hilbert.hpp: layouts, collective-spin / bosonic operators, states, partial traces
//
// Only the maximal-spin sector S = N/2 of N two-level cells is represented, so
// the battery space has dimension N+1. Joint battery-charger vectors use the
// battery-first ordering index = m_index * (n_max + 1) + n.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <variant>

#include "qb/errors.hpp"

namespace qb {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Dicke sector |S = N/2, m>, m_index in [0, N] labels m = -N/2 + m_index.
struct SpinSector {
    int n_cells{1};

    SpinSector() = default;
    explicit SpinSector(int n);

    // Rejects zero, negative and non-integer cell counts.
    static SpinSector from_real(double n);

    int dim() const noexcept { return n_cells + 1; }
    double spin() const noexcept { return 0.5 * n_cells; }
    double m_value(int m_index) const noexcept { return -spin() + m_index; }

    friend bool operator==(const SpinSector&, const SpinSector&) = default;
};

struct FockSpace {
    int n_max{1};

    FockSpace() = default;
    explicit FockSpace(int n);

    int dim() const noexcept { return n_max + 1; }

    friend bool operator==(const FockSpace&, const FockSpace&) = default;
};

struct JointSpace {
    SpinSector spin;
    FockSpace fock;

    JointSpace() = default;
    JointSpace(SpinSector s, FockSpace f) : spin(s), fock(f) {}

    int dim() const noexcept { return spin.dim() * fock.dim(); }
    int index(int m_index, int n) const;

    friend bool operator==(const JointSpace&, const JointSpace&) = default;
};

using Layout = std::variant<SpinSector, FockSpace, JointSpace>;

int dim(const Layout& layout) noexcept;
std::string describe(const Layout& layout);

// Throws LayoutError naming `what` when the layouts differ.
void require_same_layout(const Layout& a, const Layout& b, const char* what);

class Operator {
public:
    Operator(Layout layout, Matrix data);

    static Operator identity(const Layout& layout);
    static Operator zero(const Layout& layout);

    const Layout& layout() const noexcept { return layout_; }
    const Matrix& matrix() const noexcept { return data_; }
    int dim() const noexcept { return static_cast<int>(data_.rows()); }

    // max |A - A^dagger|
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() < tol; }
    // Throws InvalidArgument if not Hermitian to `tol`.
    const Operator& require_hermitian(const char* what, double tol = 1e-12) const;

    Operator adjoint() const { return {layout_, data_.adjoint()}; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx s) {
        data_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    Layout layout_;
    Matrix data_;
};

Operator commutator(const Operator& a, const Operator& b);
// Largest entry magnitude; used for the entrywise tolerance checks.
double max_abs(const Operator& a);

class PureState {
public:
    PureState(Layout layout, Vector amplitudes);

    const Layout& layout() const noexcept { return layout_; }
    const Vector& amplitudes() const noexcept { return amps_; }
    double norm() const { return amps_.norm(); }
    double norm_error() const { return std::abs(norm() - 1.0); }

private:
    Layout layout_;
    Vector amps_;
};

class DensityMatrix {
public:
    struct Diagnostics {
        double hermiticity_error{0.0};
        double trace_error{0.0};
        double min_eigenvalue{0.0};
    };

    // Validates Hermiticity (1e-10), unit trace (1e-8) and positivity (-1e-10).
    DensityMatrix(Layout layout, Matrix data);

    // Skips validation; the propagators use this and report diagnostics
    // themselves.
    static DensityMatrix unchecked(Layout layout, Matrix data);
    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(const Layout& layout);

    const Layout& layout() const noexcept { return layout_; }
    const Matrix& matrix() const noexcept { return data_; }
    int dim() const noexcept { return static_cast<int>(data_.rows()); }

    Diagnostics diagnostics() const;
    // Hermitian-projected eigenvalues, ascending.
    Eigen::VectorXd eigenvalues() const;

private:
    struct NoCheck {};
    DensityMatrix(Layout layout, Matrix data, NoCheck);

    Layout layout_;
    Matrix data_;
};

struct SpinOps {
    Operator sz, sp, sm, sx;
};

struct FockOps {
    Operator c, cdag, num;
};

SpinOps collective_spin_ops(const SpinSector& sector);
FockOps fock_ops(const FockSpace& space);

// Kronecker product, battery factor first.
Operator tensor(const Operator& spin_op, const Operator& fock_op);
DensityMatrix tensor(const DensityMatrix& battery, const DensityMatrix& charger);

// A (x) I_charger on the given joint layout.
Operator embed_battery(const Operator& spin_op, const JointSpace& joint);
// I_battery (x) B on the given joint layout.
Operator embed_charger(const Operator& fock_op, const JointSpace& joint);

PureState basis_state(const JointSpace& joint, int m_index, int n);
PureState dicke_state(const SpinSector& sector, int m_index);
PureState fock_state(const FockSpace& space, int n);
// sum_m |N/2, -N/2 + m> / sqrt(N + 1)
PureState uniform_superposition(const SpinSector& sector);

DensityMatrix partial_trace_battery(const PureState& state);
DensityMatrix partial_trace_battery(const DensityMatrix& rho);
DensityMatrix partial_trace_charger(const PureState& state);
DensityMatrix partial_trace_charger(const DensityMatrix& rho);

const JointSpace& as_joint(const Layout& layout, const char* what);
const SpinSector& as_spin(const Layout& layout, const char* what);

}  // namespace qb
