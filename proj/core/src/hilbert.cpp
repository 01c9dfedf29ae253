#include "qb/hilbert.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_shape(const Layout& layout, Eigen::Index rows, Eigen::Index cols, const char* what) {
    const auto d = static_cast<Eigen::Index>(dim(layout));
    if (rows != d || cols != d) {
        std::ostringstream os;
        os << what << ": " << rows << "x" << cols << " data does not match layout "
           << describe(layout);
        throw LayoutError(os.str());
    }
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw AccuracyError("density matrix eigen-decomposition failed");
    }
    return solver.eigenvalues();
}

}  // namespace

SpinSector::SpinSector(int n) : n_cells(n) {
    if (n < 1) {
        throw InvalidArgument("invalid sector: number of cells must be >= 1, got " +
                              std::to_string(n));
    }
}

SpinSector SpinSector::from_real(double n) {
    if (!std::isfinite(n) || n != std::floor(n) || n < 1.0 || n > 1e6) {
        std::ostringstream os;
        os << "invalid sector: number of cells must be a positive integer, got " << n;
        throw InvalidArgument(os.str());
    }
    return SpinSector(static_cast<int>(n));
}

FockSpace::FockSpace(int n) : n_max(n) {
    if (n < 1) {
        throw InvalidArgument("Fock truncation n_max must be >= 1, got " + std::to_string(n));
    }
}

int JointSpace::index(int m_index, int n) const {
    if (m_index < 0 || m_index > spin.n_cells || n < 0 || n > fock.n_max) {
        std::ostringstream os;
        os << "basis index (m_index=" << m_index << ", n=" << n << ") outside joint space N="
           << spin.n_cells << ", n_max=" << fock.n_max;
        throw InvalidArgument(os.str());
    }
    return m_index * fock.dim() + n;
}

int dim(const Layout& layout) noexcept {
    return std::visit([](const auto& l) { return l.dim(); }, layout);
}

std::string describe(const Layout& layout) {
    return std::visit(
        overloaded{
            [](const SpinSector& s) { return "spin(N=" + std::to_string(s.n_cells) + ")"; },
            [](const FockSpace& f) { return "fock(n_max=" + std::to_string(f.n_max) + ")"; },
            [](const JointSpace& j) {
                return "joint(N=" + std::to_string(j.spin.n_cells) +
                       ", n_max=" + std::to_string(j.fock.n_max) + ")";
            },
        },
        layout);
}

void require_same_layout(const Layout& a, const Layout& b, const char* what) {
    if (!(a == b)) {
        throw LayoutError(std::string(what) + ": layout mismatch " + describe(a) + " vs " +
                          describe(b));
    }
}

const JointSpace& as_joint(const Layout& layout, const char* what) {
    if (const auto* j = std::get_if<JointSpace>(&layout)) return *j;
    throw LayoutError(std::string(what) + ": expected a joint layout, got " + describe(layout));
}

const SpinSector& as_spin(const Layout& layout, const char* what) {
    if (const auto* s = std::get_if<SpinSector>(&layout)) return *s;
    throw LayoutError(std::string(what) + ": expected a spin layout, got " + describe(layout));
}

// ------------------------------------------------------------------ Operator

Operator::Operator(Layout layout, Matrix data) : layout_(std::move(layout)), data_(std::move(data)) {
    check_shape(layout_, data_.rows(), data_.cols(), "Operator");
}

Operator Operator::identity(const Layout& layout) {
    const int d = qb::dim(layout);
    return {layout, Matrix::Identity(d, d)};
}

Operator Operator::zero(const Layout& layout) {
    const int d = qb::dim(layout);
    return {layout, Matrix::Zero(d, d)};
}

double Operator::hermiticity_error() const {
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

const Operator& Operator::require_hermitian(const char* what, double tol) const {
    const double err = hermiticity_error();
    if (!(err < tol)) {
        std::ostringstream os;
        os << what << ": operator is not Hermitian (max |A - A^dagger| = " << err << ")";
        throw InvalidArgument(os.str());
    }
    return *this;
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_layout(layout_, rhs.layout_, "Operator +");
    data_ += rhs.data_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_layout(layout_, rhs.layout_, "Operator -");
    data_ -= rhs.data_;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_layout(a.layout_, b.layout_, "Operator *");
    return {a.layout_, a.data_ * b.data_};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_abs(const Operator& a) {
    return a.matrix().size() == 0 ? 0.0 : a.matrix().cwiseAbs().maxCoeff();
}

// ------------------------------------------------------------------ states

PureState::PureState(Layout layout, Vector amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != dim(layout_)) {
        throw LayoutError("PureState: " + std::to_string(amps_.size()) +
                          " amplitudes do not match layout " + describe(layout_));
    }
}

DensityMatrix::DensityMatrix(Layout layout, Matrix data, NoCheck)
    : layout_(std::move(layout)), data_(std::move(data)) {
    check_shape(layout_, data_.rows(), data_.cols(), "DensityMatrix");
}

DensityMatrix::DensityMatrix(Layout layout, Matrix data)
    : DensityMatrix(std::move(layout), std::move(data), NoCheck{}) {
    const auto d = diagnostics();
    if (d.hermiticity_error > 1e-10 || d.trace_error > 1e-8 || d.min_eigenvalue < -1e-10) {
        std::ostringstream os;
        os << "DensityMatrix invariants violated: hermiticity error " << d.hermiticity_error
           << ", trace error " << d.trace_error << ", min eigenvalue " << d.min_eigenvalue;
        throw InvalidArgument(os.str());
    }
}

DensityMatrix DensityMatrix::unchecked(Layout layout, Matrix data) {
    return {std::move(layout), std::move(data), NoCheck{}};
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    const Vector& v = psi.amplitudes();
    return unchecked(psi.layout(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(const Layout& layout) {
    const int d = qb::dim(layout);
    return {layout, Matrix::Identity(d, d) / static_cast<double>(d)};
}

DensityMatrix::Diagnostics DensityMatrix::diagnostics() const {
    Diagnostics d;
    d.hermiticity_error = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(data_.trace() - 1.0);
    d.min_eigenvalue = hermitian_eigenvalues(data_).minCoeff();
    return d;
}

Eigen::VectorXd DensityMatrix::eigenvalues() const { return hermitian_eigenvalues(data_); }

// ------------------------------------------------------------------ builders

SpinOps collective_spin_ops(const SpinSector& sector) {
    const int d = sector.dim();
    const double s = sector.spin();
    Matrix sz = Matrix::Zero(d, d);
    Matrix sp = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = sector.m_value(k);
        sz(k, k) = m;
        if (k + 1 < d) sp(k + 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    Matrix sm = sp.adjoint();
    Matrix sx = 0.5 * (sp + sm);
    return {Operator(sector, std::move(sz)), Operator(sector, std::move(sp)),
            Operator(sector, std::move(sm)), Operator(sector, std::move(sx))};
}

FockOps fock_ops(const FockSpace& space) {
    const int d = space.dim();
    Matrix c = Matrix::Zero(d, d);
    Matrix num = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        c(n - 1, n) = std::sqrt(static_cast<double>(n));
        num(n, n) = n;
    }
    Matrix cdag = c.adjoint();
    return {Operator(space, std::move(c)), Operator(space, std::move(cdag)),
            Operator(space, std::move(num))};
}

Operator tensor(const Operator& spin_op, const Operator& fock_op) {
    const auto* s = std::get_if<SpinSector>(&spin_op.layout());
    const auto* f = std::get_if<FockSpace>(&fock_op.layout());
    if (s == nullptr || f == nullptr) {
        throw LayoutError("tensor: expected (spin, fock) operands, got " +
                          describe(spin_op.layout()) + " and " + describe(fock_op.layout()));
    }
    return {JointSpace(*s, *f), Eigen::kroneckerProduct(spin_op.matrix(), fock_op.matrix())};
}

DensityMatrix tensor(const DensityMatrix& battery, const DensityMatrix& charger) {
    const auto& s = as_spin(battery.layout(), "tensor");
    const auto* f = std::get_if<FockSpace>(&charger.layout());
    if (f == nullptr) {
        throw LayoutError("tensor: expected a fock layout, got " + describe(charger.layout()));
    }
    return DensityMatrix::unchecked(JointSpace(s, *f),
                                    Eigen::kroneckerProduct(battery.matrix(), charger.matrix()));
}

Operator embed_battery(const Operator& spin_op, const JointSpace& joint) {
    require_same_layout(spin_op.layout(), Layout(joint.spin), "embed_battery");
    return tensor(spin_op, Operator::identity(joint.fock));
}

Operator embed_charger(const Operator& fock_op, const JointSpace& joint) {
    require_same_layout(fock_op.layout(), Layout(joint.fock), "embed_charger");
    return tensor(Operator::identity(joint.spin), fock_op);
}

PureState basis_state(const JointSpace& joint, int m_index, int n) {
    Vector v = Vector::Zero(joint.dim());
    v(joint.index(m_index, n)) = 1.0;
    return {joint, std::move(v)};
}

PureState dicke_state(const SpinSector& sector, int m_index) {
    if (m_index < 0 || m_index > sector.n_cells) {
        throw InvalidArgument("dicke_state: m_index " + std::to_string(m_index) +
                              " outside [0, " + std::to_string(sector.n_cells) + "]");
    }
    Vector v = Vector::Zero(sector.dim());
    v(m_index) = 1.0;
    return {sector, std::move(v)};
}

PureState fock_state(const FockSpace& space, int n) {
    if (n < 0 || n > space.n_max) {
        throw InvalidArgument("fock_state: n " + std::to_string(n) + " outside [0, " +
                              std::to_string(space.n_max) + "]");
    }
    Vector v = Vector::Zero(space.dim());
    v(n) = 1.0;
    return {space, std::move(v)};
}

PureState uniform_superposition(const SpinSector& sector) {
    const int d = sector.dim();
    return {sector, Vector::Constant(d, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0))};
}

// ------------------------------------------------------------------ partial traces

namespace {

// Joint amplitudes reshaped into a (N+1) x (n_max+1) table, row = m_index.
Matrix amplitude_table(const PureState& state, const JointSpace& j) {
    Matrix table(j.spin.dim(), j.fock.dim());
    const Vector& a = state.amplitudes();
    for (int m = 0; m < j.spin.dim(); ++m) {
        for (int n = 0; n < j.fock.dim(); ++n) table(m, n) = a(m * j.fock.dim() + n);
    }
    return table;
}

}  // namespace

DensityMatrix partial_trace_battery(const PureState& state) {
    const auto& j = as_joint(state.layout(), "partial_trace_battery");
    const Matrix table = amplitude_table(state, j);
    return DensityMatrix::unchecked(j.spin, table * table.adjoint());
}

DensityMatrix partial_trace_charger(const PureState& state) {
    const auto& j = as_joint(state.layout(), "partial_trace_charger");
    const Matrix table = amplitude_table(state, j);
    // (rho_c)_{n n'} = sum_m d_{m n} d*_{m n'}
    return DensityMatrix::unchecked(j.fock, table.transpose() * table.conjugate());
}

DensityMatrix partial_trace_battery(const DensityMatrix& rho) {
    const auto& j = as_joint(rho.layout(), "partial_trace_battery");
    const int db = j.spin.dim();
    const int dc = j.fock.dim();
    Matrix out = Matrix::Zero(db, db);
    for (int m = 0; m < db; ++m) {
        for (int mp = 0; mp < db; ++mp) {
            out(m, mp) = rho.matrix().block(m * dc, mp * dc, dc, dc).trace();
        }
    }
    return DensityMatrix::unchecked(j.spin, std::move(out));
}

DensityMatrix partial_trace_charger(const DensityMatrix& rho) {
    const auto& j = as_joint(rho.layout(), "partial_trace_charger");
    const int db = j.spin.dim();
    const int dc = j.fock.dim();
    Matrix out = Matrix::Zero(dc, dc);
    for (int m = 0; m < db; ++m) out += rho.matrix().block(m * dc, m * dc, dc, dc);
    return DensityMatrix::unchecked(j.fock, std::move(out));
}

}  // namespace qb
