#include "qb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qb/bessel.hpp"

namespace qb {

void TimeGrid::validate() const {
    std::ostringstream os;
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) os << "need t1 > t0; ";
    if (n_samples < 2) os << "n_samples must be >= 2; ";
    if (!(dt_max > 0.0) || !std::isfinite(dt_max)) os << "dt_max must be > 0; ";
    if (!os.str().empty()) throw InvalidArgument("TimeGrid: " + os.str());
}

double TimeGrid::sample_time(int i) const noexcept {
    if (i == n_samples - 1) return t1;
    return t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n_samples - 1);
}

std::vector<double> TimeGrid::sample_times() const {
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) out[static_cast<std::size_t>(i)] = sample_time(i);
    return out;
}

StepPlan plan_steps(const TimeGrid& grid, double norm) {
    grid.validate();
    double dt = grid.dt_max;
    if (norm > 0.0) dt = std::min(dt, kStepNormProduct / norm);
    const double interval = (grid.t1 - grid.t0) / (grid.n_samples - 1);
    StepPlan plan;
    plan.steps_per_sample = std::max(1, static_cast<int>(std::ceil(interval / dt - 1e-9)));
    plan.dt = interval / plan.steps_per_sample;
    if (plan.dt * norm > kMaxStepNormProduct) {
        std::ostringstream os;
        os << "step plan rejected: dt * ||H|| = " << plan.dt * norm << " exceeds "
           << kMaxStepNormProduct;
        throw InvalidArgument(os.str());
    }
    return plan;
}

// ------------------------------------------------------------------ pure states

double top_fock_leakage(const PureState& state) {
    const auto* j = std::get_if<JointSpace>(&state.layout());
    if (j == nullptr) return 0.0;
    const int dc = j->fock.dim();
    const int top = std::min(2, dc);
    double leak = 0.0;
    for (int m = 0; m < j->spin.dim(); ++m) {
        for (int n = dc - top; n < dc; ++n) leak += std::norm(state.amplitudes()(m * dc + n));
    }
    return leak;
}

void propagate_state(const Hamiltonian& h, const PureState& psi0, const TimeGrid& grid,
                     const StateObserver& observer, const PropagationOptions& options) {
    require_same_layout(h.layout(), psi0.layout(), "propagate_state");
    if (psi0.norm_error() > options.norm_tolerance) {
        throw InvalidArgument("propagate_state: initial state is not normalized");
    }
    const StepPlan plan = plan_steps(grid, h.norm_bound());
    const Layout& layout = psi0.layout();
    const cplx minus_i(0.0, -1.0);

    Vector psi = psi0.amplitudes();
    Vector k1, k2, k3, k4, tmp;
    auto rhs = [&](double t, const Vector& x, Vector& out) {
        h.apply(t, x, out);
        out *= minus_i;
    };

    auto emit = [&](double t) {
        StateSample s{t, PureState(layout, psi), 0.0, 0.0};
        s.norm_error = s.state.norm_error();
        s.leakage = top_fock_leakage(s.state);
        if (s.norm_error > options.norm_tolerance) {
            std::ostringstream os;
            os << "propagate_state: norm drift " << s.norm_error << " at t=" << t
               << " exceeds " << options.norm_tolerance << "; reduce dt_max";
            throw AccuracyError(os.str());
        }
        if (options.leakage_limit && s.leakage > *options.leakage_limit) {
            std::ostringstream os;
            os << "propagate_state: population " << s.leakage
               << " in the top two Fock levels at t=" << t << "; raise n_max";
            throw TruncationError(os.str());
        }
        observer(s);
    };

    emit(grid.t0);
    const double dt = plan.dt;
    for (int i = 1; i < grid.n_samples; ++i) {
        const double start = grid.sample_time(i - 1);
        for (int s = 0; s < plan.steps_per_sample; ++s) {
            const double t = start + s * dt;
            rhs(t, psi, k1);
            tmp = psi + (0.5 * dt) * k1;
            rhs(t + 0.5 * dt, tmp, k2);
            tmp = psi + (0.5 * dt) * k2;
            rhs(t + 0.5 * dt, tmp, k3);
            tmp = psi + dt * k3;
            rhs(t + dt, tmp, k4);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        emit(grid.sample_time(i));
    }
}

std::vector<StateSample> propagate_state(const Hamiltonian& h, const PureState& psi0,
                                         const TimeGrid& grid, const PropagationOptions& options) {
    std::vector<StateSample> out;
    out.reserve(static_cast<std::size_t>(grid.n_samples));
    propagate_state(h, psi0, grid, [&](const StateSample& s) { out.push_back(s); }, options);
    return out;
}

// ------------------------------------------------------------------ amplitude ladder

namespace {

class AmplitudeEquations {
public:
    AmplitudeEquations(const SystemParams& p, const ModulationParams& m)
        : n_cells_(p.n_cells), n_max_(p.n_max), half_g_(0.5 * p.g), omega0_(p.omega0),
          cr_(m.cr_factor()), ladder_(p.n_cells + 2), root_(p.n_max + 2) {
        // ladder_[k] = sqrt(k (N - k + 1)) couples battery index k-1 -> k
        for (int k = 0; k <= n_cells_ + 1; ++k) {
            const double v = static_cast<double>(k) * (n_cells_ - k + 1);
            ladder_[static_cast<std::size_t>(k)] = v > 0.0 ? std::sqrt(v) : 0.0;
        }
        for (int n = 0; n <= n_max_ + 1; ++n) root_[static_cast<std::size_t>(n)] = std::sqrt(n);
    }

    // Row-sum bound on the generator norm.
    double norm_bound() const {
        const double a = *std::max_element(ladder_.begin(), ladder_.end());
        return 2.0 * half_g_ * (1.0 + std::abs(cr_)) * a * root_.back();
    }

    void operator()(double t, const Matrix& d, Matrix& out) const {
        out.setZero(d.rows(), d.cols());
        const cplx up_phase = std::exp(cplx(0.0, 2.0 * omega0_ * t));  // S+ c† term
        const cplx down_phase = std::conj(up_phase);                     // S- c term
        const cplx cr_up = cr_ * up_phase;
        const cplx cr_down = cr_ * down_phase;
        for (int k = 0; k <= n_cells_; ++k) {
            const double a_in = ladder_[static_cast<std::size_t>(k)];       // from k-1
            const double a_out = ladder_[static_cast<std::size_t>(k + 1)];  // from k+1
            for (int n = 0; n <= n_max_; ++n) {
                cplx acc(0.0, 0.0);
                if (k > 0) {
                    if (n < n_max_) acc += a_in * root_[n + 1] * d(k - 1, n + 1);
                    if (n > 0) acc += cr_up * (a_in * root_[n] * d(k - 1, n - 1));
                }
                if (k < n_cells_) {
                    if (n > 0) acc += a_out * root_[n] * d(k + 1, n - 1);
                    if (n < n_max_) acc += cr_down * (a_out * root_[n + 1] * d(k + 1, n + 1));
                }
                out(k, n) = cplx(0.0, -half_g_) * acc;
            }
        }
    }

private:
    int n_cells_;
    int n_max_;
    double half_g_;
    double omega0_;
    double cr_;
    std::vector<double> ladder_;
    std::vector<double> root_;
};

double table_leakage(const Matrix& d) {
    const Eigen::Index cols = d.cols();
    const Eigen::Index top = std::min<Eigen::Index>(2, cols);
    return d.rightCols(top).cwiseAbs2().sum();
}

}  // namespace

std::vector<AmplitudeSample> propagate_amplitudes(const SystemParams& p, const ModulationParams& m,
                                                  const TimeGrid& grid,
                                                  const AmplitudeOptions& options) {
    p.validate();
    m.validate();
    if (p.n_max < p.n_cells) {
        throw InvalidArgument("propagate_amplitudes: n_max must be >= N to hold the initial |N>_c");
    }
    const AmplitudeEquations eq(p, m);
    const StepPlan plan = plan_steps(grid, eq.norm_bound());

    Matrix d = Matrix::Zero(p.n_cells + 1, p.n_max + 1);
    d(0, p.n_cells) = 1.0;

    std::vector<AmplitudeSample> out;
    out.reserve(static_cast<std::size_t>(grid.n_samples));
    auto emit = [&](double t) {
        AmplitudeSample s{t, d, std::abs(d.norm() - 1.0), table_leakage(d)};
        if (s.norm_error > options.norm_tolerance) {
            std::ostringstream os;
            os << "propagate_amplitudes: norm drift " << s.norm_error << " at t=" << t;
            throw AccuracyError(os.str());
        }
        if (options.leakage_limit && s.leakage > *options.leakage_limit) {
            std::ostringstream os;
            os << "propagate_amplitudes: population " << s.leakage
               << " in the top two Fock levels at t=" << t << "; raise n_max";
            throw TruncationError(os.str());
        }
        out.push_back(std::move(s));
    };

    Matrix k1, k2, k3, k4;
    emit(grid.t0);
    const double dt = plan.dt;
    for (int i = 1; i < grid.n_samples; ++i) {
        const double start = grid.sample_time(i - 1);
        for (int s = 0; s < plan.steps_per_sample; ++s) {
            const double t = start + s * dt;
            eq(t, d, k1);
            eq(t + 0.5 * dt, d + (0.5 * dt) * k1, k2);
            eq(t + 0.5 * dt, d + (0.5 * dt) * k2, k3);
            eq(t + dt, d + dt * k3, k4);
            d += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        emit(grid.sample_time(i));
    }
    return out;
}

PureState amplitudes_to_state(const Matrix& table, const JointSpace& joint) {
    if (table.rows() != joint.spin.dim() || table.cols() != joint.fock.dim()) {
        throw LayoutError("amplitudes_to_state: table shape does not match " + describe(joint));
    }
    Vector v(joint.dim());
    for (int m = 0; m < joint.spin.dim(); ++m) {
        for (int n = 0; n < joint.fock.dim(); ++n) v(joint.index(m, n)) = table(m, n);
    }
    return {joint, std::move(v)};
}

// ------------------------------------------------------------------ Lindblad

Layout LindbladSpec::layout() const {
    if (hamiltonian) return hamiltonian->layout();
    if (!jumps.empty()) return jumps.front().op.layout();
    throw InvalidArgument("LindbladSpec: empty spec has no layout");
}

void LindbladSpec::validate() const {
    const Layout l = layout();
    for (const Jump& j : jumps) {
        require_same_layout(l, j.op.layout(), "LindbladSpec jump");
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
            throw InvalidArgument("LindbladSpec: jump rates must be finite and >= 0");
        }
    }
}

namespace {

// Heff = H - (i/2) sum r O†O; rhs = -i (Heff rho - rho Heff†) + sum r O rho O†
class LindbladGenerator {
public:
    explicit LindbladGenerator(const LindbladSpec& spec)
        : spec_(spec), layout_(spec.layout()), decay_(layout_), jumps_() {
        spec.validate();
        const int d = dim(layout_);
        Matrix anti = Matrix::Zero(d, d);
        bool any = false;
        for (const Jump& j : spec.jumps) {
            if (j.rate == 0.0) continue;
            any = true;
            anti += j.rate * (j.op.matrix().adjoint() * j.op.matrix());
            TimeDependentOperator op(layout_);
            op.add(j.op);
            jumps_.push_back({std::move(op), j.rate, spectral_norm_bound(j.op.matrix())});
        }
        if (any) decay_.add(Operator(layout_, cplx(0.0, -0.5) * anti));
    }

    double norm_bound() const {
        double n = spec_.hamiltonian ? 2.0 * spec_.hamiltonian->norm_bound() : 0.0;
        for (const auto& j : jumps_) n += 2.0 * j.rate * j.norm * j.norm;
        return n;
    }

    void operator()(double t, const Matrix& rho, Matrix& out) {
        const Matrix rho_dag = rho.adjoint();
        heff(t, rho, a_);
        heff(t, rho_dag, b_);
        out.noalias() = cplx(0.0, -1.0) * (a_ - b_.adjoint());
        for (const auto& j : jumps_) {
            j.op.apply(t, rho_dag, c_);      // O rho†
            j.op.apply(t, c_.adjoint(), d_);  // O rho O†
            out.noalias() += j.rate * d_;
        }
    }

private:
    void heff(double t, const Matrix& x, Matrix& y) {
        if (spec_.hamiltonian) {
            spec_.hamiltonian->apply(t, x, y);
        } else {
            y.setZero(x.rows(), x.cols());
        }
        if (decay_.term_count() > 0) {
            decay_.apply(t, x, tmp_);
            y += tmp_;
        }
    }

    struct CompiledJump {
        TimeDependentOperator op;
        double rate;
        double norm;
    };

    const LindbladSpec& spec_;
    Layout layout_;
    TimeDependentOperator decay_;
    std::vector<CompiledJump> jumps_;
    Matrix a_, b_, c_, d_, tmp_;
};

}  // namespace

Matrix lindblad_rhs(const LindbladSpec& spec, const DensityMatrix& rho, double t) {
    require_same_layout(spec.layout(), rho.layout(), "lindblad_rhs");
    LindbladGenerator gen(spec);
    Matrix out;
    gen(t, rho.matrix(), out);
    return out;
}

void propagate_lindblad(const LindbladSpec& spec, const DensityMatrix& rho0, const TimeGrid& grid,
                        const DensityObserver& observer, const LindbladOptions& options) {
    require_same_layout(spec.layout(), rho0.layout(), "propagate_lindblad");
    LindbladGenerator gen(spec);
    const StepPlan plan = plan_steps(grid, gen.norm_bound());
    const Layout layout = rho0.layout();

    Matrix rho = rho0.matrix();
    Matrix k1, k2, k3, k4;

    auto emit = [&](double t) {
        DensityMatrix state = DensityMatrix::unchecked(layout, rho);
        const auto diag = state.diagnostics();
        DensitySample s{t, std::move(state), diag.trace_error, diag.hermiticity_error,
                        diag.min_eigenvalue};
        if (s.trace_error > options.trace_tolerance ||
            s.hermiticity_error > options.hermiticity_tolerance ||
            s.min_eigenvalue < options.min_eigenvalue) {
            std::ostringstream os;
            os << "propagate_lindblad: invariant violation at t=" << t << " (trace error "
               << s.trace_error << ", hermiticity error " << s.hermiticity_error
               << ", min eigenvalue " << s.min_eigenvalue << "); reduce dt_max";
            throw AccuracyError(os.str());
        }
        observer(s);
    };

    emit(grid.t0);
    const double dt = plan.dt;
    for (int i = 1; i < grid.n_samples; ++i) {
        const double start = grid.sample_time(i - 1);
        for (int s = 0; s < plan.steps_per_sample; ++s) {
            const double t = start + s * dt;
            gen(t, rho, k1);
            gen(t + 0.5 * dt, rho + (0.5 * dt) * k1, k2);
            gen(t + 0.5 * dt, rho + (0.5 * dt) * k2, k3);
            gen(t + dt, rho + dt * k3, k4);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        emit(grid.sample_time(i));
    }
}

std::vector<DensitySample> propagate_lindblad(const LindbladSpec& spec, const DensityMatrix& rho0,
                                              const TimeGrid& grid,
                                              const LindbladOptions& options) {
    std::vector<DensitySample> out;
    out.reserve(static_cast<std::size_t>(grid.n_samples));
    propagate_lindblad(spec, rho0, grid, [&](const DensitySample& s) { out.push_back(s); }, options);
    return out;
}

}  // namespace qb
