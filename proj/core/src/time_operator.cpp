#include "qb/time_operator.hpp"

#include <algorithm>
#include <cmath>

namespace qb {

namespace {

constexpr double kSparseFill = 0.1;

// y += c * A x for a compressed row-major A.
template <typename Scalar>
void add_sparse_product(cplx c, const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& a,
                        const Vector& x, Vector& y) {
    const auto* outer = a.outerIndexPtr();
    const auto* inner = a.innerIndexPtr();
    const Scalar* values = a.valuePtr();
    const cplx* xs = x.data();
    cplx* ys = y.data();
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        cplx acc(0.0, 0.0);
        for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += values[k] * xs[inner[k]];
        ys[r] += c * acc;
    }
}

}  // namespace

double spectral_norm_bound(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const double one = m.cwiseAbs().colwise().sum().maxCoeff();
    const double inf = m.cwiseAbs().rowwise().sum().maxCoeff();
    return std::sqrt(one * inf);
}

TimeDependentOperator::TimeDependentOperator(Layout layout) : layout_(std::move(layout)) {}

TimeDependentOperator::Term TimeDependentOperator::make_term(const Matrix& m) {
    Term term;
    const Eigen::Index d = m.rows();
    Eigen::Index nnz = 0;
    bool diagonal = true;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (m(i, j) != cplx(0.0, 0.0)) {
                ++nnz;
                if (i != j) diagonal = false;
            }
        }
    }
    if (diagonal) {
        term.storage = Storage::diagonal;
        term.diag = m.diagonal();
        term.op_norm = d == 0 ? 0.0 : term.diag.cwiseAbs().maxCoeff();
        return term;
    }
    term.op_norm = spectral_norm_bound(m);
    if (static_cast<double>(nnz) <= kSparseFill * static_cast<double>(d * d)) {
        term.storage = Storage::sparse;
        term.sparse = m.sparseView();
        term.sparse.makeCompressed();
        if (m.imag().isZero(0.0)) {
            term.sparse_real = m.real().sparseView();
            term.sparse_real.makeCompressed();
            term.real_entries = true;
        }
    } else {
        term.storage = Storage::dense;
        term.dense = m;
    }
    return term;
}

TimeDependentOperator& TimeDependentOperator::add(const Operator& op) {
    require_same_layout(layout_, op.layout(), "TimeDependentOperator::add");
    // Constant parts are merged into a single term.
    if (!has_constant_) {
        constant_sum_ = op.matrix();
        has_constant_ = true;
        terms_.insert(terms_.begin(), make_term(constant_sum_));
    } else {
        constant_sum_ += op.matrix();
        terms_.front() = make_term(constant_sum_);
    }
    return *this;
}

TimeDependentOperator& TimeDependentOperator::add(const Operator& op, Coefficient f,
                                                  double coefficient_bound) {
    require_same_layout(layout_, op.layout(), "TimeDependentOperator::add");
    Term term = make_term(op.matrix());
    term.coefficient = std::move(f);
    term.coefficient_bound = std::abs(coefficient_bound);
    terms_.push_back(std::move(term));
    return *this;
}

bool TimeDependentOperator::is_constant() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return !t.coefficient; });
}

Operator TimeDependentOperator::at(double t) const {
    const int d = dim();
    Matrix out = Matrix::Zero(d, d);
    for (const Term& term : terms_) {
        const cplx c = coefficient(term, t);
        switch (term.storage) {
            case Storage::diagonal:
                out.diagonal() += c * term.diag;
                break;
            case Storage::sparse:
                out += c * Matrix(term.sparse);
                break;
            case Storage::dense:
                out += c * term.dense;
                break;
        }
    }
    return {layout_, std::move(out)};
}

void TimeDependentOperator::apply(double t, const Vector& x, Vector& y) const {
    y.setZero(x.size());
    for (const Term& term : terms_) {
        const cplx c = coefficient(term, t);
        if (c == cplx(0.0, 0.0)) continue;
        switch (term.storage) {
            case Storage::diagonal:
                y.array() += c * term.diag.array() * x.array();
                break;
            case Storage::sparse:
                if (term.real_entries) {
                    add_sparse_product(c, term.sparse_real, x, y);
                } else {
                    add_sparse_product(c, term.sparse, x, y);
                }
                break;
            case Storage::dense:
                y.noalias() += c * (term.dense * x);
                break;
        }
    }
}

void TimeDependentOperator::apply(double t, const Matrix& x, Matrix& y) const {
    y.setZero(x.rows(), x.cols());
    for (const Term& term : terms_) {
        const cplx c = coefficient(term, t);
        if (c == cplx(0.0, 0.0)) continue;
        switch (term.storage) {
            case Storage::diagonal:
                y.noalias() += (c * term.diag).asDiagonal() * x;
                break;
            case Storage::sparse:
                y.noalias() += c * (term.sparse * x);
                break;
            case Storage::dense:
                y.noalias() += c * (term.dense * x);
                break;
        }
    }
}

double TimeDependentOperator::norm_bound() const noexcept {
    double total = 0.0;
    for (const Term& term : terms_) total += term.coefficient_bound * term.op_norm;
    return total;
}

}  // namespace qb
