// time_operator.hpp: operators of the form sum_k f_k(t) A_k
//
// Hamiltonians and Lindblad generators are evaluated millions of times during
// propagation, so each A_k is stored in the cheapest exact form (diagonal,
// sparse or dense). at(t) always returns a dense Operator.

#pragma once

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

#include "qb/hilbert.hpp"

namespace qb {

class TimeDependentOperator {
public:
    using Coefficient = std::function<cplx(double)>;

    explicit TimeDependentOperator(Layout layout);

    // Constant term.
    TimeDependentOperator& add(const Operator& op);
    // f(t) * op with sup_t |f(t)| <= coefficient_bound.
    TimeDependentOperator& add(const Operator& op, Coefficient f, double coefficient_bound);

    const Layout& layout() const noexcept { return layout_; }
    int dim() const noexcept { return qb::dim(layout_); }
    bool is_constant() const noexcept;
    std::size_t term_count() const noexcept { return terms_.size(); }

    Operator at(double t) const;

    // y = A(t) x
    void apply(double t, const Vector& x, Vector& y) const;
    // Y = A(t) X
    void apply(double t, const Matrix& x, Matrix& y) const;

    // Upper bound on sup_t ||A(t)||_2 from sqrt(||A_k||_1 ||A_k||_inf) per term.
    double norm_bound() const noexcept;

private:
    enum class Storage { diagonal, sparse, dense };

    struct Term {
        Storage storage{Storage::dense};
        Vector diag;
        Eigen::SparseMatrix<cplx, Eigen::RowMajor> sparse;
        // Copy of `sparse` when every entry is real; halves the vector products.
        Eigen::SparseMatrix<double, Eigen::RowMajor> sparse_real;
        bool real_entries{false};
        Matrix dense;
        Coefficient coefficient;  // empty: constant 1
        double coefficient_bound{1.0};
        double op_norm{0.0};
    };

    static Term make_term(const Matrix& m);
    cplx coefficient(const Term& term, double t) const {
        return term.coefficient ? term.coefficient(t) : cplx(1.0, 0.0);
    }

    Layout layout_;
    std::vector<Term> terms_;
    Matrix constant_sum_;
    bool has_constant_{false};
};

using Hamiltonian = TimeDependentOperator;

// sqrt(||A||_1 ||A||_inf) >= ||A||_2
double spectral_norm_bound(const Matrix& m);

}  // namespace qb
