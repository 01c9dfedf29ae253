#include <doctest.h>

#include <random>

#include "qb/model.hpp"
#include "qb/time_operator.hpp"

using namespace qb;

namespace {

Matrix random_matrix(int d, double fill, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (u(rng) < fill) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

}  // namespace

TEST_CASE("apply matches the dense evaluation for every storage kind") {
    std::mt19937 rng(5);
    const SpinSector s(11);
    const int d = s.dim();
    Matrix diag = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) diag(i, i) = cplx(i * 0.5, -0.1 * i);
    const Matrix sparse = random_matrix(d, 0.05, rng);
    const Matrix dense = random_matrix(d, 1.0, rng);
    Matrix real_sparse = Matrix::Zero(d, d);
    real_sparse(0, 3) = 2.0;
    real_sparse(5, 1) = -1.5;

    TimeDependentOperator op(s);
    op.add(Operator(s, diag));
    op.add(Operator(s, sparse), [](double t) { return cplx(std::cos(t), std::sin(2 * t)); }, 1.5);
    op.add(Operator(s, dense), [](double t) { return cplx(0.3 * t, 0.0); }, 10.0);
    op.add(Operator(s, real_sparse), [](double t) { return std::exp(cplx(0.0, t)); }, 1.0);
    CHECK(op.term_count() == 4);
    CHECK_FALSE(op.is_constant());

    std::normal_distribution<double> n(0.0, 1.0);
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = cplx(n(rng), n(rng));
    Matrix xm = random_matrix(d, 1.0, rng);
    for (double t : {0.0, 0.7, 3.1}) {
        const Matrix full = op.at(t).matrix();
        Vector y;
        op.apply(t, x, y);
        CHECK((y - full * x).cwiseAbs().maxCoeff() < 1e-12);
        Matrix ym;
        op.apply(t, xm, ym);
        CHECK((ym - full * xm).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("constant terms are merged") {
    const SpinSector s(3);
    TimeDependentOperator op(s);
    op.add(Operator::identity(s));
    op.add(Operator::identity(s));
    CHECK(op.term_count() == 1);
    CHECK(op.is_constant());
    CHECK(op.at(0.0).matrix()(2, 2).real() == doctest::Approx(2.0));
}

TEST_CASE("norm bound dominates the spectral norm") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = random_matrix(8, 0.5, rng);
        const double exact = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
        CHECK(spectral_norm_bound(m) >= exact * (1.0 - 1e-12));
    }
    SystemParams p;
    p.n_cells = 3;
    p.n_max = 6;
    const ModulationParams m{0.6, 4.0};
    const Hamiltonian h = lab_hamiltonian(p, m);
    for (double t = 0.0; t < 2.0; t += 0.173) {
        const double exact = Eigen::JacobiSVD<Matrix>(h.at(t).matrix()).singularValues()(0);
        CHECK(h.norm_bound() >= exact);
    }
}

TEST_CASE("layout mismatch on add") {
    TimeDependentOperator op(SpinSector(2));
    CHECK_THROWS_AS(op.add(Operator::identity(SpinSector(3))), LayoutError);
}
