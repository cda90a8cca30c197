#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "generators.hpp"
#include "mlf/mlf.hpp"

using namespace mlf;
using gen::mat;
using gen::vec;

namespace {

// Eigenvalues of a 2x2 matrix from its characteristic polynomial.
std::pair<std::complex<double>, std::complex<double>> eig2(const Matrix& m) {
    const double tr = m.trace();
    const double det = m.determinant();
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

}  // namespace

TEST(SpectralRadius, TwoDimExample) {
    EXPECT_NEAR(spectral_radius(mat({{1, 1}, {-0.72, -0.7}})), 0.2, 1e-12);
}

TEST(SpectralRadius, Identity) { EXPECT_NEAR(spectral_radius(Matrix::Identity(2, 2)), 1.0, 1e-12); }

TEST(SpectralRadius, Scalar) { EXPECT_NEAR(spectral_radius(mat({{0.5}})), 0.5, 1e-12); }

TEST(SpectralRadius, ComplexPair) {
    // rotation by 90 degrees scaled by 0.9: eigenvalues +-0.9i
    EXPECT_NEAR(spectral_radius(mat({{0, -0.9}, {0.9, 0}})), 0.9, 1e-12);
}

TEST(SpectralRadius, NilpotentIsZero) { EXPECT_NEAR(spectral_radius(mat({{0, 1}, {0, 0}})), 0.0, 1e-12); }

TEST(SpectralRadius, RejectsNonSquare) { EXPECT_THROW(spectral_radius(Matrix::Ones(2, 3)), PreconditionError); }

TEST(SpectralRadius, MatchesCharacteristicPolynomial2x2) {
    gen::Rng r(11);
    for (int t = 0; t < 200; ++t) {
        const Matrix m = gen::matrix(r, 2, 2);
        const auto [l1, l2] = eig2(m);
        EXPECT_NEAR(spectral_radius(m), std::max(std::abs(l1), std::abs(l2)), 1e-10);
    }
}

TEST(SpectralRadius, BoundedByInducedNormsAndPowerRule) {
    gen::Rng r(12);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = r.integer(1, 8);
        const Matrix m = gen::matrix(r, n, n);
        const double rho = spectral_radius(m);
        const double row_sum = m.cwiseAbs().rowwise().sum().maxCoeff();
        const double col_sum = m.cwiseAbs().colwise().sum().maxCoeff();
        EXPECT_LE(rho, row_sum * (1 + 1e-12));
        EXPECT_LE(rho, col_sum * (1 + 1e-12));
        for (int k = 2; k <= 4; ++k) {
            const double rk = spectral_radius(mat_pow(m, k));
            EXPECT_NEAR(rk, std::pow(rho, k), 1e-8 * std::max(1.0, std::pow(rho, k)));
        }
    }
}

TEST(SymEigMax, Examples) {
    EXPECT_NEAR(sym_eig_max(mat({{-0.75, 0}, {0, -0.75}})), -0.75, 1e-12);
    EXPECT_NEAR(sym_eig_max(Matrix::Zero(2, 2)), 0.0, 1e-12);
    EXPECT_NEAR(sym_eig_max(mat({{2, 1}, {1, 2}})), 3.0, 1e-12);
}

TEST(SymEigMax, SymmetrizesInput) {
    // symmetrized is [[0,1],[1,0]] with top eigenvalue 1
    EXPECT_NEAR(sym_eig_max(mat({{0, 2}, {0, 0}})), 1.0, 1e-12);
}

TEST(SymEigMax, MatchesCharacteristicPolynomial2x2) {
    gen::Rng r(13);
    for (int t = 0; t < 300; ++t) {
        const Matrix g = gen::matrix(r, 2, 2);
        const Matrix s = 0.5 * (g + g.transpose());
        const double tr = s.trace();
        const double det = s.determinant();
        const double top = tr / 2.0 + std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        EXPECT_NEAR(sym_eig_max(s), top, 1e-10);
    }
}

TEST(MatPow, Examples) {
    EXPECT_TRUE(mat_pow(mat({{0, 2}, {0.3, 0}}), 2).isApprox(mat({{0.6, 0}, {0, 0.6}}), 1e-14));
    gen::Rng r(14);
    const Matrix m = gen::matrix(r, 3, 3);
    EXPECT_EQ(mat_pow(m, 0), Matrix::Identity(3, 3));
    EXPECT_NEAR(mat_pow(mat({{0.5}}), 3)(0, 0), 0.125, 1e-15);
}

TEST(MatPow, RejectsNegativeAndNonSquare) {
    EXPECT_THROW(mat_pow(Matrix::Identity(2, 2), -1), PreconditionError);
    EXPECT_THROW(mat_pow(Matrix::Ones(2, 3), 2), PreconditionError);
}

TEST(SolveLp, BoxCorner) {
    const LpResult r = solve_lp(LpProblem{vec({1, 1}), mat({{1, 0}, {-1, 0}, {0, 1}, {0, -1}})});
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
    EXPECT_TRUE(r.point.isApprox(vec({1, 1}), 1e-12));
}

TEST(SolveLp, ZeroObjective) {
    const LpResult r = solve_lp(LpProblem{vec({0, 0}), mat({{1, 2}, {-3, 1}})});
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_EQ(r.value, 0.0);
}

TEST(SolveLp, SlabIsUnbounded) {
    const LpResult r = solve_lp(LpProblem{vec({1, 0}), mat({{0, 1}, {0, -1}})});
    EXPECT_EQ(r.status, LpStatus::unbounded);
}

TEST(SolveLp, DegenerateVertexTerminates) {
    // many constraints active at (1, 1); Bland's rule must not cycle
    Matrix rows(8, 2);
    rows << 1, 0, 0, 1, 0.5, 0.5, 0.25, 0.75, 0.75, 0.25, -1, 0, 0, -1, 0.5, 0.5;
    const LpResult r = solve_lp(LpProblem{vec({1, 1}), rows});
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(SolveLp, RejectsMalformedProblems) {
    EXPECT_THROW(solve_lp(LpProblem{vec({1, 0}), Matrix(0, 2)}), PreconditionError);
    EXPECT_THROW(solve_lp(LpProblem{vec({1, 0, 0}), mat({{1, 0}})}), DimensionError);
    Matrix bad = mat({{1, 0}, {0, 1}});
    bad(0, 0) = std::nan("");
    EXPECT_THROW(solve_lp(LpProblem{vec({1, 0}), bad}), PreconditionError);
}

TEST(SolveLp, MatchesVertexMaximumIn2D) {
    gen::Rng r(15);
    for (int t = 0; t < 300; ++t) {
        const auto h = gen::hpolytope(r, 2, r.integer(0, 8));
        const Vector c = gen::vector(r, 2);
        const LpResult lp = solve_lp(LpProblem{c, h.rows});
        ASSERT_EQ(lp.status, LpStatus::optimal);
        double best = -1e300;
        for (const auto& v : gen::brute_vertices_2d(h.rows)) best = std::max(best, c.dot(v));
        EXPECT_NEAR(lp.value, best, 1e-9);
        EXPECT_LE((h.rows * lp.point).maxCoeff(), 1.0 + 1e-9);
        EXPECT_NEAR(c.dot(lp.point), lp.value, 1e-12);
    }
}

TEST(SolveLp, MatchesVertexMaximumOfCrossPolytopeInHigherDim) {
    gen::Rng r(16);
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index n = r.integer(2, 6);
        const Matrix rows = detail::sign_vectors(n);  // H-form of the unit 1-ball
        const Vector c = gen::vector(r, n);
        const LpResult lp = solve_lp(LpProblem{c, rows});
        ASSERT_EQ(lp.status, LpStatus::optimal);
        EXPECT_NEAR(lp.value, c.cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(SolveLp, MatchesVertexMaximumIn3D) {
    // every vertex is the solution of three tight rows
    gen::Rng r(17);
    for (int t = 0; t < 150; ++t) {
        const auto h = gen::hpolytope(r, 3, r.integer(0, 9));
        const Vector c = gen::vector(r, 3);
        const LpResult lp = solve_lp(LpProblem{c, h.rows});
        ASSERT_EQ(lp.status, LpStatus::optimal);
        double best = -1e300;
        const Eigen::Index m = h.rows.rows();
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                for (Eigen::Index k = j + 1; k < m; ++k) {
                    Matrix b(3, 3);
                    b << h.rows.row(i), h.rows.row(j), h.rows.row(k);
                    const Eigen::FullPivLU<Matrix> lu(b);
                    if (lu.rank() < 3) continue;
                    const Vector v = lu.solve(Vector::Ones(3));
                    if ((h.rows * v).maxCoeff() <= 1.0 + 1e-10) best = std::max(best, c.dot(v));
                }
            }
        }
        EXPECT_NEAR(lp.value, best, 1e-9 * std::max(1.0, std::abs(best)));
        EXPECT_LE((h.rows * lp.point).maxCoeff(), 1.0 + 1e-9);
    }
}

TEST(SolveLp, LinesOrthogonalToTheObjective) {
    // feasible set is a slab in x times the whole (y, z) plane
    const LpResult a = solve_lp(LpProblem{vec({2, 0, 0}), mat({{1, 0, 0}, {-1, 0, 0}})});
    ASSERT_EQ(a.status, LpStatus::optimal);
    EXPECT_NEAR(a.value, 2.0, 1e-12);
    const LpResult b = solve_lp(LpProblem{vec({2, 0, 1e-3}), mat({{1, 0, 0}, {-1, 0, 0}})});
    EXPECT_EQ(b.status, LpStatus::unbounded);
    // bounded in z only after the slab fixes x
    const LpResult c = solve_lp(LpProblem{vec({1, 0, 1}), mat({{1, 0, 0}, {-1, 0, 0}, {0, 0, 1}})});
    ASSERT_EQ(c.status, LpStatus::optimal);
    EXPECT_NEAR(c.value, 2.0, 1e-12);
}
