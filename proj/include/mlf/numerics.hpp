#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Eigenvalues>

#include "mlf/config.hpp"
#include "mlf/lp.hpp"

namespace mlf {

/// Largest eigenvalue modulus. Real Schur form (Hessenberg reduction followed
/// by Francis double-shift QR) handles complex pairs. If that stalls, the
/// complex solver is retried on randomly shifted copies, up to three times.
inline double spectral_radius(const Matrix& a) {
    require(a.rows() == a.cols() && a.rows() >= 1, "spectral_radius: matrix must be square");
    require(a.allFinite(), "spectral_radius: entries must be finite");

    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() == Eigen::Success) return es.eigenvalues().cwiseAbs().maxCoeff();

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = a.cwiseAbs().maxCoeff() + 1.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::complex<double> shift(scale * unit(rng), scale * unit(rng));
        Eigen::MatrixXcd shifted = a.cast<std::complex<double>>();
        shifted.diagonal().array() += shift;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(shifted, false);
        if (ces.info() == Eigen::Success) {
            return (ces.eigenvalues().array() - shift).abs().maxCoeff();
        }
    }
    throw NumericalError("spectral_radius: eigenvalue iteration did not converge");
}

/// Largest eigenvalue of the symmetric part of s.
inline double sym_eig_max(const Matrix& s) {
    require(s.rows() == s.cols() && s.rows() >= 1, "sym_eig_max: matrix must be square");
    const Matrix sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("sym_eig_max: solver failed");
    return es.eigenvalues().maxCoeff();
}

/// m^k by repeated multiplication; k = 0 gives the identity.
inline Matrix mat_pow(const Matrix& m, int k) {
    require(m.rows() == m.cols(), "mat_pow: matrix must be square");
    require(k >= 0, "mat_pow: exponent must be nonnegative");
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

// Uniform direction on the unit sphere.
inline Vector random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    do {
        for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

}  // namespace mlf
