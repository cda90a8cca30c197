#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "mlf/config.hpp"
#include "mlf/numerics.hpp"
#include "mlf/sets.hpp"

namespace mlf {

struct LyapunovCheck {
    double max_violation = -std::numeric_limits<double>::infinity();
    double equation_residual = 0.0;
    Vector argmax;
};

/// Samples gauge_s(A x) + gauge(Q, x) - gauge_s(x) over uniform unit-sphere
/// points. All three terms are positively homogeneous, so the sphere covers
/// every direction of R^n. Deterministic per seed.
template <class GaugeS>
LyapunovCheck check_minkowski_lyapunov(GaugeS&& gauge_s, const Matrix& a, const SetExpr& q,
                                       int samples, std::uint64_t seed) {
    require(samples >= 1, "verify: samples must be at least 1");
    require(a.rows() == a.cols(), "verify: A must be square");
    require_dim(q.dim(), a.rows(), "verify");
    std::mt19937_64 rng(seed);
    LyapunovCheck out;
    for (int s = 0; s < samples; ++s) {
        const Vector x = random_unit_vector(rng, a.rows());
        const Vector ax = a * x;
        const double v = gauge_s(ax) + gauge(q, x) - gauge_s(x);
        if (v > out.max_violation) {
            out.max_violation = v;
            out.argmax = x;
        }
        out.equation_residual = std::max(out.equation_residual, std::abs(v));
    }
    return out;
}

}  // namespace mlf
