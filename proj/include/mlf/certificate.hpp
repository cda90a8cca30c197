#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include "mlf/config.hpp"
#include "mlf/inclusion.hpp"
#include "mlf/lyapunov_check.hpp"
#include "mlf/numerics.hpp"
#include "mlf/sets.hpp"

namespace mlf {

enum class MlfForm { max, sum };

inline std::string to_string(MlfForm f) { return f == MlfForm::max ? "max" : "sum"; }

/// Implicit Minkowski-Lyapunov function for x+ = A x.
///
/// max form:  gauge_S(x) = (1 - gamma)^-1 max_{i<k} gauge_Q((A / gamma)^i x),
///            valid once (A / gamma)^k Q subset Q.
/// sum form:  gauge_S(x) = (1 - gamma)^-1 sum_{i<k} gauge_Q(A^i x),
///            valid once (A^T)^k Q* subset gamma Q*.
///
/// The generator set S is never formed; A and Q travel with the certificate.
struct MlfCertificate {
    MlfForm form = MlfForm::max;
    Matrix A;
    SetExpr Q;
    double gamma = 0.5;
    int k = 1;
    double rho = 0.0;
};

inline double default_gamma(double rho) { return 0.5 * (rho + 1.0); }

namespace detail {

inline double checked_rho(const Matrix& a, const SetExpr& q) {
    require(a.rows() == a.cols(), "construct: A must be square");
    require_dim(q.dim(), a.rows(), "construct (Q vs A)");
    const double rho = spectral_radius(a);
    require(rho < 1.0, "construct: spectral radius of A must be < 1 (got " + std::to_string(rho) + ")");
    return rho;
}

}  // namespace detail

inline MlfCertificate construct_max(const Matrix& a, const SetExpr& q,
                                    std::optional<double> gamma = std::nullopt,
                                    int cap = kDefaultPowerCap) {
    const double rho = detail::checked_rho(a, q);
    const double g = gamma.value_or(default_gamma(rho));
    require(g > rho && g < 1.0, "construct_max: gamma must lie in (rho(A), 1) = (" +
                                    std::to_string(rho) + ", 1), got " + std::to_string(g));
    const int k = minimal_power_k(a / g, q, 1.0, cap);
    return MlfCertificate{MlfForm::max, a, q, g, k, rho};
}

inline MlfCertificate construct_sum(const Matrix& a, const SetExpr& q,
                                    std::optional<double> gamma = std::nullopt,
                                    int cap = kDefaultPowerCap) {
    const double rho = detail::checked_rho(a, q);
    const double g = gamma.value_or(default_gamma(rho));
    require(g > 0.0 && g < 1.0, "construct_sum: gamma must lie in (0, 1), got " + std::to_string(g));
    const int k = minimal_power_k(a.transpose(), polar(q), g, cap);
    return MlfCertificate{MlfForm::sum, a, q, g, k, rho};
}

/// Pointwise value of the implicit function: one matrix-vector product per term.
inline double eval(const MlfCertificate& c, const Vector& x) {
    require_dim(x.size(), c.A.cols(), "eval");
    Vector z = x;
    double acc = 0.0;
    if (c.form == MlfForm::max) {
        const Matrix step = c.A / c.gamma;
        for (int i = 0; i < c.k; ++i) {
            acc = std::max(acc, gauge(c.Q, z));
            if (i + 1 < c.k) z = step * z;
        }
    } else {
        for (int i = 0; i < c.k; ++i) {
            acc += gauge(c.Q, z);
            if (i + 1 < c.k) z = c.A * z;
        }
    }
    return acc / (1.0 - c.gamma);
}

struct InequalityCheck {
    double max_violation;
    Vector argmax;
};

/// Largest eval(Ax) + gauge(Q, x) - eval(x) over `samples` unit-sphere points.
inline InequalityCheck verify_inequality(const MlfCertificate& c, int samples, std::uint64_t seed) {
    const auto r = check_minkowski_lyapunov([&](const Vector& v) { return eval(c, v); }, c.A, c.Q,
                                            samples, seed);
    return InequalityCheck{r.max_violation, r.argmax};
}

/// Un-reduced H-representation of S for a max-form certificate with polytopic Q:
/// rows (1 - gamma)^-1 q_j^T (A / gamma)^i for i < k.
inline HPolytope explicit_hrep(const MlfCertificate& c) {
    require(c.form == MlfForm::max, "explicit_hrep: only the max form has a finite H-representation");
    auto qh = to_hrep(c.Q);
    require(qh.has_value(), "explicit_hrep: Q must be polytopic");
    const Eigen::Index nq = qh->size();
    const Eigen::Index n = c.A.cols();
    Matrix rows(nq * c.k, n);
    Matrix block = qh->rows / (1.0 - c.gamma);
    const Matrix step = c.A / c.gamma;
    for (int i = 0; i < c.k; ++i) {
        rows.middleRows(i * nq, nq) = block;
        block = block * step;
    }
    return HPolytope{std::move(rows)};
}

}  // namespace mlf
