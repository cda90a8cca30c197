#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "mlf/config.hpp"
#include "mlf/numerics.hpp"
#include "mlf/sets.hpp"

namespace mlf {

enum class InclusionMethod { ellipsoid_eigen, polytope_lp, intersection_sufficient };

inline std::string to_string(InclusionMethod m) {
    switch (m) {
        case InclusionMethod::ellipsoid_eigen: return "ellipsoid-eigen";
        case InclusionMethod::polytope_lp: return "polytope-lp";
        case InclusionMethod::intersection_sufficient: return "intersection-sufficient";
    }
    return "unknown";
}

/// Outcome of deciding M X subset Y.
///
/// `margin` is the worst violation found: max support/gauge value minus one on
/// the polytope routes, the top eigenvalue of M^T E_Y M - E_X on the ellipsoid
/// route. Negative means strict inclusion; the inclusion is reported as
/// holding whenever margin <= tol, so a margin in (0, tol] is a borderline hold
/// that stays visible in the report.
struct InclusionReport {
    bool holds = false;
    InclusionMethod method = InclusionMethod::polytope_lp;
    double margin = std::numeric_limits<double>::infinity();
};

namespace detail {

inline InclusionReport make_report(double margin, InclusionMethod method, double tol) {
    return InclusionReport{margin <= tol, method, margin};
}

inline InclusionReport certify_impl(const Matrix& m, const SetExpr& x, const SetExpr& y, double tol,
                                    int depth) {
    if (depth > 64) throw UnsupportedError("certify_image_inclusion: expression nesting too deep");
    const auto& xv = x.node().value;
    const auto& yv = y.node().value;

    // Into an intersection: exact, member by member.
    if (auto* in = std::get_if<Intersection>(&yv)) {
        InclusionReport worst{true, InclusionMethod::polytope_lp, -std::numeric_limits<double>::infinity()};
        bool sufficient = false;
        for (const auto& member : in->members) {
            const InclusionReport r = certify_impl(m, x, member, tol, depth + 1);
            sufficient = sufficient || r.method == InclusionMethod::intersection_sufficient;
            if (r.margin >= worst.margin) worst = r;
        }
        if (sufficient) worst.method = InclusionMethod::intersection_sufficient;
        worst.holds = worst.margin <= tol;
        return worst;
    }
    // Scalings and preimages move onto the matrix.
    if (auto* sc = std::get_if<Scaled>(&yv)) return certify_impl(m / sc->alpha, x, sc->inner, tol, depth + 1);
    if (auto* sc = std::get_if<Scaled>(&xv)) return certify_impl(m * sc->alpha, sc->inner, y, tol, depth + 1);
    if (auto* p = std::get_if<Preimage>(&yv)) return certify_impl(p->M * m, x, p->inner, tol, depth + 1);
    if (auto* p = std::get_if<Preimage>(&xv)) {
        if (auto inv = safe_inverse(p->M)) return certify_impl(m * *inv, p->inner, y, tol, depth + 1);
    }
    // M X' subset Y'* iff M^T Y' subset X'*  (polar duality).
    if (auto* po = std::get_if<Polar>(&yv)) return certify_impl(m.transpose(), po->inner, polar(x), tol, depth + 1);

    const auto ex = to_ellipsoid(x);
    const auto ey = to_ellipsoid(y);
    if (ex && ey) {
        const double lam = sym_eig_max(m.transpose() * *ey * m - *ex);
        return make_report(lam, InclusionMethod::ellipsoid_eigen, tol);
    }

    // Polytope routes: support of X along M^T y_j for each row y_j of Y, or the
    // gauge of Y at each image vertex M v of X. Pick whichever needs fewer
    // evaluations.
    const auto y_rows = hrep_size(y);
    const auto x_verts = vrep_size(x);
    const bool h_route = y_rows && support_computable(x);
    const bool v_route = x_verts.has_value();
    if (h_route && (!v_route || *y_rows <= *x_verts)) {
        const HPolytope yh = *to_hrep(y);
        const Matrix dirs = yh.rows * m;  // row j is (M^T y_j)^T
        double worst = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < dirs.rows(); ++j) {
            worst = std::max(worst, support(x, dirs.row(j).transpose()));
        }
        return make_report(worst - 1.0, InclusionMethod::polytope_lp, tol);
    }
    if (v_route) {
        const VPolytope xv_rep = *to_vrep(x);
        const Matrix images = xv_rep.vertices * m.transpose();  // row i is (M v_i)^T
        double worst = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < images.rows(); ++i) {
            worst = std::max(worst, gauge(y, images.row(i).transpose()));
        }
        return make_report(worst - 1.0, InclusionMethod::polytope_lp, tol);
    }

    // Mixed intersection X: X is contained in each member, so any member whose
    // image fits certifies the whole (sufficient only).
    if (auto* in = std::get_if<Intersection>(&xv)) {
        double best = std::numeric_limits<double>::infinity();
        bool any = false;
        for (const auto& member : in->members) {
            try {
                const InclusionReport r = certify_impl(m, member, y, tol, depth + 1);
                best = std::min(best, r.margin);
                any = true;
            } catch (const UnsupportedError&) {
            } catch (const UnboundedError&) {
            }
        }
        if (!any) throw UnsupportedError("certify_image_inclusion: no member of X admits a certificate");
        return make_report(best, InclusionMethod::intersection_sufficient, tol);
    }
    if (auto* po = std::get_if<Polar>(&xv)) {
        const SetExpr py = polar(y);
        if (!py.as<Polar>()) return certify_impl(m.transpose(), py, po->inner, tol, depth + 1);
    }
    throw UnsupportedError("certify_image_inclusion: unsupported representation pair");
}

}  // namespace detail

/// Decides M X subset Y for proper C-sets X and Y.
///
/// Ellipsoid pairs use the eigenvalue test on M^T E_Y M - E_X. Polytopic pairs
/// are exact: either support(X, M^T y_j) <= 1 over the rows of Y (LP or closed
/// form), or gauge(Y, M v) <= 1 over a vertex list of X. Into an intersection
/// the test runs member by member. A mixed polytope/ellipsoid intersection X
/// falls back to the sufficient member-wise route and is reported as such.
inline InclusionReport certify_image_inclusion(const Matrix& m, const SetExpr& x, const SetExpr& y,
                                               double tol = kDefaultTolerances.inclusion) {
    require(m.allFinite(), "certify_image_inclusion: matrix entries must be finite");
    require_dim(m.cols(), x.dim(), "certify_image_inclusion (M columns vs X)");
    require_dim(m.rows(), y.dim(), "certify_image_inclusion (M rows vs Y)");
    require(tol >= 0.0, "certify_image_inclusion: tolerance must be nonnegative");
    return detail::certify_impl(m, x, y, tol, 0);
}

struct PowerSearch {
    int k = 0;
    InclusionReport report;
};

/// Least k in [1, cap] with M^k X subset contraction * X, with powers
/// accumulated one multiplication per candidate.
inline PowerSearch search_minimal_power(const Matrix& m, const SetExpr& x, double contraction,
                                        int cap = kDefaultPowerCap,
                                        double tol = kDefaultTolerances.inclusion) {
    require(m.rows() == m.cols(), "minimal_power_k: matrix must be square");
    require_dim(m.rows(), x.dim(), "minimal_power_k");
    require(contraction > 0.0 && contraction <= 1.0, "minimal_power_k: contraction must lie in (0, 1]");
    require(cap >= 1, "minimal_power_k: cap must be at least 1");
    const double rho = spectral_radius(m);
    require(rho < 1.0, "minimal_power_k: spectral radius must be < 1 (got " + std::to_string(rho) + ")");

    const SetExpr target = scale(contraction, x);
    Matrix power = m;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= cap; ++k) {
        const InclusionReport r = certify_image_inclusion(power, x, target, tol);
        if (r.holds) return PowerSearch{k, r};
        best = std::min(best, r.margin);
        power = power * m;
    }
    throw NumericalError("minimal_power_k: cap " + std::to_string(cap) +
                         " exhausted; best margin " + std::to_string(best));
}

inline int minimal_power_k(const Matrix& m, const SetExpr& x, double contraction,
                           int cap = kDefaultPowerCap, double tol = kDefaultTolerances.inclusion) {
    return search_minimal_power(m, x, contraction, cap, tol).k;
}

}  // namespace mlf
