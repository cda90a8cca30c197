#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "mlf/certificate.hpp"
#include "mlf/config.hpp"
#include "mlf/fixed_point.hpp"
#include "mlf/polygon2d.hpp"
#include "mlf/sets.hpp"

namespace mlf {

enum class RpiKind { invariant, minimal };

inline std::string to_string(RpiKind k) { return k == RpiKind::invariant ? "invariant" : "minimal"; }

/// Z = S* for the polar dynamics z+ = A^T z + w, w in Q*. Z is carried only
/// through its support function, which equals the gauge of S.
struct RpiSet {
    std::variant<MlfCertificate, HPolytope> source;
    RpiKind kind = RpiKind::invariant;

    Eigen::Index dim() const {
        if (auto* c = std::get_if<MlfCertificate>(&source)) return c->A.rows();
        return std::get<HPolytope>(source).dim();
    }
};

inline RpiSet polar_rpi(const MlfCertificate& cert) { return RpiSet{cert, RpiKind::invariant}; }

/// A fixed-point generator set yields the minimal RPI set; pass
/// RpiKind::invariant for an S that is only known to satisfy S subset G(S).
inline RpiSet polar_rpi(const HPolytope& s, RpiKind kind = RpiKind::minimal) {
    return RpiSet{s, kind};
}

inline RpiSet polar_rpi(const FixedPointResult& fp) {
    require(fp.converged, "polar_rpi: fixed-point iteration did not converge");
    return RpiSet{fp.S, RpiKind::minimal};
}

inline double support(const RpiSet& z, const Vector& y) {
    require_dim(y.size(), z.dim(), "support");
    if (auto* c = std::get_if<MlfCertificate>(&z.source)) return eval(*c, y);
    const auto& s = std::get<HPolytope>(z.source);
    return std::max(0.0, (s.rows * y).maxCoeff());
}

struct RpiCheck {
    double max_violation = 0.0;
    double equation_residual = 0.0;
    int directions = 0;
    std::uint64_t seed = 0;
};

/// Samples support_Z(A y) + support_W(y) - support_Z(y) over unit directions.
/// A nonpositive maximum means A^T Z + W subset Z on the sampled directions;
/// a zero residual is the fixed-point equation A^T Z + W = Z.
///
/// Directions are `directions` seeded sphere points plus the normalized facet
/// normals of whatever H-representations are at hand (rows of S, which are
/// the vertices of Z; planar vertices of S, which are facet normals of Z; and
/// the rows of W when W is polytopic).
inline RpiCheck verify_rpi(const RpiSet& z, const Matrix& a, const SetExpr& w, int directions,
                           std::uint64_t seed) {
    require(directions >= 1, "verify_rpi: directions must be at least 1");
    require(a.rows() == a.cols(), "verify_rpi: A must be square");
    require_dim(a.rows(), z.dim(), "verify_rpi (A vs Z)");
    require_dim(w.dim(), z.dim(), "verify_rpi (W vs Z)");
    require(support_computable(w), "verify_rpi: support of W is not computable");

    const Eigen::Index n = a.rows();
    std::vector<Vector> dirs;
    auto add = [&](const Vector& v) {
        const double nv = v.norm();
        if (nv > 1e-12) dirs.push_back(v / nv);
    };
    std::mt19937_64 rng(seed);
    for (int i = 0; i < directions; ++i) dirs.push_back(random_unit_vector(rng, n));
    if (auto* s = std::get_if<HPolytope>(&z.source)) {
        for (Eigen::Index i = 0; i < s->size(); ++i) add(s->rows.row(i).transpose());
        if (n == 2 && is_bounded(*s)) {
            for (const auto& v : polygon_vertices(*s)) add(v);
        }
    }
    if (auto k = hrep_size(w); k && *k <= 4096) {
        const HPolytope wh = *to_hrep(w);
        for (Eigen::Index i = 0; i < wh.size(); ++i) add(wh.rows.row(i).transpose());
    }

    RpiCheck out{-std::numeric_limits<double>::infinity(), 0.0, directions, seed};
    for (const auto& y : dirs) {
        const double v = support(z, Vector(a * y)) + support(w, y) - support(z, y);
        out.max_violation = std::max(out.max_violation, v);
        out.equation_residual = std::max(out.equation_residual, std::abs(v));
    }
    return out;
}

/// One-sided membership in Z = {x : y^T x <= support_Z(y) for all y}.
/// Returns false as soon as a sampled direction separates x (an exact
/// non-membership certificate); true means no separating direction was found.
inline bool rpi_may_contain(const RpiSet& z, const Vector& x, int directions, std::uint64_t seed,
                            double tol = kDefaultTolerances.membership) {
    require_dim(x.size(), z.dim(), "rpi_may_contain");
    std::mt19937_64 rng(seed);
    auto separates = [&](const Vector& y) { return y.dot(x) > support(z, y) + tol; };
    if (x.norm() > 0.0 && separates(x / x.norm())) return false;
    for (int i = 0; i < directions; ++i) {
        if (separates(random_unit_vector(rng, x.size()))) return false;
    }
    return true;
}

}  // namespace mlf
