#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mlf/config.hpp"
#include "mlf/inclusion.hpp"
#include "mlf/lp.hpp"
#include "mlf/numerics.hpp"
#include "mlf/polygon2d.hpp"
#include "mlf/sets.hpp"

namespace mlf {

/// Drops rows implied by the others. Row r survives iff maximizing r^T x over
/// the remaining retained rows exceeds 1 + tol (or is unbounded). Input order
/// is preserved, and of several identical rows only the last one survives.
inline HPolytope reduce_hrep(const HPolytope& p, double tol = kDefaultTolerances.redundancy) {
    if (!is_bounded(p)) throw UnboundedError("reduce_hrep: polytope is unbounded");
    const Eigen::Index m = p.size();
    std::vector<bool> keep(static_cast<std::size_t>(m), true);
    for (Eigen::Index r = 0; r < m; ++r) {
        std::vector<Eigen::Index> others;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j != r && keep[static_cast<std::size_t>(j)]) others.push_back(j);
        }
        if (others.empty()) continue;
        Matrix sub(static_cast<Eigen::Index>(others.size()), p.dim());
        for (std::size_t i = 0; i < others.size(); ++i) {
            sub.row(static_cast<Eigen::Index>(i)) = p.rows.row(others[i]);
        }
        const LpResult lp = solve_lp(LpProblem{p.rows.row(r).transpose(), sub});
        if (lp.status == LpStatus::optimal && lp.value <= 1.0 + tol) {
            keep[static_cast<std::size_t>(r)] = false;
        }
    }
    Matrix out(std::count(keep.begin(), keep.end(), true), p.dim());
    Eigen::Index at = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
        if (keep[static_cast<std::size_t>(r)]) out.row(at++) = p.rows.row(r);
    }
    return HPolytope{std::move(out)};
}

/// G(S) = {x : gauge_S(A x) + gauge_Q(x) <= 1}: one row s_i^T A + q_j^T per
/// pair of rows, then redundancy removal.
inline HPolytope g_map(const HPolytope& s, const Matrix& a, const HPolytope& q,
                       double tol = kDefaultTolerances.redundancy) {
    require(a.rows() == a.cols(), "g_map: A must be square");
    require_dim(s.dim(), a.rows(), "g_map (S vs A)");
    require_dim(q.dim(), a.rows(), "g_map (Q vs A)");
    const Matrix sa = s.rows * a;
    Matrix rows(sa.rows() * q.size(), a.cols());
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < sa.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.size(); ++j) rows.row(at++) = sa.row(i) + q.rows.row(j);
    }
    return reduce_hrep(HPolytope{std::move(rows)}, tol);
}

/// Direction-sampled Hausdorff distance max_u |support(P,u) - support(R,u)|.
///
/// Directions: normalized rows of both polytopes, vertex directions of both
/// in the plane, and `directions` seeded uniform unit vectors. The result is a
/// lower bound on the true distance.
inline double hausdorff(const HPolytope& p, const HPolytope& r, int directions, std::uint64_t seed) {
    require_dim(r.dim(), p.dim(), "hausdorff");
    require(directions >= 0, "hausdorff: direction count must be nonnegative");
    const Eigen::Index n = p.dim();
    std::vector<Vector> dirs;
    auto add = [&](const Vector& v) {
        const double nv = v.norm();
        if (nv > 1e-12) dirs.push_back(v / nv);
    };
    for (Eigen::Index i = 0; i < p.size(); ++i) add(p.rows.row(i).transpose());
    for (Eigen::Index i = 0; i < r.size(); ++i) add(r.rows.row(i).transpose());
    if (n == 2) {
        for (const auto& v : polygon_vertices(p)) add(v);
        for (const auto& v : polygon_vertices(r)) add(v);
    }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < directions; ++i) dirs.push_back(random_unit_vector(rng, n));

    double worst = 0.0;
    for (const auto& u : dirs) {
        const LpResult a = solve_lp(LpProblem{u, p.rows});
        const LpResult b = solve_lp(LpProblem{u, r.rows});
        if (a.status != LpStatus::optimal || b.status != LpStatus::optimal) {
            throw UnboundedError("hausdorff: polytopes must be bounded");
        }
        worst = std::max(worst, std::abs(a.value - b.value));
    }
    return worst;
}

struct IterateOptions {
    double inclusion_tol = kDefaultTolerances.inclusion;
    double hausdorff_tol = kDefaultTolerances.hausdorff;
    int max_iter = kDefaultMaxIter;
    int hausdorff_directions = 64;
    std::uint64_t seed = 0;
    bool keep_iterates = false;
};

struct FixedPointResult {
    HPolytope S;
    int iterations = 0;
    bool finitely_determined = false;
    // true when stopped by either rule; false means max_iter was exhausted
    bool converged = false;
    double final_hausdorff = 0.0;
    // hausdorff(S_k, S_{k+1}) for every computed step
    std::vector<double> hausdorff_gaps;
    // S_0, S_1, ... when requested
    std::vector<HPolytope> iterates;
};

/// Runs S_{k+1} = G(S_k) from S_0 = Q.
///
/// Stops as finitely determined at the first k with S_k subset S_{k+1}
/// (exact LP inclusion), reporting S = S_k and iterations = k. Otherwise stops
/// approximately once hausdorff(S_k, S_{k+1}) <= hausdorff_tol, reporting
/// S = S_{k+1}, or gives up after max_iter steps.
inline FixedPointResult iterate(const Matrix& a, const HPolytope& q, const IterateOptions& opt = {}) {
    require(a.rows() == a.cols(), "iterate: A must be square");
    require_dim(q.dim(), a.rows(), "iterate");
    require(opt.max_iter >= 1, "iterate: max_iter must be at least 1");
    const double rho = spectral_radius(a);
    require(rho < 1.0, "iterate: spectral radius of A must be < 1 (got " + std::to_string(rho) +
                           "); the limit would not be a proper C-set");

    const HPolytope q_red = reduce_hrep(q, opt.inclusion_tol);
    const Matrix identity = Matrix::Identity(a.rows(), a.cols());
    FixedPointResult out{q_red, 0, false, false, 0.0, {}, {}};
    HPolytope current = q_red;
    if (opt.keep_iterates) out.iterates.push_back(current);

    for (int k = 0; k < opt.max_iter; ++k) {
        HPolytope next = g_map(current, a, q_red, opt.inclusion_tol);
        const double gap = hausdorff(current, next, opt.hausdorff_directions, opt.seed + static_cast<std::uint64_t>(k));
        out.hausdorff_gaps.push_back(gap);
        out.final_hausdorff = gap;
        const InclusionReport inc =
            certify_image_inclusion(identity, SetExpr(current), SetExpr(next), opt.inclusion_tol);
        if (inc.holds) {
            out.S = current;
            out.iterations = k;
            out.finitely_determined = true;
            out.converged = true;
            return out;
        }
        if (opt.keep_iterates) out.iterates.push_back(next);
        current = std::move(next);
        if (gap <= opt.hausdorff_tol) {
            out.S = current;
            out.iterations = k + 1;
            out.converged = true;
            return out;
        }
    }
    out.S = current;
    out.iterations = opt.max_iter;
    return out;
}

inline FixedPointResult iterate(const Matrix& a, const HPolytope& q, double tol, int max_iter) {
    IterateOptions opt;
    opt.inclusion_tol = tol;
    opt.hausdorff_tol = tol;
    opt.max_iter = max_iter;
    return iterate(a, q, opt);
}

}  // namespace mlf
