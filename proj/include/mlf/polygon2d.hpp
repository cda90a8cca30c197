#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mlf/config.hpp"
#include "mlf/lp.hpp"
#include "mlf/sets.hpp"

namespace mlf {

namespace detail {

inline std::vector<Vector> sort_by_angle(std::vector<Vector> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0));
    });
    return pts;
}

inline double cross(const Vector& o, const Vector& a, const Vector& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

}  // namespace detail

/// Extreme points of a planar point cloud, counterclockwise (monotone chain).
inline std::vector<Vector> convex_hull_2d(const Matrix& points, double eps = 1e-12) {
    require(points.cols() == 2, "convex_hull_2d: points must be 2-D");
    std::vector<Vector> p;
    for (Eigen::Index i = 0; i < points.rows(); ++i) p.push_back(points.row(i).transpose());
    std::sort(p.begin(), p.end(), [](const Vector& a, const Vector& b) {
        return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
    });
    if (p.size() < 3) return p;
    std::vector<Vector> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], p[i]) <= eps) --k;
        hull[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && detail::cross(hull[k - 2], hull[k - 1], p[i - 1]) <= eps) --k;
        hull[k++] = p[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

/// Vertices of a bounded 2-D H-polytope, counterclockwise by polar angle.
/// Every pair of facet lines is intersected and infeasible points dropped, so
/// redundant rows are harmless.
inline std::vector<Vector> polygon_vertices(const HPolytope& h, double eps = 1e-9) {
    require(h.dim() == 2, "polygon_vertices: polytope must be 2-D");
    std::vector<Vector> candidates;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        for (Eigen::Index j = i + 1; j < h.size(); ++j) {
            Eigen::Matrix2d m;
            m.row(0) = h.rows.row(i);
            m.row(1) = h.rows.row(j);
            if (std::abs(m.determinant()) < 1e-14) continue;
            const Vector v = m.partialPivLu().solve(Eigen::Vector2d(1.0, 1.0));
            if ((h.rows * v).maxCoeff() <= 1.0 + eps) candidates.push_back(v);
        }
    }
    require(!candidates.empty(), "polygon_vertices: polytope is unbounded or degenerate");
    Matrix pts(static_cast<Eigen::Index>(candidates.size()), 2);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        pts.row(static_cast<Eigen::Index>(i)) = candidates[i].transpose();
    }
    return detail::sort_by_angle(convex_hull_2d(pts));
}

/// Counterclockwise vertex list of any 2-D polytopic set expression.
inline std::vector<Vector> export_polygon(const SetExpr& s) {
    require_dim(s.dim(), 2, "export-2d");
    if (auto h = to_hrep(s)) {
        require(is_bounded(*h), "export-2d: set is unbounded");
        return polygon_vertices(*h);
    }
    if (auto v = to_vrep(s)) return detail::sort_by_angle(convex_hull_2d(v->vertices));
    throw UnsupportedError("export-2d: set is not polytopic");
}

}  // namespace mlf
