#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlf/config.hpp"
#include "mlf/numerics.hpp"

namespace mlf {

// ---------------------------------------------------------------------------
// Leaf representations
// ---------------------------------------------------------------------------

/// {x : p_i^T x <= 1 for every row p_i}. The right-hand side is always 1, so the
/// origin is interior by construction.
struct HPolytope {
    Matrix rows;
    Eigen::Index dim() const { return rows.cols(); }
    Eigen::Index size() const { return rows.rows(); }
};

/// conv{v_i}, one vertex per row. The hull must contain the origin in its interior.
struct VPolytope {
    Matrix vertices;
    Eigen::Index dim() const { return vertices.cols(); }
};

/// {x : sqrt(x^T E x) <= 1}, E symmetric positive definite.
struct Ellipsoid {
    Matrix E;
    Eigen::Index dim() const { return E.rows(); }
};

struct BallInf {
    Eigen::Index n;
};

struct Ball1 {
    Eigen::Index n;
};

// ---------------------------------------------------------------------------
// Expression tree
// ---------------------------------------------------------------------------

struct SetNode;

/// Immutable handle to a convex-set expression. Copies share the node.
class SetExpr {
public:
    SetExpr(HPolytope h);
    SetExpr(VPolytope v);
    SetExpr(Ellipsoid e);
    SetExpr(BallInf b);
    SetExpr(Ball1 b);

    Eigen::Index dim() const;
    const SetNode& node() const { return *node_; }

    template <class T>
    const T* as() const;

    // Composite nodes are built through intersect/preimage/scale/polar, or
    // verbatim through these when no simplification is wanted.
    static SetExpr intersection_node(std::vector<SetExpr> members);
    static SetExpr preimage_node(Matrix m, SetExpr inner);
    static SetExpr scaled_node(double alpha, SetExpr inner);
    static SetExpr polar_node(SetExpr inner);

private:
    explicit SetExpr(std::shared_ptr<const SetNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const SetNode> node_;
};

struct Intersection {
    std::vector<SetExpr> members;
};

/// {x : M x in inner}
struct Preimage {
    Matrix M;
    SetExpr inner;
};

/// alpha * inner
struct Scaled {
    double alpha;
    SetExpr inner;
};

struct Polar {
    SetExpr inner;
};

struct SetNode {
    std::variant<HPolytope, VPolytope, Ellipsoid, BallInf, Ball1, Intersection, Preimage, Scaled,
                 Polar>
        value;
    Eigen::Index dim;
    // Cholesky factor of E for ellipsoid leaves; empty otherwise.
    std::optional<Eigen::LLT<Matrix>> chol;
};

template <class T>
const T* SetExpr::as() const {
    return std::get_if<T>(&node_->value);
}

inline Eigen::Index SetExpr::dim() const { return node_->dim; }

namespace detail {

inline void check_matrix(const Matrix& m, const char* ctx) {
    if (m.rows() < 1 || m.cols() < 1) throw PreconditionError(std::string(ctx) + ": empty matrix");
    if (!m.allFinite()) throw PreconditionError(std::string(ctx) + ": entries must be finite");
}

}  // namespace detail

inline SetExpr::SetExpr(HPolytope h) {
    detail::check_matrix(h.rows, "hpolytope");
    const auto d = h.dim();
    node_ = std::make_shared<const SetNode>(SetNode{std::move(h), d, std::nullopt});
}

inline SetExpr::SetExpr(VPolytope v) {
    detail::check_matrix(v.vertices, "vpolytope");
    const auto d = v.dim();
    node_ = std::make_shared<const SetNode>(SetNode{std::move(v), d, std::nullopt});
}

inline SetExpr::SetExpr(Ellipsoid e) {
    detail::check_matrix(e.E, "ellipsoid");
    require(e.E.rows() == e.E.cols(), "ellipsoid: E must be square");
    const Matrix sym = 0.5 * (e.E + e.E.transpose());
    const double scale = std::max(1.0, e.E.cwiseAbs().maxCoeff());
    require((sym - e.E).cwiseAbs().maxCoeff() <= 1e-10 * scale,
            "ellipsoid: E must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0,
            "ellipsoid: E must be positive definite");
    Eigen::LLT<Matrix> llt(sym);
    require(llt.info() == Eigen::Success, "ellipsoid: E must be positive definite");
    const auto d = sym.rows();
    node_ = std::make_shared<const SetNode>(SetNode{Ellipsoid{sym}, d, std::move(llt)});
}

inline SetExpr::SetExpr(BallInf b) {
    require(b.n >= 1, "ball-inf: dimension must be positive");
    node_ = std::make_shared<const SetNode>(SetNode{b, b.n, std::nullopt});
}

inline SetExpr::SetExpr(Ball1 b) {
    require(b.n >= 1, "ball-1: dimension must be positive");
    node_ = std::make_shared<const SetNode>(SetNode{b, b.n, std::nullopt});
}

inline SetExpr SetExpr::intersection_node(std::vector<SetExpr> members) {
    require(!members.empty(), "intersect: empty list");
    const auto d = members.front().dim();
    for (const auto& m : members) require_dim(m.dim(), d, "intersect");
    return SetExpr(std::make_shared<const SetNode>(
        SetNode{Intersection{std::move(members)}, d, std::nullopt}));
}

inline SetExpr SetExpr::preimage_node(Matrix m, SetExpr inner) {
    detail::check_matrix(m, "preimage");
    require_dim(m.rows(), inner.dim(), "preimage");
    const auto d = m.cols();
    return SetExpr(std::make_shared<const SetNode>(
        SetNode{Preimage{std::move(m), std::move(inner)}, d, std::nullopt}));
}

inline SetExpr SetExpr::scaled_node(double alpha, SetExpr inner) {
    require(std::isfinite(alpha) && alpha > 0.0, "scale: alpha must be positive");
    const auto d = inner.dim();
    return SetExpr(std::make_shared<const SetNode>(
        SetNode{Scaled{alpha, std::move(inner)}, d, std::nullopt}));
}

inline SetExpr SetExpr::polar_node(SetExpr inner) {
    const auto d = inner.dim();
    return SetExpr(
        std::make_shared<const SetNode>(SetNode{Polar{std::move(inner)}, d, std::nullopt}));
}

// ---------------------------------------------------------------------------
// Representation conversions
// ---------------------------------------------------------------------------

// Largest dimension for which the 2^n sign vectors of a ball are enumerated.
inline constexpr Eigen::Index kMaxSignEnumerationDim = 16;

namespace detail {

inline Matrix sign_vectors(Eigen::Index n) {
    const Eigen::Index count = Eigen::Index{1} << n;
    Matrix out(count, n);
    for (Eigen::Index r = 0; r < count; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) out(r, c) = ((r >> c) & 1) ? -1.0 : 1.0;
    }
    return out;
}

inline Matrix signed_identity(Eigen::Index n) {
    Matrix out(2 * n, n);
    out.topRows(n) = Matrix::Identity(n, n);
    out.bottomRows(n) = -Matrix::Identity(n, n);
    return out;
}

// Inverse of a square matrix when it is safely invertible.
inline std::optional<Matrix> safe_inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kDefaultTolerances.max_condition) {
        return std::nullopt;
    }
    return lu.inverse();
}

}  // namespace detail

/// Number of rows a finite H-representation would have, if one is available.
inline std::optional<std::size_t> hrep_size(const SetExpr& s);
/// Number of points a finite V-representation would have, if one is available.
inline std::optional<std::size_t> vrep_size(const SetExpr& s);

inline std::optional<std::size_t> hrep_size(const SetExpr& s) {
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return static_cast<std::size_t>(h->size());
    if (auto* b = std::get_if<BallInf>(&v)) return static_cast<std::size_t>(2 * b->n);
    if (auto* b = std::get_if<Ball1>(&v)) {
        if (b->n > kMaxSignEnumerationDim) return std::nullopt;
        return std::size_t{1} << b->n;
    }
    if (auto* in = std::get_if<Intersection>(&v)) {
        std::size_t total = 0;
        for (const auto& m : in->members) {
            auto k = hrep_size(m);
            if (!k) return std::nullopt;
            total += *k;
        }
        return total;
    }
    if (auto* p = std::get_if<Preimage>(&v)) return hrep_size(p->inner);
    if (auto* sc = std::get_if<Scaled>(&v)) return hrep_size(sc->inner);
    if (auto* po = std::get_if<Polar>(&v)) return vrep_size(po->inner);
    return std::nullopt;
}

inline std::optional<std::size_t> vrep_size(const SetExpr& s) {
    const auto& v = s.node().value;
    if (auto* vp = std::get_if<VPolytope>(&v)) return static_cast<std::size_t>(vp->vertices.rows());
    if (auto* b = std::get_if<Ball1>(&v)) return static_cast<std::size_t>(2 * b->n);
    if (auto* b = std::get_if<BallInf>(&v)) {
        if (b->n > kMaxSignEnumerationDim) return std::nullopt;
        return std::size_t{1} << b->n;
    }
    if (auto* sc = std::get_if<Scaled>(&v)) return vrep_size(sc->inner);
    if (auto* po = std::get_if<Polar>(&v)) return hrep_size(po->inner);
    if (auto* p = std::get_if<Preimage>(&v)) {
        if (p->M.rows() != p->M.cols() || !detail::safe_inverse(p->M)) return std::nullopt;
        return vrep_size(p->inner);
    }
    return std::nullopt;
}

inline std::optional<HPolytope> to_hrep(const SetExpr& s);
inline std::optional<VPolytope> to_vrep(const SetExpr& s);

/// Finite H-representation (rows of the normalized form), when one exists
/// without facet enumeration. Rows may be redundant.
inline std::optional<HPolytope> to_hrep(const SetExpr& s) {
    if (!hrep_size(s)) return std::nullopt;
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return *h;
    if (auto* b = std::get_if<BallInf>(&v)) return HPolytope{detail::signed_identity(b->n)};
    if (auto* b = std::get_if<Ball1>(&v)) return HPolytope{detail::sign_vectors(b->n)};
    if (auto* in = std::get_if<Intersection>(&v)) {
        std::vector<Matrix> parts;
        Eigen::Index total = 0;
        for (const auto& m : in->members) {
            parts.push_back(to_hrep(m)->rows);
            total += parts.back().rows();
        }
        Matrix rows(total, s.dim());
        Eigen::Index at = 0;
        for (const auto& p : parts) {
            rows.middleRows(at, p.rows()) = p;
            at += p.rows();
        }
        return HPolytope{std::move(rows)};
    }
    if (auto* p = std::get_if<Preimage>(&v)) return HPolytope{to_hrep(p->inner)->rows * p->M};
    if (auto* sc = std::get_if<Scaled>(&v)) return HPolytope{to_hrep(sc->inner)->rows / sc->alpha};
    if (auto* po = std::get_if<Polar>(&v)) return HPolytope{to_vrep(po->inner)->vertices};
    return std::nullopt;
}

/// Finite generating point set whose convex hull is the set, when available.
inline std::optional<VPolytope> to_vrep(const SetExpr& s) {
    if (!vrep_size(s)) return std::nullopt;
    const auto& v = s.node().value;
    if (auto* vp = std::get_if<VPolytope>(&v)) return *vp;
    if (auto* b = std::get_if<Ball1>(&v)) return VPolytope{detail::signed_identity(b->n)};
    if (auto* b = std::get_if<BallInf>(&v)) return VPolytope{detail::sign_vectors(b->n)};
    if (auto* sc = std::get_if<Scaled>(&v)) {
        return VPolytope{to_vrep(sc->inner)->vertices * sc->alpha};
    }
    if (auto* po = std::get_if<Polar>(&v)) return VPolytope{to_hrep(po->inner)->rows};
    if (auto* p = std::get_if<Preimage>(&v)) {
        const Matrix inv = *detail::safe_inverse(p->M);
        return VPolytope{to_vrep(p->inner)->vertices * inv.transpose()};
    }
    return std::nullopt;
}

/// Shape matrix when the set is an ellipsoid {x : x^T E x <= 1}.
inline std::optional<Matrix> to_ellipsoid(const SetExpr& s) {
    const auto& v = s.node().value;
    if (auto* e = std::get_if<Ellipsoid>(&v)) return e->E;
    if (auto* sc = std::get_if<Scaled>(&v)) {
        auto inner = to_ellipsoid(sc->inner);
        if (!inner) return std::nullopt;
        return Matrix(*inner / (sc->alpha * sc->alpha));
    }
    if (auto* p = std::get_if<Preimage>(&v)) {
        auto inner = to_ellipsoid(p->inner);
        if (!inner || !detail::safe_inverse(p->M)) return std::nullopt;
        return Matrix(p->M.transpose() * *inner * p->M);
    }
    if (auto* po = std::get_if<Polar>(&v)) {
        auto inner = to_ellipsoid(po->inner);
        if (!inner) return std::nullopt;
        auto inv = detail::safe_inverse(*inner);
        if (!inv) return std::nullopt;
        return Matrix(0.5 * (*inv + inv->transpose()));
    }
    return std::nullopt;
}

/// True when support(s, .) can be evaluated exactly.
inline bool support_computable(const SetExpr& s) {
    const auto& v = s.node().value;
    if (std::holds_alternative<Intersection>(v)) return hrep_size(s).has_value();
    if (auto* p = std::get_if<Preimage>(&v)) {
        if (detail::safe_inverse(p->M)) return support_computable(p->inner);
        return hrep_size(s).has_value();
    }
    if (auto* sc = std::get_if<Scaled>(&v)) return support_computable(sc->inner);
    return true;
}

// ---------------------------------------------------------------------------
// Gauge and support
// ---------------------------------------------------------------------------

inline double gauge(const SetExpr& s, const Vector& x);
inline double support(const SetExpr& s, const Vector& y);

namespace detail {

// sup { y^T x : rows x <= 1 }, throwing when unbounded.
inline double hpoly_support(const Matrix& rows, const Vector& y, const char* ctx) {
    const LpResult r = solve_lp(LpProblem{y, rows});
    if (r.status == LpStatus::unbounded) {
        throw UnboundedError(std::string(ctx) + ": set is unbounded in the requested direction");
    }
    return r.value;
}

}  // namespace detail

/// Minkowski function of s at x.
inline double gauge(const SetExpr& s, const Vector& x) {
    require_dim(x.size(), s.dim(), "gauge");
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return std::max(0.0, (h->rows * x).maxCoeff());
    if (auto* vp = std::get_if<VPolytope>(&v)) {
        // gauge of conv(V) is the support function of its polar {y : V y <= 1}
        const LpResult r = solve_lp(LpProblem{x, vp->vertices});
        if (r.status == LpStatus::unbounded) {
            throw UnboundedError("gauge: origin is not interior to the vertex hull");
        }
        return std::max(0.0, r.value);
    }
    if (auto* e = std::get_if<Ellipsoid>(&v)) return std::sqrt(std::max(0.0, x.dot(e->E * x)));
    if (std::holds_alternative<BallInf>(v)) return x.cwiseAbs().maxCoeff();
    if (std::holds_alternative<Ball1>(v)) return x.cwiseAbs().sum();
    if (auto* in = std::get_if<Intersection>(&v)) {
        double best = 0.0;
        for (const auto& m : in->members) best = std::max(best, gauge(m, x));
        return best;
    }
    if (auto* p = std::get_if<Preimage>(&v)) return gauge(p->inner, p->M * x);
    if (auto* sc = std::get_if<Scaled>(&v)) return gauge(sc->inner, x) / sc->alpha;
    if (auto* po = std::get_if<Polar>(&v)) return std::max(0.0, support(po->inner, x));
    throw UnsupportedError("gauge: unknown set node");
}

/// Support function sup { y^T x : x in s }.
inline double support(const SetExpr& s, const Vector& y) {
    require_dim(y.size(), s.dim(), "support");
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return detail::hpoly_support(h->rows, y, "support");
    if (auto* vp = std::get_if<VPolytope>(&v)) return (vp->vertices * y).maxCoeff();
    if (std::holds_alternative<Ellipsoid>(v)) {
        const Vector z = s.node().chol->matrixL().solve(y);
        return z.norm();
    }
    if (std::holds_alternative<BallInf>(v)) return y.cwiseAbs().sum();
    if (std::holds_alternative<Ball1>(v)) return y.cwiseAbs().maxCoeff();
    if (std::holds_alternative<Intersection>(v)) {
        auto h = to_hrep(s);
        if (!h) throw UnsupportedError("support: intersection with non-polytopic members");
        return detail::hpoly_support(h->rows, y, "support");
    }
    if (auto* p = std::get_if<Preimage>(&v)) {
        // M^{-1} X is the image of X under M^{-1} when M is invertible
        if (auto inv = detail::safe_inverse(p->M)) {
            return support(p->inner, inv->transpose() * y);
        }
        auto h = to_hrep(s);
        if (!h) throw UnsupportedError("support: preimage under a singular matrix of a non-polytopic set");
        return detail::hpoly_support(h->rows, y, "support");
    }
    if (auto* sc = std::get_if<Scaled>(&v)) return sc->alpha * support(sc->inner, y);
    if (auto* po = std::get_if<Polar>(&v)) return gauge(po->inner, y);
    throw UnsupportedError("support: unknown set node");
}

inline bool contains(const SetExpr& s, const Vector& x,
                     double tol = kDefaultTolerances.membership) {
    require(tol >= 0.0, "contains: tolerance must be nonnegative");
    return gauge(s, x) <= 1.0 + tol;
}

/// True when every coordinate direction has a finite LP maximum.
inline bool is_bounded(const HPolytope& h) {
    const Eigen::Index n = h.dim();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector e = Vector::Zero(n);
            e(i) = sign;
            if (solve_lp(LpProblem{e, h.rows}).status == LpStatus::unbounded) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Set calculus
// ---------------------------------------------------------------------------

/// Polar set. Polytopes swap rows and vertices, ellipsoids invert, the unit
/// balls swap, and everything else is wrapped symbolically.
inline SetExpr polar(const SetExpr& s) {
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) {
        require(is_bounded(*h), "polar: H-polytope must be bounded");
        return SetExpr(VPolytope{h->rows});
    }
    if (auto* vp = std::get_if<VPolytope>(&v)) {
        HPolytope dual{vp->vertices};
        require(is_bounded(dual), "polar: origin not interior to the vertex hull");
        return SetExpr(std::move(dual));
    }
    if (auto* e = std::get_if<Ellipsoid>(&v)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(e->E);
        const auto& ev = es.eigenvalues();
        require(ev.maxCoeff() / ev.minCoeff() <= kDefaultTolerances.max_condition,
                "polar: ellipsoid condition number exceeds 1e12");
        Matrix inv = s.node().chol->solve(Matrix::Identity(e->E.rows(), e->E.cols()));
        return SetExpr(Ellipsoid{0.5 * (inv + inv.transpose())});
    }
    if (auto* b = std::get_if<BallInf>(&v)) return SetExpr(Ball1{b->n});
    if (auto* b = std::get_if<Ball1>(&v)) return SetExpr(BallInf{b->n});
    if (auto* sc = std::get_if<Scaled>(&v)) {
        return SetExpr::scaled_node(1.0 / sc->alpha, polar(sc->inner));
    }
    if (auto* po = std::get_if<Polar>(&v)) return po->inner;
    return SetExpr::polar_node(s);
}

/// {x : M x in s}. Polytopic leaves stay in H-form.
inline SetExpr preimage(const Matrix& m, const SetExpr& s) {
    detail::check_matrix(m, "preimage");
    require_dim(m.rows(), s.dim(), "preimage");
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return SetExpr(HPolytope{h->rows * m});
    if (auto* b = std::get_if<BallInf>(&v)) {
        return SetExpr(HPolytope{detail::signed_identity(b->n) * m});
    }
    return SetExpr::preimage_node(m, s);
}

inline SetExpr intersect(const std::vector<SetExpr>& sets) {
    require(!sets.empty(), "intersect: empty list");
    if (sets.size() == 1) return sets.front();
    const auto d = sets.front().dim();
    bool all_h = true;
    Eigen::Index total = 0;
    for (const auto& s : sets) {
        require_dim(s.dim(), d, "intersect");
        if (auto* h = s.as<HPolytope>()) {
            total += h->size();
        } else {
            all_h = false;
        }
    }
    if (!all_h) return SetExpr::intersection_node(sets);
    Matrix rows(total, d);
    Eigen::Index at = 0;
    for (const auto& s : sets) {
        const auto& r = s.as<HPolytope>()->rows;
        rows.middleRows(at, r.rows()) = r;
        at += r.rows();
    }
    return SetExpr(HPolytope{std::move(rows)});
}

inline SetExpr scale(double alpha, const SetExpr& s) {
    require(std::isfinite(alpha) && alpha > 0.0, "scale: alpha must be positive");
    if (alpha == 1.0) return s;
    if (auto* h = s.as<HPolytope>()) return SetExpr(HPolytope{h->rows / alpha});
    if (auto* sc = s.as<Scaled>()) return scale(alpha * sc->alpha, sc->inner);
    return SetExpr::scaled_node(alpha, s);
}

// ---------------------------------------------------------------------------
// Membership-only oracle
// ---------------------------------------------------------------------------

namespace detail {

// x in t * s, decided from each node's set definition rather than its gauge formula.
inline bool in_scaled(const SetExpr& s, const Vector& x, double t) {
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return ((h->rows * x).array() <= t).all();
    if (auto* vp = std::get_if<VPolytope>(&v)) {
        // bipolar: x in t*conv(V) iff y^T x <= t for every y with V y <= 1
        const LpResult r = solve_lp(LpProblem{x, vp->vertices});
        return r.status == LpStatus::optimal && r.value <= t;
    }
    if (auto* e = std::get_if<Ellipsoid>(&v)) return x.dot(e->E * x) <= t * t;
    if (std::holds_alternative<BallInf>(v)) return (x.array().abs() <= t).all();
    if (std::holds_alternative<Ball1>(v)) return x.cwiseAbs().sum() <= t;
    if (auto* in = std::get_if<Intersection>(&v)) {
        return std::all_of(in->members.begin(), in->members.end(),
                           [&](const SetExpr& m) { return in_scaled(m, x, t); });
    }
    if (auto* p = std::get_if<Preimage>(&v)) return in_scaled(p->inner, p->M * x, t);
    if (auto* sc = std::get_if<Scaled>(&v)) return in_scaled(sc->inner, x, t * sc->alpha);
    if (auto* po = std::get_if<Polar>(&v)) return support(po->inner, x) <= t;
    throw UnsupportedError("gauge_oracle: unknown set node");
}

}  // namespace detail

/// Gauge by bisection over the scale factor, using only membership tests.
inline double gauge_oracle(const SetExpr& s, const Vector& x, double tol) {
    require_dim(x.size(), s.dim(), "gauge_oracle");
    require(tol > 0.0, "gauge_oracle: tolerance must be positive");
    if (detail::in_scaled(s, x, 0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (!detail::in_scaled(s, x, hi)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 1100) throw NumericalError("gauge_oracle: failed to bracket the gauge");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (detail::in_scaled(s, x, mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mlf
