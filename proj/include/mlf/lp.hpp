#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include "mlf/config.hpp"

namespace mlf {

// maximize c^T x  subject to  r_j^T x <= 1 for every row r_j, x free.
// The origin is always feasible, so no phase one is needed.
struct LpProblem {
    Vector objective;
    Matrix rows;  // one constraint per row
};

enum class LpStatus { optimal, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    double value = 0.0;
    Vector point;
};

namespace detail {

// Simplex over the vertices of {x : R x <= 1}, stored as the set of rows tight
// at the current vertex, so a pivot costs O(m n) plus one n x n solve instead
// of touching an m x (m + 2n) tableau.
//
// The walk starts at the origin and adds tight rows until they pin down a
// vertex. A line through the feasible set along which c is constant cannot be
// blocked; its direction is then held fixed as an equality instead.
//
// Bland's rule: the leaving row is the lowest-indexed one with a negative
// multiplier and ties in the ratio test go to the lowest row index.
class VertexSimplex {
public:
    VertexSimplex(const LpProblem& p, double eps)
        : r_(p.rows), c_(p.objective), n_(p.rows.cols()), eps_(eps), x_(Vector::Zero(n_)),
          row_norm_(p.rows.rowwise().norm()), tight_(static_cast<std::size_t>(p.rows.rows()), false) {}

    LpStatus run() {
        if (!reach_vertex()) return LpStatus::unbounded;
        const long cap = 50L * (r_.rows() + n_) + 1000;
        std::set<std::vector<Eigen::Index>> seen;
        for (long iter = 0; iter < cap; ++iter) {
            const Matrix m = working_matrix();
            const Eigen::PartialPivLU<Matrix> lu(m);
            x_ = lu.solve(working_rhs());
            const Vector lambda = lu.transpose().solve(c_);

            const Eigen::Index k = static_cast<Eigen::Index>(work_.size());
            const double lam_tol = eps_ * std::max(1.0, lambda.head(k).cwiseAbs().maxCoeff());
            Eigen::Index leave = -1;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (lambda(j) < -lam_tol && (leave < 0 || work_[j] < work_[leave])) leave = j;
            }
            if (leave < 0) return LpStatus::optimal;
            // Bland's rule cannot revisit a basis in exact arithmetic. When
            // nearly parallel rows make rounding do it, the multipliers in the
            // loop are noise and every vertex on it has the same value.
            std::vector<Eigen::Index> key = work_;
            std::sort(key.begin(), key.end());
            if (!seen.insert(std::move(key)).second) return LpStatus::optimal;

            Vector rhs = Vector::Zero(n_);
            rhs(leave) = -1.0;
            const Vector d = lu.solve(rhs);
            const Eigen::Index enter = ratio_test(d);
            if (enter < 0) return LpStatus::unbounded;
            tight_[static_cast<std::size_t>(work_[leave])] = false;
            tight_[static_cast<std::size_t>(enter)] = true;
            work_[leave] = enter;
        }
        throw NumericalError("solve_lp: simplex iteration cap reached");
    }

    const Vector& point() const { return x_; }

private:
    // Rows tight at x_ stacked over the fixed line directions.
    Matrix working_matrix() const {
        Matrix m(static_cast<Eigen::Index>(work_.size() + lines_.size()), n_);
        Eigen::Index at = 0;
        for (Eigen::Index i : work_) m.row(at++) = r_.row(i);
        for (const Vector& l : lines_) m.row(at++) = l.transpose();
        return m;
    }

    Vector working_rhs() const {
        Vector b(static_cast<Eigen::Index>(work_.size() + lines_.size()));
        Eigen::Index at = 0;
        for (std::size_t i = 0; i < work_.size(); ++i) b(at++) = 1.0;
        for (double v : line_values_) b(at++) = v;
        return b;
    }

    // Lowest-ratio row blocking a step along d, or -1 when nothing blocks.
    Eigen::Index ratio_test(const Vector& d) const {
        const double dn = d.norm();
        const Vector rd = r_ * d;
        const Vector rx = r_ * x_;
        Eigen::Index best = -1;
        double best_t = 0.0;
        for (Eigen::Index i = 0; i < r_.rows(); ++i) {
            if (tight_[static_cast<std::size_t>(i)] || rd(i) <= eps_ * row_norm_(i) * dn) continue;
            const double t = std::max(0.0, 1.0 - rx(i)) / rd(i);
            if (best < 0 || t < best_t) {
                best = i;
                best_t = t;
            }
        }
        return best;
    }

    void step_to(Eigen::Index row, const Vector& d) {
        const double t = std::max(0.0, 1.0 - r_.row(row).dot(x_)) / r_.row(row).dot(d);
        x_ += t * d;
        work_.push_back(row);
        tight_[static_cast<std::size_t>(row)] = true;
    }

    // Moves from the origin to a vertex. Returns false when c is unbounded.
    bool reach_vertex() {
        while (static_cast<Eigen::Index>(work_.size() + lines_.size()) < n_) {
            const Eigen::Index k = static_cast<Eigen::Index>(work_.size() + lines_.size());
            Matrix null_basis;
            if (k == 0) {
                null_basis = Matrix::Identity(n_, n_);
            } else {
                const Eigen::HouseholderQR<Matrix> qr(working_matrix().transpose());
                null_basis = (qr.householderQ() * Matrix::Identity(n_, n_)).rightCols(n_ - k);
            }
            Vector d = null_basis * (null_basis.transpose() * c_);
            if (d.norm() <= eps_ * std::max(1.0, c_.norm())) d = null_basis.col(0);

            Eigen::Index hit = ratio_test(d);
            if (hit >= 0) {
                step_to(hit, d);
                continue;
            }
            if (c_.dot(d) > eps_ * std::max(1.0, c_.norm()) * d.norm()) return false;
            hit = ratio_test(-d);
            if (hit >= 0) {
                step_to(hit, -d);
                continue;
            }
            // a full line with c constant along it: keep moving orthogonally to it
            const Vector l = d.normalized();
            lines_.push_back(l);
            line_values_.push_back(l.dot(x_));
        }
        return true;
    }

    const Matrix& r_;
    const Vector& c_;
    Eigen::Index n_;
    double eps_;
    Vector x_;
    Vector row_norm_;
    std::vector<bool> tight_;
    std::vector<Eigen::Index> work_;
    std::vector<Vector> lines_;
    std::vector<double> line_values_;
};

}  // namespace detail

/// Solves a normalized LP. Unboundedness is reported through the status, never
/// thrown, so callers can use it to detect unbounded D-sets.
inline LpResult solve_lp(const LpProblem& p, const Tolerances& tol = kDefaultTolerances) {
    require(p.rows.rows() >= 1, "solve_lp: at least one constraint row is required");
    require_dim(p.objective.size(), p.rows.cols(), "solve_lp");
    require(p.rows.allFinite() && p.objective.allFinite(), "solve_lp: entries must be finite");

    LpResult out;
    if (p.objective.isZero(0.0)) {
        out.point = Vector::Zero(p.rows.cols());
        return out;
    }
    detail::VertexSimplex simplex(p, tol.lp_pivot);
    out.status = simplex.run();
    if (out.status == LpStatus::unbounded) {
        out.value = INFINITY;
        return out;
    }
    out.point = simplex.point();
    out.value = p.objective.dot(out.point);
    return out;
}

}  // namespace mlf
