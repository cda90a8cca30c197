#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlf/certificate.hpp"
#include "mlf/config.hpp"
#include "mlf/duality.hpp"
#include "mlf/fixed_point.hpp"
#include "mlf/sets.hpp"

namespace mlf::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

// Accepts {"rows": [[...], ...]} or a bare nested array.
inline Matrix matrix_from_json(const json& j) {
    const json& rows = (j.is_object() && j.contains("rows")) ? j.at("rows") : j;
    if (!rows.is_array() || rows.empty()) throw ParseError("matrix: expected a nonempty array of rows");
    const std::size_t ncols = rows.front().is_array() ? rows.front().size() : 0;
    if (ncols == 0) throw ParseError("matrix: rows must be nonempty arrays");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& r = rows[i];
        if (!r.is_array() || r.size() != ncols) throw ParseError("matrix: rows have unequal length");
        for (std::size_t c = 0; c < ncols; ++c) {
            if (!r[c].is_number()) throw ParseError("matrix: entries must be numbers");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = r[c].get<double>();
        }
    }
    if (!m.allFinite()) throw ParseError("matrix: entries must be finite");
    return m;
}

inline json matrix_rows_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) r.push_back(m(i, c));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json matrix_to_json(const Matrix& m) { return json{{"rows", matrix_rows_json(m)}}; }

inline Vector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("vector: expected a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError("vector: entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(ctx + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline SetExpr set_from_json_impl(const json& j) {
    if (!j.is_object()) throw ParseError("set: expected an object");
    const std::string type = field(j, "type", "set").get<std::string>();
    if (type == "hpolytope") {
        for (const char* k : {"b", "rhs", "offsets", "h"}) {
            if (j.contains(k)) {
                throw ParseError(
                    "hpolytope: only the normalized form p_i^T x <= 1 is accepted; divide each "
                    "row by its (positive) right-hand side and drop \"" + std::string(k) + "\"");
            }
        }
        return SetExpr(HPolytope{matrix_from_json(field(j, "rows", type))});
    }
    if (type == "vpolytope") return SetExpr(VPolytope{matrix_from_json(field(j, "vertices", type))});
    if (type == "ellipsoid") return SetExpr(Ellipsoid{matrix_from_json(field(j, "E", type))});
    if (type == "ball-inf") return SetExpr(BallInf{field(j, "n", type).get<Eigen::Index>()});
    if (type == "ball-1") return SetExpr(Ball1{field(j, "n", type).get<Eigen::Index>()});
    if (type == "intersection") {
        const json& members = field(j, "members", type);
        if (!members.is_array()) throw ParseError("intersection: members must be an array");
        std::vector<SetExpr> sets;
        for (const auto& m : members) sets.push_back(set_from_json_impl(m));
        return SetExpr::intersection_node(std::move(sets));
    }
    if (type == "preimage") {
        return SetExpr::preimage_node(matrix_from_json(field(j, "M", type)),
                                      set_from_json_impl(field(j, "inner", type)));
    }
    if (type == "scaled") {
        return SetExpr::scaled_node(field(j, "alpha", type).get<double>(),
                                    set_from_json_impl(field(j, "inner", type)));
    }
    if (type == "polar") return SetExpr::polar_node(set_from_json_impl(field(j, "inner", type)));
    throw ParseError("set: unknown type \"" + type + "\"");
}

}  // namespace detail

/// Parses a set description. Structure is kept verbatim (no simplification);
/// malformed or invalid content raises ParseError.
inline SetExpr set_from_json(const json& j) {
    try {
        return detail::set_from_json_impl(j);
    } catch (const ParseError&) {
        throw;
    } catch (const json::exception& e) {
        throw ParseError(std::string("set: ") + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("set: ") + e.what());
    }
}

inline json set_to_json(const SetExpr& s) {
    const auto& v = s.node().value;
    if (auto* h = std::get_if<HPolytope>(&v)) return json{{"type", "hpolytope"}, {"rows", matrix_rows_json(h->rows)}};
    if (auto* p = std::get_if<VPolytope>(&v)) {
        return json{{"type", "vpolytope"}, {"vertices", matrix_rows_json(p->vertices)}};
    }
    if (auto* e = std::get_if<Ellipsoid>(&v)) return json{{"type", "ellipsoid"}, {"E", matrix_rows_json(e->E)}};
    if (auto* b = std::get_if<BallInf>(&v)) return json{{"type", "ball-inf"}, {"n", b->n}};
    if (auto* b = std::get_if<Ball1>(&v)) return json{{"type", "ball-1"}, {"n", b->n}};
    if (auto* in = std::get_if<Intersection>(&v)) {
        json members = json::array();
        for (const auto& m : in->members) members.push_back(set_to_json(m));
        return json{{"type", "intersection"}, {"members", std::move(members)}};
    }
    if (auto* p = std::get_if<Preimage>(&v)) {
        return json{{"type", "preimage"}, {"M", matrix_rows_json(p->M)}, {"inner", set_to_json(p->inner)}};
    }
    if (auto* sc = std::get_if<Scaled>(&v)) {
        return json{{"type", "scaled"}, {"alpha", sc->alpha}, {"inner", set_to_json(sc->inner)}};
    }
    const auto& po = std::get<Polar>(v);
    return json{{"type", "polar"}, {"inner", set_to_json(po.inner)}};
}

inline json certificate_to_json(const MlfCertificate& c) {
    return json{{"form", to_string(c.form)}, {"gamma", c.gamma}, {"k", c.k}, {"rho", c.rho},
                {"A", matrix_to_json(c.A)},   {"Q", set_to_json(c.Q)}};
}

inline MlfCertificate certificate_from_json(const json& j) {
    try {
        const std::string form = detail::field(j, "form", "certificate").get<std::string>();
        if (form != "max" && form != "sum") throw ParseError("certificate: form must be \"max\" or \"sum\"");
        MlfCertificate c{form == "max" ? MlfForm::max : MlfForm::sum,
                         matrix_from_json(detail::field(j, "A", "certificate")),
                         set_from_json(detail::field(j, "Q", "certificate")),
                         detail::field(j, "gamma", "certificate").get<double>(),
                         detail::field(j, "k", "certificate").get<int>(),
                         j.value("rho", 0.0)};
        if (c.A.rows() != c.A.cols()) throw ParseError("certificate: A must be square");
        if (c.Q.dim() != c.A.rows()) throw ParseError("certificate: Q dimension does not match A");
        if (c.k < 1) throw ParseError("certificate: k must be positive");
        if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw ParseError("certificate: gamma must lie in (0, 1)");
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("certificate: ") + e.what());
    }
}

inline json fixed_point_to_json(const FixedPointResult& r, const Matrix& a, const SetExpr& q) {
    json gaps = json::array();
    for (double g : r.hausdorff_gaps) gaps.push_back(g);
    return json{{"S", set_to_json(SetExpr(r.S))},
                {"A", matrix_to_json(a)},
                {"Q", set_to_json(q)},
                {"diagnostics",
                 {{"iterations", r.iterations},
                  {"finitely_determined", r.finitely_determined},
                  {"converged", r.converged},
                  {"final_hausdorff", r.final_hausdorff},
                  {"hausdorff_gaps", std::move(gaps)}}}};
}

inline json rpi_to_json(const RpiSet& z) {
    json src = std::holds_alternative<MlfCertificate>(z.source)
                   ? certificate_to_json(std::get<MlfCertificate>(z.source))
                   : set_to_json(SetExpr(std::get<HPolytope>(z.source)));
    return json{{"kind", to_string(z.kind)}, {"source", std::move(src)}};
}

inline RpiSet rpi_from_json(const json& j) {
    const std::string kind = detail::field(j, "kind", "rpi").get<std::string>();
    if (kind != "invariant" && kind != "minimal") throw ParseError("rpi: kind must be invariant or minimal");
    const json& src = detail::field(j, "source", "rpi");
    const RpiKind k = kind == "invariant" ? RpiKind::invariant : RpiKind::minimal;
    if (src.contains("form")) return RpiSet{certificate_from_json(src), k};
    const SetExpr s = set_from_json(src);
    auto* h = s.as<HPolytope>();
    if (!h) throw ParseError("rpi: source must be a certificate or an hpolytope");
    return RpiSet{*h, k};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mlf::io
