// Batch command-line front end.
//
// Exit codes: 0 ok, 2 input/parse error, 3 precondition violation,
// 4 numerical failure (cap or iteration exhaustion).

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlf/json_io.hpp"
#include "mlf/mlf.hpp"

namespace {

using mlf::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumerical = 4;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        mlf::io::write_text_file(out_path, text);
    }
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<mlf::Vector> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mlf::ParseError("cannot open '" + path + "'");
    std::vector<mlf::Vector> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw mlf::ParseError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
        }
        points.push_back(Eigen::Map<mlf::Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    return points;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            const int d = std::stoi(cell, &used);
            if (used != cell.size() || d < 1) throw std::invalid_argument(cell);
            dims.push_back(d);
        } catch (const std::exception&) {
            throw mlf::ParseError("--dims: '" + cell + "' is not a positive integer");
        }
    }
    if (dims.empty()) throw mlf::ParseError("--dims: empty dimension list");
    return dims;
}

// Whatever the verify command was pointed at, reduced to A, Q and the gauge of S.
struct VerifyTarget {
    mlf::Matrix A;
    std::optional<mlf::SetExpr> Q;
    std::optional<mlf::MlfCertificate> cert;
    std::optional<mlf::HPolytope> S;
    mlf::RpiKind kind = mlf::RpiKind::invariant;
};

VerifyTarget load_verify_target(const std::string& path, const std::string& matrix_file,
                                const std::string& set_file) {
    const json j = mlf::io::read_json_file(path);
    VerifyTarget t;
    if (j.contains("form")) {
        t.cert = mlf::io::certificate_from_json(j);
        t.A = t.cert->A;
        t.Q = t.cert->Q;
        return t;
    }
    if (j.contains("kind") && j.contains("source")) {
        const mlf::RpiSet z = mlf::io::rpi_from_json(j);
        t.kind = z.kind;
        if (auto* c = std::get_if<mlf::MlfCertificate>(&z.source)) {
            t.cert = *c;
            t.A = c->A;
            t.Q = c->Q;
            return t;
        }
        t.S = std::get<mlf::HPolytope>(z.source);
    } else if (j.contains("S")) {
        const mlf::SetExpr s = mlf::io::set_from_json(j.at("S"));
        if (!s.as<mlf::HPolytope>()) throw mlf::ParseError("verify: S must be an hpolytope");
        t.S = *s.as<mlf::HPolytope>();
        t.kind = mlf::RpiKind::minimal;
        if (j.contains("A")) t.A = mlf::io::matrix_from_json(j.at("A"));
        if (j.contains("Q")) t.Q = mlf::io::set_from_json(j.at("Q"));
    } else {
        const mlf::SetExpr s = mlf::io::set_from_json(j);
        auto h = mlf::to_hrep(s);
        if (!h) throw mlf::PreconditionError("verify: set must be polytopic");
        t.S = *h;
    }
    if (!matrix_file.empty()) t.A = mlf::io::matrix_from_json(mlf::io::read_json_file(matrix_file));
    if (!set_file.empty()) t.Q = mlf::io::set_from_json(mlf::io::read_json_file(set_file));
    if (t.A.size() == 0 || !t.Q) {
        throw mlf::ParseError("verify: a bare set needs --matrix and --set for A and Q");
    }
    mlf::require(t.A.rows() == t.A.cols(), "verify: A must be square");
    mlf::require_dim(t.S->dim(), t.A.rows(), "verify (S vs A)");
    mlf::require_dim(t.Q->dim(), t.A.rows(), "verify (Q vs A)");
    return t;
}

int run(int argc, char** argv) {
    CLI::App app{"Minkowski-Lyapunov functions and RPI sets for x+ = A x"};
    app.require_subcommand(1);

    std::string matrix_file, set_file, cert_file, points_file, out_file, form, mode = "inequality";
    std::string dims_text = "2,3,5,8,13,21,34";
    std::optional<double> gamma;
    int cap = mlf::kDefaultPowerCap;
    int max_iter = mlf::kDefaultMaxIter;
    int samples = 1000;
    double tol = mlf::kDefaultTolerances.inclusion;
    std::uint64_t seed = 0;
    std::string verify_matrix, verify_set;

    auto* sr = app.add_subcommand("spectral-radius", "Print the spectral radius of a matrix");
    sr->add_option("matrix", matrix_file, "Matrix JSON")->required();

    auto* construct = app.add_subcommand("construct", "Build a max- or sum-form certificate");
    construct->add_option("form", form, "max or sum")->required()->check(CLI::IsMember({"max", "sum"}));
    construct->add_option("matrix", matrix_file, "Matrix JSON")->required();
    construct->add_option("set", set_file, "Set JSON for Q")->required();
    construct->add_option("--gamma", gamma, "Contraction factor (default (rho+1)/2)");
    construct->add_option("--cap", cap, "Largest k to try");
    construct->add_option("--out", out_file, "Output file (default stdout)");

    auto* ev = app.add_subcommand("eval", "Evaluate a certificate at points");
    ev->add_option("certificate", cert_file, "Certificate JSON")->required();
    ev->add_option("points", points_file, "Headerless CSV, one point per line")->required();

    auto* fp = app.add_subcommand("fixed-point", "Run the polytopic set recursion");
    fp->add_option("matrix", matrix_file, "Matrix JSON")->required();
    fp->add_option("set", set_file, "Polytopic set JSON for Q")->required();
    fp->add_option("--tol", tol, "Stopping tolerance");
    fp->add_option("--max-iter", max_iter, "Iteration limit");
    fp->add_option("--out", out_file, "Output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Check a certificate, fixed point or RPI set");
    verify->add_option("file", cert_file, "Certificate, fixed-point output, RPI or set JSON")->required();
    verify->add_option("--mode", mode, "inequality, equation or rpi")
        ->check(CLI::IsMember({"inequality", "equation", "rpi"}));
    verify->add_option("--samples", samples, "Sample points / directions");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--matrix", verify_matrix, "Matrix JSON (for bare sets)");
    verify->add_option("--set", verify_set, "Q set JSON (for bare sets)");

    auto* bench = app.add_subcommand("bench", "Minimal-k timing table on random stable matrices");
    bench->add_option("--dims", dims_text, "Comma-separated dimensions");
    bench->add_option("--seed", seed, "Batch seed");
    bench->add_option("--cap", cap, "Largest k to try");

    auto* exp = app.add_subcommand("export-2d", "Counterclockwise vertex list of a planar polytope");
    exp->add_option("set", set_file, "Set JSON (or fixed-point output)")->required();
    exp->add_option("--out", out_file, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (*sr) {
        const mlf::Matrix a = mlf::io::matrix_from_json(mlf::io::read_json_file(matrix_file));
        std::cout << std::setprecision(15) << mlf::spectral_radius(a) << "\n";
    } else if (*construct) {
        const mlf::Matrix a = mlf::io::matrix_from_json(mlf::io::read_json_file(matrix_file));
        const mlf::SetExpr q = mlf::io::set_from_json(mlf::io::read_json_file(set_file));
        const mlf::MlfCertificate c =
            form == "max" ? mlf::construct_max(a, q, gamma, cap) : mlf::construct_sum(a, q, gamma, cap);
        emit(mlf::io::dump(mlf::io::certificate_to_json(c)), out_file);
    } else if (*ev) {
        const mlf::MlfCertificate c = mlf::io::certificate_from_json(mlf::io::read_json_file(cert_file));
        std::string out;
        for (const auto& x : read_points_csv(points_file)) out += format_real(mlf::eval(c, x)) + "\n";
        std::cout << out;
    } else if (*fp) {
        const mlf::Matrix a = mlf::io::matrix_from_json(mlf::io::read_json_file(matrix_file));
        const mlf::SetExpr q = mlf::io::set_from_json(mlf::io::read_json_file(set_file));
        auto qh = mlf::to_hrep(q);
        if (!qh) throw mlf::PreconditionError("fixed-point: Q must be polytopic");
        const mlf::FixedPointResult r = mlf::iterate(a, *qh, tol, max_iter);
        emit(mlf::io::dump(mlf::io::fixed_point_to_json(r, a, q)), out_file);
        if (!r.converged) {
            std::cerr << "fixed-point: no convergence after " << max_iter << " iterations\n";
            return kExitNumerical;
        }
    } else if (*verify) {
        const VerifyTarget t = load_verify_target(cert_file, verify_matrix, verify_set);
        json report;
        if (mode == "rpi") {
            const mlf::RpiSet z = t.cert ? mlf::polar_rpi(*t.cert) : mlf::polar_rpi(*t.S, t.kind);
            const mlf::RpiCheck r = mlf::verify_rpi(z, t.A, mlf::polar(*t.Q), samples, seed);
            report = json{{"mode", mode},
                          {"max_violation", r.max_violation},
                          {"equation_residual", r.equation_residual},
                          {"directions", r.directions},
                          {"seed", r.seed}};
        } else {
            mlf::LyapunovCheck r;
            if (t.cert) {
                const auto& c = *t.cert;
                r = mlf::check_minkowski_lyapunov([&](const mlf::Vector& v) { return mlf::eval(c, v); },
                                                  t.A, *t.Q, samples, seed);
            } else {
                const mlf::SetExpr s(*t.S);
                r = mlf::check_minkowski_lyapunov([&](const mlf::Vector& v) { return mlf::gauge(s, v); },
                                                  t.A, *t.Q, samples, seed);
            }
            report = json{{"mode", mode},
                          {"max_violation", r.max_violation},
                          {"equation_residual", r.equation_residual},
                          {"argmax", mlf::io::vector_to_json(r.argmax)},
                          {"samples", samples},
                          {"seed", seed}};
        }
        std::cout << mlf::io::dump(report);
    } else if (*bench) {
        const auto rows = mlf::run_benchmark(parse_dims(dims_text), seed, cap);
        std::cout << mlf::bench_csv(rows);
        for (const auto& r : rows) {
            if (!r.ok) std::cerr << "bench: n=" << r.n << " failed: " << r.error << "\n";
        }
    } else if (*exp) {
        json j = mlf::io::read_json_file(set_file);
        if (j.contains("S") && !j.contains("type")) j = j.at("S");
        const mlf::SetExpr s = mlf::io::set_from_json(j);
        if (s.dim() != 2) throw mlf::PreconditionError("export-2d: set must be 2-D (got dimension " + std::to_string(s.dim()) + ")");
        json verts = json::array();
        for (const auto& v : mlf::export_polygon(s)) verts.push_back(json::array({v(0), v(1)}));
        emit(mlf::io::dump(json{{"vertices", std::move(verts)}}), out_file);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mlf::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const mlf::PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const mlf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
