#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <sys/wait.h>

#include "mlf/json_io.hpp"
#include "mlf/mlf.hpp"

using mlf::io::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

// Runs the CLI with stderr discarded and returns the exit code and stdout.
CliRun cli(const std::string& args) {
    const std::string cmd = std::string(MLF_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    while (const std::size_t got = std::fread(buf, 1, sizeof buf, p)) out.append(buf, got);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(MLF_DATA_DIR) + "/" + name; }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mlf_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(tmp(name)) << text;
        return tmp(name);
    }

    fs::path dir_;
};

json parse(const std::string& s) { return json::parse(s); }

std::vector<double> numbers(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(std::strtod(line.c_str(), nullptr));
    return out;
}

}  // namespace

TEST_F(Cli, SpectralRadius) {
    const CliRun a = cli("spectral-radius " + data("osc2.json"));
    EXPECT_EQ(a.code, 0);
    EXPECT_NEAR(std::stod(a.out), 0.2, 1e-12);
    const CliRun b = cli("spectral-radius " + data("identity2.json"));
    EXPECT_EQ(b.code, 0);
    EXPECT_NEAR(std::stod(b.out), 1.0, 1e-12);
    EXPECT_EQ(cli("spectral-radius " + write("bad.json", "{\"rows\": [[1, 2]")).code, 2);
    EXPECT_EQ(cli("spectral-radius " + tmp("missing.json")).code, 2);
}

TEST_F(Cli, ConstructScalarMax) {
    const CliRun r = cli("construct max " + data("scalar.json") + " " + data("interval.json") + " --gamma 0.75");
    ASSERT_EQ(r.code, 0);
    const json c = parse(r.out);
    EXPECT_EQ(c.at("k"), 1);
    EXPECT_EQ(c.at("form"), "max");
    EXPECT_EQ(c.at("gamma"), 0.75);
}

TEST_F(Cli, ConstructGammaPolicy) {
    EXPECT_EQ(cli("construct max " + data("scalar.json") + " " + data("interval.json") + " --gamma 1.0").code, 3);
    const CliRun r = cli("construct max " + data("osc2.json") + " " + data("ball1_2d.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(parse(r.out).at("gamma").get<double>(), 0.6, 1e-12);
    EXPECT_EQ(cli("construct max " + data("identity2.json") + " " + data("ball1_2d.json")).code, 3);
    EXPECT_EQ(cli("construct max " + data("osc2.json") + " " + data("interval.json")).code, 3);
    EXPECT_EQ(cli("construct cube " + data("osc2.json") + " " + data("ball1_2d.json")).code, 2);
}

TEST_F(Cli, EvalScalarCertificate) {
    ASSERT_EQ(cli("construct max " + data("scalar.json") + " " + data("interval.json") + " --gamma 0.75 --out " +
                  tmp("c.json")).code,
              0);
    const CliRun r = cli("eval " + tmp("c.json") + " " + data("scalar_points.csv"));
    ASSERT_EQ(r.code, 0);
    const auto v = numbers(r.out);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[0], 2.0, 1e-12);
    EXPECT_EQ(v[1], 0.0);
    EXPECT_NEAR(v[2], 8.0, 1e-12);
    EXPECT_EQ(cli("eval " + tmp("c.json") + " " + data("osc2_points.csv")).code, 3);
    EXPECT_EQ(cli("eval " + tmp("c.json") + " " + write("p.csv", "0.5\nabc\n")).code, 2);
}

TEST_F(Cli, ConstructEvalRoundTripIsBitExact) {
    for (const char* form : {"max", "sum"}) {
        const std::string cert = tmp(std::string(form) + ".json");
        ASSERT_EQ(cli(std::string("construct ") + form + " " + data("osc2.json") + " " + data("ball1_2d.json") +
                      " --gamma 0.6 --out " + cert).code,
                  0);
        const CliRun r = cli("eval " + cert + " " + data("osc2_points.csv"));
        ASSERT_EQ(r.code, 0);
        const mlf::MlfCertificate c = mlf::io::certificate_from_json(mlf::io::read_json_file(cert));
        const mlf::MlfCertificate lib = std::string(form) == "max"
                                            ? mlf::construct_max(c.A, c.Q, 0.6)
                                            : mlf::construct_sum(c.A, c.Q, 0.6);
        const auto v = numbers(r.out);
        const std::vector<mlf::Vector> pts{mlf::Vector::Unit(2, 0), mlf::Vector::Zero(2),
                                           (mlf::Vector(2) << 0.3, -0.7).finished()};
        ASSERT_EQ(v.size(), pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(v[i], mlf::eval(lib, pts[i])) << form << " " << i;
    }
}

TEST_F(Cli, FixedPointScalar) {
    const CliRun r = cli("fixed-point " + data("scalar.json") + " " + data("interval.json"));
    ASSERT_EQ(r.code, 0);
    const json j = parse(r.out);
    const auto rows = j.at("S").at("rows");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(std::abs(rows[0][0].get<double>()), 2.0, 1e-8);
    EXPECT_NEAR(rows[0][0].get<double>() + rows[1][0].get<double>(), 0.0, 1e-8);
    EXPECT_EQ(j.at("diagnostics").at("converged"), true);
}

TEST_F(Cli, FixedPointTwoDimAgreesWithLibrary) {
    const CliRun r = cli("fixed-point " + data("osc2.json") + " " + data("ball1_2d.json") + " --tol 1e-9 --max-iter 100");
    ASSERT_EQ(r.code, 0);
    const json d = parse(r.out).at("diagnostics");
    const mlf::FixedPointResult lib =
        mlf::iterate(mlf::io::matrix_from_json(parse("[[1,1],[-0.72,-0.7]]")),
                     *mlf::to_hrep(mlf::SetExpr(mlf::Ball1{2})), 1e-9, 100);
    EXPECT_EQ(d.at("finitely_determined"), lib.finitely_determined);
    EXPECT_EQ(d.at("iterations"), lib.iterations);
}

TEST_F(Cli, FixedPointExitCodes) {
    EXPECT_EQ(cli("fixed-point " + data("identity2.json") + " " + data("ballinf_2d.json")).code, 3);
    EXPECT_EQ(cli("fixed-point " + data("osc2.json") + " " + data("ball1_2d.json") + " --max-iter 3").code, 4);
    const std::string ell = write("ell.json", R"({"type":"ellipsoid","E":[[1,0],[0,1]]})");
    EXPECT_EQ(cli("fixed-point " + data("osc2.json") + " " + ell).code, 3);
}

TEST_F(Cli, VerifyModes) {
    ASSERT_EQ(cli("construct max " + data("osc2.json") + " " + data("ball1_2d.json") + " --out " + tmp("m.json")).code, 0);
    const CliRun m = cli("verify " + tmp("m.json") + " --samples 2000 --seed 3");
    ASSERT_EQ(m.code, 0);
    EXPECT_LE(parse(m.out).at("max_violation").get<double>(), 1e-8);
    EXPECT_EQ(parse(m.out).at("seed"), 3);

    ASSERT_EQ(cli("construct sum " + data("scalar.json") + " " + data("interval.json") + " --gamma 0.5 --out " +
                  tmp("s.json")).code,
              0);
    const CliRun s = cli("verify " + tmp("s.json"));
    ASSERT_EQ(s.code, 0);
    EXPECT_NEAR(parse(s.out).at("max_violation").get<double>(), 0.0, 1e-12);

    const std::string z = write("z.json", R"({"kind":"minimal","source":{"type":"hpolytope","rows":[[2],[-2]]}})");
    const CliRun rpi = cli("verify " + z + " --mode rpi --matrix " + data("scalar.json") + " --set " + data("interval.json"));
    ASSERT_EQ(rpi.code, 0);
    EXPECT_NEAR(parse(rpi.out).at("equation_residual").get<double>(), 0.0, 1e-12);
    EXPECT_EQ(cli("verify " + z + " --mode rpi").code, 2);
    EXPECT_EQ(cli("verify " + tmp("m.json") + " --mode sideways").code, 2);
}

TEST_F(Cli, VerifyFixedPointOutput) {
    ASSERT_EQ(cli("fixed-point " + data("osc2.json") + " " + data("ball1_2d.json") + " --out " + tmp("fp.json")).code, 0);
    const CliRun eq = cli("verify " + tmp("fp.json") + " --mode equation --samples 2000");
    ASSERT_EQ(eq.code, 0);
    EXPECT_LE(parse(eq.out).at("equation_residual").get<double>(), 1e-6);
    const CliRun rpi = cli("verify " + tmp("fp.json") + " --mode rpi --samples 2000");
    ASSERT_EQ(rpi.code, 0);
    EXPECT_LE(parse(rpi.out).at("equation_residual").get<double>(), 1e-6);
}

TEST_F(Cli, BenchShapeAndDeterminism) {
    const CliRun a = cli("bench --dims 2,3,5 --seed 7");
    const CliRun b = cli("bench --dims 2,3,5 --seed 7");
    ASSERT_EQ(a.code, 0);
    auto drop_time = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
            out += f.at(0) + "," + f.at(1) + "," + f.at(2) + "," + f.at(4) + "\n";
        }
        return out;
    };
    EXPECT_EQ(drop_time(a.out), drop_time(b.out));
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 4);
    EXPECT_EQ(a.out.rfind("n,rho,k,time_ms,seed\n", 0), 0u);
    EXPECT_EQ(cli("bench --dims \"\"").code, 2);
    EXPECT_EQ(cli("bench --dims 2,x").code, 2);
}

TEST_F(Cli, ExportPolygons) {
    auto verts = [&](const std::string& file) {
        const CliRun r = cli("export-2d " + file);
        EXPECT_EQ(r.code, 0);
        return parse(r.out).at("vertices");
    };
    const json b1 = verts(data("ball1_2d.json"));
    ASSERT_EQ(b1.size(), 4u);
    for (const auto& v : b1) EXPECT_NEAR(std::abs(v[0].get<double>()) + std::abs(v[1].get<double>()), 1.0, 1e-12);
    const json binf = verts(data("ballinf_2d.json"));
    EXPECT_EQ(binf.size(), 4u);
    const json polar = verts(data("polar_ball1_2d.json"));
    ASSERT_EQ(polar.size(), binf.size());
    for (std::size_t i = 0; i < polar.size(); ++i) {
        EXPECT_NEAR(polar[i][0].get<double>(), binf[i][0].get<double>(), 1e-12);
        EXPECT_NEAR(polar[i][1].get<double>(), binf[i][1].get<double>(), 1e-12);
    }
    // counterclockwise: positive signed area
    double area = 0.0;
    for (std::size_t i = 0; i < b1.size(); ++i) {
        const auto& p = b1[i];
        const auto& q = b1[(i + 1) % b1.size()];
        area += p[0].get<double>() * q[1].get<double>() - q[0].get<double>() * p[1].get<double>();
    }
    EXPECT_GT(area, 0.0);
    EXPECT_EQ(cli("export-2d " + data("interval.json")).code, 3);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}
