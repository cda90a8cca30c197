#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mlf/certificate.hpp"
#include "mlf/config.hpp"
#include "mlf/inclusion.hpp"
#include "mlf/numerics.hpp"
#include "mlf/sets.hpp"

namespace mlf {

/// i.i.d. standard normal entries rescaled so that the spectral radius is
/// exactly rho_target. Deterministic per (n, rho_target, seed).
inline Matrix random_stable_matrix(int n, double rho_target, std::uint64_t seed) {
    require(n >= 1, "random_stable_matrix: n must be positive");
    require(rho_target > 0.0 && rho_target < 1.0, "random_stable_matrix: rho_target must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Matrix draw(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) draw(i, j) = normal(rng);
        }
        const double rho = spectral_radius(draw);
        if (rho > 1e-8) return draw * (rho_target / rho);
    }
    throw NumericalError("random_stable_matrix: repeated draws with zero spectral radius");
}

/// One column of the timing table: dimension, realized spectral radius, the
/// minimal k for the max-form construction, and the k-search time.
struct BenchRow {
    int n = 0;
    double rho = 0.0;
    int k = 0;  // 0 when the search failed
    double time_ms = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
};

struct Table1Instance {
    Matrix A;
    double rho;
    double gamma;
};

// Spectral radius drawn uniformly from this range.
inline constexpr double kTable1RhoLow = 0.975;
inline constexpr double kTable1RhoHigh = 0.999;

inline Table1Instance table1_instance(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(kTable1RhoLow, kTable1RhoHigh);
    const double rho = uni(rng);
    return Table1Instance{random_stable_matrix(n, rho, seed), rho, default_gamma(rho)};
}

/// Q = unit infinity ball (closed-form gauge and support), gamma = (rho + 1) / 2,
/// minimal k with (A / gamma)^k Q subset Q by incremental search.
inline BenchRow table1_protocol(int n, std::uint64_t seed, int cap = kDefaultPowerCap) {
    BenchRow row;
    row.n = n;
    row.seed = seed;
    try {
        const Table1Instance inst = table1_instance(n, seed);
        row.rho = inst.rho;
        const SetExpr q(BallInf{n});
        const auto t0 = std::chrono::steady_clock::now();
        row.k = minimal_power_k(inst.A / inst.gamma, q, 1.0, cap);
        const auto t1 = std::chrono::steady_clock::now();
        row.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.ok = true;
    } catch (const Error& e) {
        row.k = 0;
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

/// The max-form certificate a successful row stands for.
inline MlfCertificate table1_certificate(const BenchRow& row) {
    require(row.ok, "table1_certificate: row did not succeed");
    const Table1Instance inst = table1_instance(row.n, row.seed);
    return MlfCertificate{MlfForm::max, inst.A, SetExpr(BallInf{row.n}), inst.gamma, row.k, inst.rho};
}

inline std::uint64_t row_seed(std::uint64_t batch_seed, std::size_t index) {
    return batch_seed + static_cast<std::uint64_t>(index);
}

/// One row per dimension. Failures become rows with ok = false; the batch
/// never aborts.
inline std::vector<BenchRow> run_benchmark(const std::vector<int>& dims, std::uint64_t seed,
                                           int cap = kDefaultPowerCap) {
    require(!dims.empty(), "run_benchmark: dimension list is empty");
    std::vector<BenchRow> rows;
    rows.reserve(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        rows.push_back(table1_protocol(dims[i], row_seed(seed, i), cap));
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "n,rho,k,time_ms,seed\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%d,%.3f,%llu\n", r.n, r.rho, r.k, r.time_ms,
                      static_cast<unsigned long long>(r.seed));
        out += buf;
    }
    return out;
}

}  // namespace mlf
