#pragma once
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cubespec/census.hpp"
#include "cubespec/hyperplane.hpp"
#include "cubespec/lo.hpp"
#include "cubespec/parallel.hpp"
#include "cubespec/rank.hpp"
#include "cubespec/rng.hpp"

// Monte Carlo estimation of the singularity probability, the comparison
// P_s(d) vs 2^-d E(d) + d^2 2^-(d+1), and reproduction of the summary table
// (exact counts where enumeration is feasible, sampling beyond).

namespace cubespec {

struct Interval {
    double low = 0.0, high = 0.0;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z = 1.959963984540054) {
    if (n == 0)
        return {0.0, 1.0};
    double nn = static_cast<double>(n);
    double p = static_cast<double>(hits) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = p + z2 / (2.0 * nn);
    double spread = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    Interval ci;
    ci.low = (center - spread) / denom;
    ci.high = (center + spread) / denom;
    if (ci.low < 0)
        ci.low = 0;
    if (ci.high > 1)
        ci.high = 1;
    return ci;
}

struct McEstimate {
    int d;
    std::uint64_t samples;
    std::uint64_t hits; // singular draws
    double estimate;    // hits / samples
    Interval ci;        // 95% Wilson
    std::uint64_t seed;
    int workers;
    double wall_seconds;
};

// Samples uniform d x d 0/1 matrices and counts singular ones.  Sample i is
// generated from the stream derived from (seed, i) and judged by the exact
// pipeline, so hits are identical for any worker count.
inline McEstimate estimate_ps(int d, std::uint64_t samples, std::uint64_t seed, int workers = 1) {
    if (d < 1 || d > 64)
        throw DimensionTooLarge("sampling supports d in 1..64, got " + std::to_string(d));
    if (samples < 1)
        throw InputError("need at least one sample");
    auto t0 = std::chrono::steady_clock::now();
    auto states = parallel_ranges<std::uint64_t>(
        samples, 4096, workers, [&](std::uint64_t& hits, std::uint64_t b, std::uint64_t e) {
            std::uint64_t cols[64];
            for (std::uint64_t i = b; i < e; ++i) {
                SampleStream stream(seed, i);
                random_columns(stream, d, d, cols);
                hits += is_singular_span(d, cols);
            }
        });
    auto t1 = std::chrono::steady_clock::now();

    McEstimate out;
    out.d = d;
    out.samples = samples;
    out.hits = 0;
    for (std::uint64_t h : states)
        out.hits += h;
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.ci = wilson_interval(out.hits, samples);
    out.seed = seed;
    out.workers = workers;
    out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return out;
}

// ------------------------------------------------------------ theorem ------

// P_s(d) against 2^-d E(d) + d^2 2^-(d+1).  Exact mode computes both sides
// as rationals from the full census; sampled mode estimates both sides.
// The ratio is reported as data: the relation is asymptotic and no
// equality threshold is enforced.
struct Theorem1Report {
    int d;
    bool exact;
    mpq_class lhs_exact, e_exact, rhs_exact; // exact mode only
    double lhs;     // P_s(d)
    double e_value; // E(d)
    double rhs;     // 2^-d E(d) + d^2 2^-(d+1)
    double ratio;   // lhs / rhs
    std::uint64_t samples; // sampled mode only
    std::uint64_t seed;
    double wall_seconds;
};

inline Theorem1Report theorem1_exact(int d, int workers = 1) {
    if (d < 2 || d > 5)
        throw DimensionTooLarge("exact comparison needs the full census, d in 2..5");
    auto t0 = std::chrono::steady_clock::now();
    Theorem1Report rep;
    rep.d = d;
    rep.exact = true;
    CensusReport census = enumerate_symmetric(d, workers);
    rep.lhs_exact = census.ps_exact;
    rep.e_exact = census.e.e;
    mpq_class two_d(mpz_class(1) << static_cast<unsigned long>(d));
    mpq_class two_d1(mpz_class(1) << static_cast<unsigned long>(d + 1));
    rep.rhs_exact = rep.e_exact / two_d + mpq_class(static_cast<long>(d) * d) / two_d1;
    rep.lhs = rep.lhs_exact.get_d();
    rep.e_value = rep.e_exact.get_d();
    rep.rhs = rep.rhs_exact.get_d();
    rep.ratio = rep.lhs / rep.rhs;
    rep.samples = 0;
    rep.seed = 0;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline Theorem1Report theorem1_sampled(int d, std::uint64_t samples, std::uint64_t seed, int workers = 1) {
    auto t0 = std::chrono::steady_clock::now();
    Theorem1Report rep;
    rep.d = d;
    rep.exact = false;
    McEstimate ps = estimate_ps(d, samples, seed, workers);
    EEstimate ee = sample_E(d, samples, mix64(seed) + 1, workers); // decoupled stream family
    rep.lhs = ps.estimate;
    rep.e_value = ee.mean_v;
    rep.rhs = std::ldexp(ee.mean_v, -d) + std::ldexp(static_cast<double>(d) * d, -(d + 1));
    rep.ratio = rep.rhs == 0 ? 0.0 : rep.lhs / rep.rhs;
    rep.samples = samples;
    rep.seed = seed;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// -------------------------------------------------------------- table ------

struct TableRow {
    int d;
    bool exact;
    std::uint64_t trials;   // 2^(d^2) when exact, sample count otherwise
    std::uint64_t singular; // exact count or sampled hits
    double p;               // singularity probability (estimate)
    double curve;           // d^2 / 2^d
    double ratio;           // p / curve
    Interval ci;            // sampling rows; equals {p, p} on exact rows
};

// Reproduces the summary table: exact censuses for d <= 5 (weighted
// sorted-column enumeration; same exact counts as the full sweep, far fewer
// classifications), Monte Carlo beyond.  Each sampled row uses a seed derived
// from (seed, d) so rows are decoupled but the whole table is reproducible.
inline std::vector<TableRow> reproduce_table(int from, int to, std::uint64_t samples, std::uint64_t seed,
                                             int workers = 1) {
    if (from < 1 || to < from)
        throw InputError("table range must satisfy 1 <= from <= to");
    std::vector<TableRow> rows;
    for (int d = from; d <= to; ++d) {
        TableRow row;
        row.d = d;
        row.curve = std::ldexp(static_cast<double>(d) * d, -d);
        if (d <= 5) {
            CensusReport census = enumerate_symmetric(d, workers);
            row.exact = true;
            row.trials = census.total;
            row.singular = census.singular;
            row.p = census.ps;
            row.ci = {row.p, row.p};
        } else {
            McEstimate est = estimate_ps(d, samples, mix64(seed ^ static_cast<std::uint64_t>(d)), workers);
            row.exact = false;
            row.trials = est.samples;
            row.singular = est.hits;
            row.p = est.estimate;
            row.ci = est.ci;
        }
        row.ratio = row.curve == 0 ? 0.0 : row.p / row.curve;
        rows.push_back(row);
    }
    return rows;
}

} // namespace cubespec
