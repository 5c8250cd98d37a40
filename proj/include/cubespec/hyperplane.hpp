#pragma once
#include <algorithm>
#include <chrono>
#include <cstdint>

#include "cubespec/intvec.hpp"
#include "cubespec/parallel.hpp"
#include "cubespec/rank.hpp"
#include "cubespec/rng.hpp"

// Counting 0/1 points on hyperplanes through the origin.
//
// A set of d-1 independent 0/1 columns spans a hyperplane with an integer
// normal given by the cofactor vector; the number of 0/1 points on the
// hyperplane is the number of subsets of the normal's entries summing to
// zero.  Two counters are provided: plain enumeration of all 2^d corners and
// a meet-in-the-middle split, and they are tested against each other.

namespace cubespec {

// ------------------------------------------------------- counting cores ----

namespace detail {

// Gray-code walk over all 2^d subset sums, 64-bit entries.
inline std::uint64_t count_zero_sums_gray64(int d, const std::int64_t* a) {
    std::int64_t sum = 0;
    std::uint64_t count = 1; // empty subset
    std::uint64_t state = 0;
    std::uint64_t total = std::uint64_t{1} << d;
    for (std::uint64_t step = 1; step < total; ++step) {
        int bit = __builtin_ctzll(step);
        std::uint64_t mask = std::uint64_t{1} << bit;
        state ^= mask;
        sum += (state & mask) ? a[bit] : -a[bit];
        count += (sum == 0);
    }
    return count;
}

inline std::uint64_t count_zero_sums_gray_mpz(int d, const IntegerVector& a) {
    mpz_class sum = 0;
    std::uint64_t count = 1;
    std::uint64_t state = 0;
    std::uint64_t total = std::uint64_t{1} << d;
    for (std::uint64_t step = 1; step < total; ++step) {
        int bit = __builtin_ctzll(step);
        std::uint64_t mask = std::uint64_t{1} << bit;
        state ^= mask;
        if (state & mask)
            sum += a[static_cast<size_t>(bit)];
        else
            sum -= a[static_cast<size_t>(bit)];
        count += (sum == 0);
    }
    return count;
}

template <class S>
inline std::vector<S> half_sums(const S* a, int from, int n) {
    std::vector<S> sums(size_t{1} << n);
    sums[0] = S(0);
    for (int b = 0; b < n; ++b) {
        size_t sz = size_t{1} << b;
        for (size_t i = 0; i < sz; ++i)
            sums[sz + i] = sums[i] + a[from + b];
    }
    return sums;
}

template <class S>
inline std::uint64_t count_zero_sums_mitm(int d, const S* a) {
    int left = (d + 1) / 2;
    int right = d - left;
    std::vector<S> lhs = half_sums(a, 0, left);
    std::sort(lhs.begin(), lhs.end());
    std::vector<S> rhs = half_sums(a, left, right);
    std::uint64_t count = 0;
    for (const S& s : rhs) {
        S target = -s;
        auto range = std::equal_range(lhs.begin(), lhs.end(), target);
        count += static_cast<std::uint64_t>(range.second - range.first);
    }
    return count;
}

} // namespace detail

// ----------------------------------------------------------- public API ----

// Number of 0/1 vectors x with <a, x> = 0, by enumerating all 2^d corners.
inline std::uint64_t count_points_bruteforce(const IntegerVector& a) {
    int d = static_cast<int>(a.size());
    if (d < 1 || d > 25)
        throw DimensionTooLarge("brute-force point count supports 1..25 entries, got " + std::to_string(d));
    std::int64_t abs_sum = 0;
    if (a.fits_int64(abs_sum)) {
        std::int64_t buf[32];
        for (int i = 0; i < d; ++i)
            buf[i] = a[static_cast<size_t>(i)].get_si();
        return detail::count_zero_sums_gray64(d, buf);
    }
    return detail::count_zero_sums_gray_mpz(d, a);
}

// Same count via meet-in-the-middle: tabulate the 2^ceil(d/2) partial sums of
// one half as a sorted array and count matching complements from the other.
inline std::uint64_t count_points_mitm(const IntegerVector& a) {
    int d = static_cast<int>(a.size());
    if (d < 2)
        throw InputError("meet-in-the-middle needs at least 2 entries");
    if (d > 46)
        throw DimensionTooLarge("meet-in-the-middle table for d = " + std::to_string(d) + " will not fit in memory");
    std::int64_t abs_sum = 0;
    if (a.fits_int64(abs_sum)) {
        std::int64_t buf[64];
        for (int i = 0; i < d; ++i)
            buf[i] = a[static_cast<size_t>(i)].get_si();
        return detail::count_zero_sums_mitm(d, buf);
    }
    std::vector<mpz_class> buf(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        buf[static_cast<size_t>(i)] = a[static_cast<size_t>(i)];
    return detail::count_zero_sums_mitm(d, buf.data());
}

// Dispatcher: enumeration is faster below ~14 entries, the split wins beyond.
inline std::uint64_t count_points(const IntegerVector& a) {
    return a.size() <= 14 ? count_points_bruteforce(a) : count_points_mitm(a);
}

struct SpanSummary {
    enum class Method { brute_force, meet_in_middle };
    int d;
    IntegerVector normal;
    std::uint64_t point_count;
    Method method;
};

// Summary for the hyperplane spanned by d-1 independent 0/1 columns:
// the integer normal and the exact number of 0/1 points it contains.
inline SpanSummary v_of_set(const BinaryMatrix& g) {
    int d = g.rows();
    if (g.cols() != d - 1)
        throw InputError("expected d x (d-1) generating set, got " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()));
    if (d > 1 && !columns_independent(d, g.columns()))
        throw NotIndependent("generating set is linearly dependent");
    SpanSummary s;
    s.d = d;
    s.normal = cofactor_vector(d, g.columns().data());
    s.method = d <= 14 ? SpanSummary::Method::brute_force : SpanSummary::Method::meet_in_middle;
    s.point_count = s.method == SpanSummary::Method::brute_force ? count_points_bruteforce(s.normal)
                                                                 : count_points_mitm(s.normal);
    return s;
}

// ------------------------------------------------ expected point counts ----

struct ExactE {
    int d;
    std::uint64_t g_count; // number of independent (d-1)-subsets of nonzero 0/1 vectors
    std::uint64_t sum_v;   // total point count over all of them
    mpq_class e;           // sum_v / g_count
};

namespace detail {

// 64-bit cofactor vector; false when a minor overflows.
inline bool cofactor_vector_64(int n, const std::uint64_t* cols, std::int64_t* out) {
    std::array<std::uint64_t, 64> sub;
    for (int i = 0; i < n; ++i) {
        drop_row_bits(n - 1, cols, i, sub.data());
        bool ok = false;
        std::int64_t det = det64(n - 1, sub.data(), ok);
        if (!ok)
            return false;
        out[i] = (i % 2 == 0) ? -det : det;
    }
    return true;
}

// Point count for a hyperplane given by d-1 packed columns, all fast paths.
inline std::uint64_t span_point_count(int d, const std::uint64_t* cols) {
    std::int64_t a64[64];
    if (cofactor_vector_64(d, cols, a64)) {
        std::int64_t abs_sum = 0;
        bool fits = true;
        for (int i = 0; i < d && fits; ++i) {
            std::int64_t v = a64[i] < 0 ? -a64[i] : a64[i];
            if (abs_sum > (std::int64_t{1} << 62) - v)
                fits = false;
            abs_sum += v;
        }
        if (fits)
            return d <= 14 ? count_zero_sums_gray64(d, a64) : count_zero_sums_mitm(d, a64);
    }
    IntegerVector a = cofactor_vector(d, cols);
    return count_points(a);
}

} // namespace detail

// Exact average of the point count over every independent (d-1)-subset of the
// nonzero 0/1 vectors.  Guarded: the subset space explodes beyond d = 7.
inline ExactE exact_E(int d, int workers = 1) {
    if (d < 1 || d > 7)
        throw DimensionTooLarge("exact expectation supports d in 1..7, got " + std::to_string(d));
    if (d == 1)
        return {1, 1, 1, mpq_class(1)}; // the empty set spans {0}; the origin is its one 0/1 point
    std::uint64_t n = (std::uint64_t{1} << d) - 1;
    int k = d - 1;

    struct Acc {
        std::uint64_t g = 0;
        std::uint64_t sum = 0;
    };
    // One task per smallest member; combinations enumerated lexicographically.
    auto states = parallel_ranges<Acc>(
        n, 1, workers, [&](Acc& acc, std::uint64_t b, std::uint64_t) {
            std::uint64_t first = b + 1;
            std::uint64_t c[8];
            c[0] = first;
            int depth = 1;
            if (k == 1) {
                ++acc.g;
                acc.sum += detail::span_point_count(d, c);
                return;
            }
            c[1] = first;
            for (;;) {
                if (depth == 0)
                    break;
                ++c[depth];
                if (c[depth] > n) {
                    --depth;
                    continue;
                }
                if (depth == k - 1) {
                    if (gf2_rank(d, {c, static_cast<size_t>(k)}) == k ||
                        columns_independent(d, {c, static_cast<size_t>(k)})) {
                        ++acc.g;
                        acc.sum += detail::span_point_count(d, c);
                    }
                } else {
                    ++depth;
                    c[depth] = c[depth - 1];
                }
            }
        });

    ExactE out;
    out.d = d;
    out.g_count = 0;
    out.sum_v = 0;
    for (const auto& s : states) {
        out.g_count += s.g;
        out.sum_v += s.sum;
    }
    out.e = mpq_class(mpz_class(static_cast<unsigned long>(out.sum_v)),
                      mpz_class(static_cast<unsigned long>(out.g_count)));
    out.e.canonicalize();
    return out;
}

struct EEstimate {
    int d;
    std::uint64_t attempts;
    std::uint64_t accepted; // independent draws
    std::uint64_t rejected;
    std::uint64_t sum_v;
    double mean_v;
    double ci_low, ci_high; // normal-approximation 95% interval for the mean
    std::uint64_t seed;
    int workers;
    double wall_seconds;
};

// Monte Carlo estimate of the expected point count: draw d-1 random 0/1
// columns, reject dependent draws, average the point count of the rest.
// Sample index i always uses the stream derived from (seed, i), so the result
// is identical for any worker count.
inline EEstimate sample_E(int d, std::uint64_t samples, std::uint64_t seed, int workers = 1) {
    if (d < 2 || d > 46)
        throw DimensionTooLarge("sampled expectation supports d in 2..46, got " + std::to_string(d));
    if (samples < 1)
        throw InputError("need at least one sample");

    struct Acc {
        std::uint64_t accepted = 0;
        unsigned __int128 sum = 0;
        unsigned __int128 sum_sq = 0;
    };
    auto t0 = std::chrono::steady_clock::now();
    auto states = parallel_ranges<Acc>(
        samples, 4096, workers, [&](Acc& acc, std::uint64_t b, std::uint64_t e) {
            std::uint64_t cols[64];
            for (std::uint64_t i = b; i < e; ++i) {
                SampleStream stream(seed, i);
                random_columns(stream, d, d - 1, cols);
                std::span<const std::uint64_t> s{cols, static_cast<size_t>(d - 1)};
                if (gf2_rank(d, s) != d - 1 && !columns_independent(d, s))
                    continue;
                std::uint64_t v = detail::span_point_count(d, cols);
                ++acc.accepted;
                acc.sum += v;
                acc.sum_sq += static_cast<unsigned __int128>(v) * v;
            }
        });
    auto t1 = std::chrono::steady_clock::now();

    EEstimate out;
    out.d = d;
    out.attempts = samples;
    out.accepted = 0;
    unsigned __int128 sum_v = 0;
    unsigned __int128 sum_sq = 0;
    for (const auto& s : states) {
        out.accepted += s.accepted;
        sum_v += s.sum;
        sum_sq += s.sum_sq;
    }
    out.sum_v = static_cast<std::uint64_t>(sum_v);
    out.rejected = samples - out.accepted;
    out.seed = seed;
    out.workers = workers;
    out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (out.accepted == 0) {
        out.mean_v = 0.0;
        out.ci_low = 0.0;
        out.ci_high = 0.0;
        return out;
    }
    long double n = static_cast<long double>(out.accepted);
    long double mean = static_cast<long double>(sum_v) / n;
    out.mean_v = static_cast<double>(mean);
    if (out.accepted == 1) {
        out.ci_low = out.ci_high = out.mean_v;
        return out;
    }
    long double ssq = static_cast<long double>(sum_sq);
    long double var = (ssq - n * mean * mean) / (n - 1.0L);
    if (var < 0)
        var = 0;
    long double se = sqrtl(var / n);
    const long double z = 1.959963984540054L;
    out.ci_low = static_cast<double>(mean - z * se);
    out.ci_high = static_cast<double>(mean + z * se);
    return out;
}

} // namespace cubespec
