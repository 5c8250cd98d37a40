#pragma once
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "cubespec/hyperplane.hpp"
#include "cubespec/parallel.hpp"
#include "cubespec/structure.hpp"

// Exhaustive censuses of d x d 0/1 matrices: counts by rank and by structural
// class, and the exact singularity probability.  Two enumeration modes:
// all 2^(d^2) matrices (d <= 5), and representatives with nondecreasing
// column order weighted by multinomial coefficients (d <= 6).  Class labels
// are invariant under column permutation, which is what makes the symmetric
// mode sound; the tests check both modes agree where both run.

namespace cubespec {

struct ClassCounts {
    std::uint64_t r = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;

    void add(Label l, std::uint64_t w) {
        switch (l) {
        case Label::R: r += w; break;
        case Label::S1: s1 += w; break;
        case Label::S2: s2 += w; break;
        case Label::S3: s3 += w; break;
        case Label::S4: s4 += w; break;
        }
    }
    void merge(const ClassCounts& o) {
        r += o.r;
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
    }
    std::uint64_t get(Label l) const {
        switch (l) {
        case Label::R: return r;
        case Label::S1: return s1;
        case Label::S2: return s2;
        case Label::S3: return s3;
        case Label::S4: return s4;
        }
        return 0;
    }
    std::uint64_t total() const { return r + s1 + s2 + s3 + s4; }
};

struct CensusReport {
    enum class Mode { full_enumeration, sorted_columns };
    int d;
    std::uint64_t total;                 // 2^(d^2)
    std::array<std::uint64_t, 8> by_rank{};
    ClassCounts by_class;                // column-family strong rank (the partition)
    ClassCounts by_class_rows;           // row-family variant, reported alongside
    std::uint64_t singular;
    mpq_class ps_exact;
    double ps;
    ExactE e;                            // exact expected point count at this d
    Mode mode;
    int workers;
    double wall_seconds;
};

namespace detail {

struct CensusTally {
    std::array<std::uint64_t, 8> by_rank{};
    ClassCounts cols;
    ClassCounts rows;
    std::uint64_t total = 0;

    void merge(const CensusTally& o) {
        for (size_t i = 0; i < by_rank.size(); ++i)
            by_rank[i] += o.by_rank[i];
        cols.merge(o.cols);
        rows.merge(o.rows);
        total += o.total;
    }
};

inline void transpose_bits(int d, const std::uint64_t* cols, std::uint64_t* rows) {
    for (int r = 0; r < d; ++r)
        rows[r] = 0;
    for (int j = 0; j < d; ++j) {
        std::uint64_t c = cols[j];
        while (c) {
            int i = __builtin_ctzll(c);
            c &= c - 1;
            rows[i] |= std::uint64_t{1} << j;
        }
    }
}

// Classifies one matrix for both the column-family and row-family variants.
inline void tally_matrix(int d, const std::uint64_t* cols, std::uint64_t weight, CensusTally& t) {
    MatrixClass mc = classify_span(d, cols);
    t.by_rank[static_cast<size_t>(mc.rank)] += weight;
    t.cols.add(mc.label, weight);
    t.total += weight;
    if (mc.label == Label::R) {
        t.rows.add(Label::R, weight); // transpose keeps full rank, and full rank forces R
        return;
    }
    std::uint64_t rows[64];
    transpose_bits(d, cols, rows);
    MatrixClass mr = classify_span(d, rows);
    t.rows.add(mr.label, weight);
}

// Multinomial weight of a nondecreasing column tuple: d! over the product of
// the multiplicity factorials.
inline std::uint64_t sorted_tuple_weight(int d, const std::uint64_t* cols) {
    static constexpr std::uint64_t kFact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    std::uint64_t w = kFact[d];
    int run = 1;
    for (int i = 1; i < d; ++i) {
        if (cols[i] == cols[i - 1]) {
            ++run;
        } else {
            w /= kFact[run];
            run = 1;
        }
    }
    w /= kFact[run];
    return w;
}

} // namespace detail

// Full enumeration of all 2^(d^2) matrices.
inline CensusReport enumerate_full(int d, int workers = 1) {
    if (d < 1 || d > 5)
        throw DimensionTooLarge("full enumeration supports d in 1..5, got " + std::to_string(d));
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t total = std::uint64_t{1} << (d * d);
    std::uint64_t mask = BinaryMatrix::row_mask(d);

    auto states = parallel_ranges<detail::CensusTally>(
        total, std::uint64_t{1} << 14, workers, [&](detail::CensusTally& t, std::uint64_t b, std::uint64_t e) {
            std::uint64_t cols[8];
            for (std::uint64_t idx = b; idx < e; ++idx) {
                for (int j = 0; j < d; ++j)
                    cols[j] = (idx >> (j * d)) & mask;
                detail::tally_matrix(d, cols, 1, t);
            }
        });

    detail::CensusTally sum;
    for (const auto& s : states)
        sum.merge(s);

    CensusReport rep;
    rep.d = d;
    rep.total = total;
    rep.by_rank = sum.by_rank;
    rep.by_class = sum.cols;
    rep.by_class_rows = sum.rows;
    rep.singular = total - sum.by_rank[static_cast<size_t>(d)];
    rep.ps_exact = mpq_class(mpz_class(static_cast<unsigned long>(rep.singular)),
                             mpz_class(static_cast<unsigned long>(total)));
    rep.ps_exact.canonicalize();
    rep.ps = rep.ps_exact.get_d();
    rep.e = exact_E(d, workers);
    rep.mode = CensusReport::Mode::full_enumeration;
    rep.workers = workers;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sum.total != total)
        throw std::logic_error("census lost matrices");
    return rep;
}

// Census over representatives with nondecreasing columns: a matrix whose
// column multiset has multiplicities m_1, m_2, ... stands for
// d!/(m_1! m_2! ...) matrices, and every tallied label is invariant under
// column permutation.
inline CensusReport enumerate_symmetric(int d, int workers = 1) {
    if (d < 1 || d > 6)
        throw DimensionTooLarge("symmetric enumeration supports d in 1..6, got " + std::to_string(d));
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t b = std::uint64_t{1} << d; // choices per column

    detail::CensusTally sum;
    if (d == 1) {
        std::uint64_t cols[1] = {0};
        detail::tally_matrix(1, cols, 1, sum);
        cols[0] = 1;
        detail::tally_matrix(1, cols, 1, sum);
    } else {
        // One task per (first, second) column pair with first <= second.
        std::uint64_t tasks = b * (b + 1) / 2;
        auto states = parallel_ranges<detail::CensusTally>(
            tasks, 1, workers, [&](detail::CensusTally& t, std::uint64_t task, std::uint64_t) {
                std::uint64_t c1 = 0, rest = task;
                while (rest >= b - c1) {
                    rest -= b - c1;
                    ++c1;
                }
                std::uint64_t cols[8];
                cols[0] = c1;
                cols[1] = c1 + rest;
                int pos = 2;
                if (pos == d) {
                    detail::tally_matrix(d, cols, detail::sorted_tuple_weight(d, cols), t);
                    return;
                }
                // Enumerate the remaining nondecreasing positions.
                cols[pos] = cols[pos - 1];
                for (;;) {
                    if (pos == 1)
                        break;
                    if (cols[pos] >= b) {
                        --pos;
                        if (pos >= 2)
                            ++cols[pos];
                        continue;
                    }
                    if (pos == d - 1) {
                        detail::tally_matrix(d, cols, detail::sorted_tuple_weight(d, cols), t);
                        ++cols[pos];
                    } else {
                        ++pos;
                        cols[pos] = cols[pos - 1];
                    }
                }
            });
        for (const auto& s : states)
            sum.merge(s);
    }

    std::uint64_t total = std::uint64_t{1} << (d * d);
    CensusReport rep;
    rep.d = d;
    rep.total = total;
    rep.by_rank = sum.by_rank;
    rep.by_class = sum.cols;
    rep.by_class_rows = sum.rows;
    rep.singular = total - sum.by_rank[static_cast<size_t>(d)];
    rep.ps_exact = mpq_class(mpz_class(static_cast<unsigned long>(rep.singular)),
                             mpz_class(static_cast<unsigned long>(total)));
    rep.ps_exact.canonicalize();
    rep.ps = rep.ps_exact.get_d();
    rep.e = exact_E(d, workers);
    rep.mode = CensusReport::Mode::sorted_columns;
    rep.workers = workers;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sum.total != total)
        throw std::logic_error("weighted census does not cover all matrices");
    return rep;
}

// ---------------------------------------------------------- identities -----

// Exact structural identities linking the census to the expected point count:
//   |R|  = |G| d! (2^d - E(d)) / d          (every regular matrix arises from
//                                            d independent columns, counted d
//                                            ways through its (d-1)-subsets)
//   |S1| = |G| (d!/2) (d-1)                 (duplicate one column of G)
// plus diagnostic ratios for the asymptotic statements tying |S2| to E(d)/d,
// |S1| to |S2|, |S3| to |S1|/d and |S4| to (|S1|+|S2|)/sqrt(d).
struct IdentityReport {
    int d;
    CensusReport census;
    mpq_class r_predicted;
    mpq_class s1_predicted;
    bool identity_r_exact;
    bool identity_s1_exact;
    double ratio_s2;       // |S2| / (|G| d! E(d)/d)
    double ratio_s1_vs_s2; // |S1| / |S2|
    double ratio_s3;       // |S3| d / |S1|
    double ratio_s4;       // |S4| sqrt(d) / (|S1|+|S2|)
};

inline IdentityReport verify_identities(int d, int workers = 1) {
    if (d < 2 || d > 5)
        throw DimensionTooLarge("identity verification runs the full census, d in 2..5");
    IdentityReport rep;
    rep.d = d;
    rep.census = enumerate_full(d, workers);
    const ExactE& e = rep.census.e;

    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(d));
    mpq_class g(mpz_class(static_cast<unsigned long>(e.g_count)));
    mpq_class two_d(mpz_class(1) << static_cast<unsigned long>(d));

    rep.r_predicted = g * mpq_class(fact) * (two_d - e.e) / mpq_class(static_cast<long>(d));
    rep.s1_predicted = g * mpq_class(fact) / 2 * mpq_class(static_cast<long>(d - 1));
    rep.identity_r_exact = rep.r_predicted == mpq_class(mpz_class(static_cast<unsigned long>(rep.census.by_class.r)));
    rep.identity_s1_exact =
        rep.s1_predicted == mpq_class(mpz_class(static_cast<unsigned long>(rep.census.by_class.s1)));

    mpq_class s2_pred = g * mpq_class(fact) * e.e / mpq_class(static_cast<long>(d));
    rep.ratio_s2 = s2_pred == 0 ? 0.0 : static_cast<double>(rep.census.by_class.s2) / s2_pred.get_d();
    rep.ratio_s1_vs_s2 = rep.census.by_class.s2 == 0
                             ? 0.0
                             : static_cast<double>(rep.census.by_class.s1) / static_cast<double>(rep.census.by_class.s2);
    rep.ratio_s3 = rep.census.by_class.s1 == 0
                       ? 0.0
                       : static_cast<double>(rep.census.by_class.s3) * d / static_cast<double>(rep.census.by_class.s1);
    std::uint64_t s12 = rep.census.by_class.s1 + rep.census.by_class.s2;
    rep.ratio_s4 = s12 == 0 ? 0.0 : static_cast<double>(rep.census.by_class.s4) * std::sqrt(d) / static_cast<double>(s12);
    return rep;
}

} // namespace cubespec
