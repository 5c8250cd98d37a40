#pragma once
#include <cmath>
#include <optional>
#include <string>

#include "cubespec/rank.hpp"

// Structural partition of square 0/1 matrices.
//
// The strong rank of a family of vectors is one less than the size of its
// smallest linearly dependent subfamily, capped at the family size when every
// subfamily is independent.  Square matrices split into five classes by rank
// and column strong rank:
//   R  : full rank,
//   S1 : rank d-1, strong rank 1 (a repeated column pair),
//   S2 : rank d-1, strong rank above the threshold N(d),
//   S3 : strong rank 0 or in [2, N(d)],
//   S4 : rank at most d-2 with strong rank 1 or above N(d).

namespace cubespec {

enum class Label { R, S1, S2, S3, S4 };

inline const char* label_name(Label l) {
    switch (l) {
    case Label::R: return "R";
    case Label::S1: return "S1";
    case Label::S2: return "S2";
    case Label::S3: return "S3";
    case Label::S4: return "S4";
    }
    return "?";
}

struct Threshold {
    int d;
    int n_d;      // floor(d - 3d/ln d), raised to 1 when the raw value is below 1
    bool clamped; // true when the raw floor was below 1
};

inline Threshold n_threshold(int d) {
    if (d < 2)
        throw InputError("threshold needs d >= 2");
    long double raw = static_cast<long double>(d) - 3.0L * d / std::log(static_cast<long double>(d));
    long long f = static_cast<long long>(std::floor(raw));
    if (f < 1)
        return {d, 1, true};
    return {d, static_cast<int>(f), false};
}

// Smallest dependent subfamily size minus one, by ascending subset search over
// the columns.  Exhaustive over all subsets, so guarded by family size.
inline int strong_rank_span(int rows, int m, const std::uint64_t* cols, int guard = 14) {
    if (m > guard)
        throw TooExpensive("strong rank subset search over " + std::to_string(m) +
                           " vectors exceeds the guard of " + std::to_string(guard));
    std::array<std::uint64_t, 64> sub;
    std::array<int, 64> idx;
    for (int k = 1; k <= m; ++k) {
        if (k > rows)
            return k - 1; // more than `rows` vectors are always dependent
        for (int i = 0; i < k; ++i)
            idx[static_cast<size_t>(i)] = i;
        for (;;) {
            for (int i = 0; i < k; ++i)
                sub[static_cast<size_t>(i)] = cols[idx[static_cast<size_t>(i)]];
            if (!columns_independent(rows, {sub.data(), static_cast<size_t>(k)}))
                return k - 1;
            int i = k - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == m - k + i)
                --i;
            if (i < 0)
                break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return m; // every subfamily independent: capped at the family size
}

inline int strong_rank(const BinaryMatrix& family, int guard = 14) {
    return strong_rank_span(family.rows(), family.cols(), family.columns().data(), guard);
}

struct MatrixClass {
    Label label;
    int rank;
    int strong_rank;
    std::optional<int> kernel_support; // present exactly when rank == d-1
};

namespace detail {

inline Label label_for(int d, int rank, int sr) {
    if (rank == d)
        return Label::R;
    if (sr == 0 || (sr >= 2 && sr <= n_threshold(d).n_d))
        return Label::S3;
    // here sr == 1 or sr > N(d)
    return rank == d - 1 ? (sr == 1 ? Label::S1 : Label::S2) : Label::S4;
}

} // namespace detail

// Classification core on bit-packed columns.  Full rank and corank one are
// settled by elimination (for corank one the strong rank is read off the
// kernel support, an equivalence the tests check exhaustively); only rank
// d-2 and below falls back to the subset search.
inline MatrixClass classify_span(int d, const std::uint64_t* cols, int guard = 14) {
    std::span<const std::uint64_t> s{cols, static_cast<size_t>(d)};
    if (gf2_rank(d, s) == d)
        return {Label::R, d, d, std::nullopt};
    EchelonInfo e = echelon_exact(d, d, cols);
    if (e.rank == d)
        return {Label::R, d, d, std::nullopt};
    if (e.rank == d - 1) {
        std::array<std::uint64_t, 64> rt;
        std::uint64_t rowmask[64];
        for (int r = 0; r < d; ++r)
            rowmask[r] = 0;
        for (int j = 0; j < d; ++j) {
            std::uint64_t c = cols[j];
            while (c) {
                int i = __builtin_ctzll(c);
                c &= c - 1;
                rowmask[i] |= std::uint64_t{1} << j;
            }
        }
        for (int k = 0; k < d - 1; ++k)
            rt[static_cast<size_t>(k)] = rowmask[e.pivot_rows[static_cast<size_t>(k)]];
        int supp = cofactor_support_64(d, rt.data());
        if (supp < 0) { // int64 minors overflowed; take the exact route
            IntegerVector a = cofactor_vector(d, rt.data());
            supp = a.support();
        }
        int sr = supp - 1;
        return {detail::label_for(d, e.rank, sr), e.rank, sr, supp};
    }
    int sr = strong_rank_span(d, d, cols, guard);
    return {detail::label_for(d, e.rank, sr), e.rank, sr, std::nullopt};
}

inline MatrixClass classify(const BinaryMatrix& m, int guard = 14) {
    if (m.rows() != m.cols())
        throw InputError("classification needs a square matrix");
    return classify_span(m.rows(), m.columns().data(), guard);
}

// Corank-one diagnostic record: the kernel vector, which single-column
// deletions leave an independent set, and how kernel support relates to the
// strong rank.
struct KernelSupportCheck {
    IntegerVector kernel;
    std::vector<bool> deletion_independent; // entry k: columns minus column k independent
    bool iff_holds;                         // deletion_independent[k] == (kernel[k] != 0) for all k
    int support;
    int strong_rank;
    bool support_matches; // support == strong_rank + 1
};

inline KernelSupportCheck kernel_support_check(const BinaryMatrix& m, int guard = 14) {
    int d = m.rows();
    KernelSupportCheck out;
    out.kernel = kernel_vector_square(m); // throws RankDeficient unless rank is d-1
    out.deletion_independent.resize(static_cast<size_t>(d));
    out.iff_holds = true;
    for (int k = 0; k < d; ++k) {
        BinaryMatrix sub = m.without_column(k);
        bool indep = columns_independent(d, sub.columns());
        out.deletion_independent[static_cast<size_t>(k)] = indep;
        if (indep != (out.kernel[static_cast<size_t>(k)] != 0))
            out.iff_holds = false;
    }
    out.support = out.kernel.support();
    out.strong_rank = strong_rank(m, guard);
    out.support_matches = (out.support == out.strong_rank + 1);
    return out;
}

} // namespace cubespec
