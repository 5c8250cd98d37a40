#pragma once
#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "cubespec/bitmatrix.hpp"
#include "cubespec/errors.hpp"
#include "cubespec/intvec.hpp"

// Exact rank, determinant and kernel machinery for 0/1 matrices.
//
// The pipeline is tiered: a bit-sliced GF(2) elimination certifies full rank
// for free in the common case (an integer dependency survives reduction mod 2,
// so GF(2) independence implies independence over the rationals); a single
// prime elimination mod 2^31-1 certifies full rank for most of the rest; and
// fraction-free (Bareiss) elimination over checked machine integers with an
// arbitrary-precision fallback settles everything else exactly.  Modular rank
// deficiency is never trusted on its own.

namespace cubespec {

using Int128 = __int128;

inline mpz_class to_mpz(Int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class r = static_cast<unsigned long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long>(u & ~std::uint64_t{0});
    return neg ? mpz_class(-r) : r;
}

// ---------------------------------------------------------------- GF(2) ----

// Rank over GF(2) of bit-packed columns (bit i of cols[j] = entry (i, j)).
inline int gf2_rank(int rows, std::span<const std::uint64_t> cols) {
    (void)rows;
    std::array<std::uint64_t, 64> basis{};
    int rank = 0;
    for (std::uint64_t c : cols) {
        while (c) {
            int r = __builtin_ctzll(c);
            if (basis[static_cast<size_t>(r)]) {
                c ^= basis[static_cast<size_t>(r)];
            } else {
                basis[static_cast<size_t>(r)] = c;
                ++rank;
                break;
            }
        }
    }
    return rank;
}

// ------------------------------------------------------------- mod p -------

// Mersenne prime 2^31-1: single-word arithmetic with cheap folding reduction.
inline constexpr std::uint32_t kModPrime = 2147483647u;

inline std::uint32_t modp_reduce(std::uint64_t x) {
    x = (x & kModPrime) + (x >> 31);
    x = (x & kModPrime) + (x >> 31);
    return x >= kModPrime ? static_cast<std::uint32_t>(x - kModPrime) : static_cast<std::uint32_t>(x);
}

inline std::uint32_t modp_mul(std::uint32_t a, std::uint32_t b) {
    return modp_reduce(static_cast<std::uint64_t>(a) * b);
}

inline std::uint32_t modp_sub(std::uint32_t a, std::uint32_t b) {
    return a >= b ? a - b : a + kModPrime - b;
}

inline std::uint32_t modp_pow(std::uint32_t base, std::uint64_t exp) {
    std::uint32_t acc = 1;
    while (exp) {
        if (exp & 1)
            acc = modp_mul(acc, base);
        base = modp_mul(base, base);
        exp >>= 1;
    }
    return acc;
}

inline std::uint32_t modp_inv(std::uint32_t a) { return modp_pow(a, kModPrime - 2); }

// Rank mod 2^31-1.  For 0/1 input this is a lower bound on the rational rank;
// when it reaches min(rows, cols) it certifies full rank exactly.
inline int modp_rank(int rows, std::span<const std::uint64_t> cols) {
    int n = rows, m = static_cast<int>(cols.size());
    std::vector<std::uint32_t> heap;
    std::array<std::uint32_t, 64 * 64> stack;
    std::uint32_t* a;
    if (static_cast<size_t>(n) * static_cast<size_t>(m) <= stack.size()) {
        a = stack.data();
    } else {
        heap.resize(static_cast<size_t>(n) * static_cast<size_t>(m));
        a = heap.data();
    }
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            a[static_cast<size_t>(i) * m + j] = static_cast<std::uint32_t>((cols[static_cast<size_t>(j)] >> i) & 1u);

    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (a[static_cast<size_t>(i) * m + c]) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        if (p != r)
            for (int j = c; j < m; ++j)
                std::swap(a[static_cast<size_t>(p) * m + j], a[static_cast<size_t>(r) * m + j]);
        std::uint32_t inv = modp_inv(a[static_cast<size_t>(r) * m + c]);
        for (int j = c; j < m; ++j)
            a[static_cast<size_t>(r) * m + j] = modp_mul(a[static_cast<size_t>(r) * m + j], inv);
        for (int i = r + 1; i < n; ++i) {
            std::uint32_t f = a[static_cast<size_t>(i) * m + c];
            if (!f)
                continue;
            for (int j = c; j < m; ++j)
                a[static_cast<size_t>(i) * m + j] =
                    modp_sub(a[static_cast<size_t>(i) * m + j], modp_mul(f, a[static_cast<size_t>(r) * m + j]));
        }
        ++r;
    }
    return r;
}

// ------------------------------------------------------------ Bareiss ------

template <class T>
inline bool checked_mul(const T& x, const T& y, T& out) {
    if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, Int128>) {
        return __builtin_mul_overflow(x, y, &out);
    } else {
        out = x * y;
        return false;
    }
}

template <class T>
inline bool checked_sub(const T& x, const T& y, T& out) {
    if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, Int128>) {
        return __builtin_sub_overflow(x, y, &out);
    } else {
        out = x - y;
        return false;
    }
}

template <class T>
inline void exact_div(const T& num, const T& den, T& out) {
    if constexpr (std::is_same_v<T, mpz_class>) {
        mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
        out = num / den;
    }
}

template <class T, bool kTrivial = std::is_trivial_v<T>>
struct EliminationBuffer {
    std::vector<T> heap;
    T* acquire(size_t need) {
        heap.resize(need);
        return heap.data();
    }
};

template <class T>
struct EliminationBuffer<T, true> {
    std::array<T, 64 * 64> stack;
    std::vector<T> heap;
    T* acquire(size_t need) {
        if (need <= stack.size())
            return stack.data();
        heap.resize(need);
        return heap.data();
    }
};

template <class T>
struct Echelon {
    int rank = 0;
    T det = T(0); // exact determinant for square input
    bool det_valid = false;
    std::array<std::int8_t, 64> pivot_rows{}; // original row indices, [0, rank)
};

// Fraction-free row echelon (Bareiss, with column skipping for rank-deficient
// input: every intermediate entry stays a minor of the original matrix, so
// divisions remain exact).  Returns false when a checked integer instantiation
// overflows; the caller escalates to a wider type.
template <class T>
inline bool bareiss_echelon(int n, int m, const std::uint64_t* cols, Echelon<T>& out) {
    EliminationBuffer<T> buf;
    T* a = buf.acquire(static_cast<size_t>(n) * static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            a[static_cast<size_t>(i) * m + j] = static_cast<int>((cols[j] >> i) & 1u);

    std::array<std::int8_t, 64> perm;
    for (int i = 0; i < n; ++i)
        perm[static_cast<size_t>(i)] = static_cast<std::int8_t>(i);

    int r = 0;
    int sign = 1;
    T prev = T(1);
    T t1{}, t2{}, num{};
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (a[static_cast<size_t>(i) * m + c] != 0) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        if (p != r) {
            for (int j = 0; j < m; ++j)
                std::swap(a[static_cast<size_t>(p) * m + j], a[static_cast<size_t>(r) * m + j]);
            std::swap(perm[static_cast<size_t>(p)], perm[static_cast<size_t>(r)]);
            sign = -sign;
        }
        const T& pivot = a[static_cast<size_t>(r) * m + c];
        for (int i = r + 1; i < n; ++i) {
            T& aic = a[static_cast<size_t>(i) * m + c];
            if (aic == 0) {
                // rows with no pivot-column entry still rescale by pivot/prev:
                // trailing entries must stay bordered minors or later exact
                // divisions (and the final determinant) break
                if (pivot == prev)
                    continue;
                for (int j = c + 1; j < m; ++j) {
                    if (checked_mul(pivot, a[static_cast<size_t>(i) * m + j], t1))
                        return false;
                    exact_div(t1, prev, a[static_cast<size_t>(i) * m + j]);
                }
                continue;
            }
            for (int j = c + 1; j < m; ++j) {
                if (checked_mul(pivot, a[static_cast<size_t>(i) * m + j], t1))
                    return false;
                if (checked_mul(aic, a[static_cast<size_t>(r) * m + j], t2))
                    return false;
                if (checked_sub(t1, t2, num))
                    return false;
                exact_div(num, prev, a[static_cast<size_t>(i) * m + j]);
            }
            aic = T(0);
        }
        prev = pivot;
        out.pivot_rows[static_cast<size_t>(r)] = perm[static_cast<size_t>(r)];
        ++r;
    }
    out.rank = r;
    if (n == m) {
        out.det_valid = true;
        if (r < n)
            out.det = T(0);
        else
            out.det = sign < 0 ? T(-prev) : prev;
    }
    return true;
}

// Rank via the checked-width cascade, no determinant materialization.
inline int bareiss_rank(int n, int m, const std::uint64_t* cols) {
    int k = std::min(n, m);
    if (k <= 34) {
        Echelon<std::int64_t> e;
        if (bareiss_echelon(n, m, cols, e))
            return e.rank;
    }
    if (k <= 60) {
        Echelon<Int128> e;
        if (bareiss_echelon(n, m, cols, e))
            return e.rank;
    }
    Echelon<mpz_class> e;
    bareiss_echelon(n, m, cols, e);
    return e.rank;
}

// Determinant of a square n x n bit-packed matrix over signed 64-bit words.
// ok=false means the checked arithmetic overflowed and a wider type is needed.
inline std::int64_t det64(int n, const std::uint64_t* cols, bool& ok) {
    Echelon<std::int64_t> e;
    ok = bareiss_echelon(n, n, cols, e);
    return ok ? e.det : 0;
}

inline mpz_class det_exact_span(int n, const std::uint64_t* cols) {
    if (n <= 34) {
        Echelon<std::int64_t> e;
        if (bareiss_echelon(n, n, cols, e))
            return mpz_class(static_cast<long>(e.det));
    }
    if (n <= 60) {
        Echelon<Int128> e;
        if (bareiss_echelon(n, n, cols, e))
            return to_mpz(e.det);
    }
    Echelon<mpz_class> e;
    bareiss_echelon(n, n, cols, e);
    return e.det;
}

// Full exact echelon summary (rank, pivot row indices, determinant for
// square input), escalating through the width cascade.
struct EchelonInfo {
    int rank = 0;
    mpz_class det;
    bool det_valid = false;
    std::array<std::int8_t, 64> pivot_rows{};
};

inline EchelonInfo echelon_exact(int n, int m, const std::uint64_t* cols) {
    EchelonInfo info;
    int k = std::min(n, m);
    if (k <= 34) {
        Echelon<std::int64_t> e;
        if (bareiss_echelon(n, m, cols, e)) {
            info.rank = e.rank;
            info.det_valid = e.det_valid;
            if (e.det_valid)
                info.det = mpz_class(static_cast<long>(e.det));
            info.pivot_rows = e.pivot_rows;
            return info;
        }
    }
    if (k <= 60) {
        Echelon<Int128> e;
        if (bareiss_echelon(n, m, cols, e)) {
            info.rank = e.rank;
            info.det_valid = e.det_valid;
            if (e.det_valid)
                info.det = to_mpz(e.det);
            info.pivot_rows = e.pivot_rows;
            return info;
        }
    }
    Echelon<mpz_class> e;
    bareiss_echelon(n, m, cols, e);
    info.rank = e.rank;
    info.det_valid = e.det_valid;
    info.det = e.det;
    info.pivot_rows = e.pivot_rows;
    return info;
}

// ------------------------------------------------------------ facades ------

struct RankResult {
    enum class Method { modular_certificate, fraction_free_exact };
    int rank = 0;
    std::optional<mpz_class> determinant; // present exactly for square input
    Method method = Method::fraction_free_exact;
};

// Exact rank; for square input also the exact determinant.  Non-square full
// rank may be certified modularly; every other answer comes from exact
// fraction-free elimination.
inline RankResult rank_exact(const BinaryMatrix& m) {
    RankResult res;
    int n = m.rows(), c = m.cols();
    if (n == c) {
        EchelonInfo e = echelon_exact(n, c, m.columns().data());
        res.rank = e.rank;
        res.determinant = e.det;
        res.method = RankResult::Method::fraction_free_exact;
        return res;
    }
    int full = std::min(n, c);
    if (gf2_rank(n, m.columns()) == full || modp_rank(n, m.columns()) == full) {
        res.rank = full;
        res.method = RankResult::Method::modular_certificate;
        return res;
    }
    res.rank = bareiss_rank(n, c, m.columns().data());
    res.method = RankResult::Method::fraction_free_exact;
    return res;
}

// Singularity test for a square d x d matrix: modular full rank certifies
// regularity; anything modularly deficient is settled by exact elimination.
inline bool is_singular_span(int d, const std::uint64_t* cols) {
    std::span<const std::uint64_t> s{cols, static_cast<size_t>(d)};
    if (gf2_rank(d, s) == d)
        return false;
    if (modp_rank(d, s) == d)
        return false;
    return bareiss_rank(d, d, cols) < d;
}

inline bool is_singular(const BinaryMatrix& m) {
    if (m.rows() != m.cols())
        throw InputError("singularity test needs a square matrix");
    return is_singular_span(m.rows(), m.columns().data());
}

// Exact independence test for m <= rows packed columns.
inline bool columns_independent(int rows, std::span<const std::uint64_t> cols) {
    int m = static_cast<int>(cols.size());
    if (m > rows)
        return false;
    if (gf2_rank(rows, cols) == m)
        return true;
    if (modp_rank(rows, cols) == m)
        return true;
    return bareiss_rank(rows, m, cols.data()) == m;
}

// ------------------------------------------------------------- kernel ------

// Removes bit r from every column mask, closing the gap.
inline void drop_row_bits(int m, const std::uint64_t* cols, int r, std::uint64_t* out) {
    std::uint64_t low = (std::uint64_t{1} << r) - 1;
    for (int j = 0; j < m; ++j) {
        std::uint64_t c = cols[j];
        out[j] = (c & low) | ((c >> 1) & ~low);
    }
}

// Cofactor normal of an n x (n-1) system: entry i is the signed maximal minor
// obtained by deleting row i, with alternating signs so the result is
// orthogonal to every column.  Entry 0 carries sign -1.
inline IntegerVector cofactor_vector(int n, const std::uint64_t* cols) {
    IntegerVector a(static_cast<size_t>(n));
    std::array<std::uint64_t, 64> sub{};
    for (int i = 0; i < n; ++i) {
        drop_row_bits(n - 1, cols, i, sub.data());
        mpz_class d = det_exact_span(n - 1, sub.data());
        a[static_cast<size_t>(i)] = (i % 2 == 0) ? mpz_class(-d) : d;
    }
    return a;
}

// Support size of the cofactor normal using machine words only; returns -1
// when a minor overflows int64 (callers then use the exact path).
inline int cofactor_support_64(int n, const std::uint64_t* cols) {
    std::array<std::uint64_t, 64> sub{};
    int supp = 0;
    for (int i = 0; i < n; ++i) {
        drop_row_bits(n - 1, cols, i, sub.data());
        bool ok = false;
        std::int64_t d = det64(n - 1, sub.data(), ok);
        if (!ok)
            return -1;
        supp += (d != 0);
    }
    return supp;
}

// Integer normal of the hyperplane spanned by d-1 independent columns.
// Throws RankDeficient when the columns do not have rank d-1.
inline IntegerVector kernel_normal(const BinaryMatrix& g) {
    int d = g.rows();
    if (g.cols() != d - 1)
        throw InputError("kernel_normal expects a d x (d-1) matrix");
    if (d > 1 && !columns_independent(d, g.columns()))
        throw RankDeficient("columns are linearly dependent");
    return cofactor_vector(d, g.columns().data());
}

// Integer kernel vector of a square matrix of rank exactly d-1: take d-1
// independent rows, view them as the defining system, and return its cofactor
// normal.  The kernel is one-dimensional, so the support of the result equals
// the support of the primitive kernel vector.
inline IntegerVector kernel_vector_square(const BinaryMatrix& m) {
    int d = m.rows();
    if (m.cols() != d)
        throw InputError("kernel_vector_square expects a square matrix");
    EchelonInfo e = echelon_exact(d, d, m.columns().data());
    if (e.rank != d - 1)
        throw RankDeficient("matrix rank is " + std::to_string(e.rank) + ", expected " + std::to_string(d - 1));
    std::array<std::uint64_t, 64> rt;
    for (int k = 0; k < d - 1; ++k)
        rt[static_cast<size_t>(k)] = m.row(e.pivot_rows[static_cast<size_t>(k)]);
    IntegerVector a = cofactor_vector(d, rt.data());
    for (int r = 0; r < d; ++r) {
        mpz_class dot = 0;
        std::uint64_t row = m.row(r);
        for (int j = 0; j < d; ++j)
            if ((row >> j) & 1u)
                dot += a[static_cast<size_t>(j)];
        if (dot != 0)
            throw std::logic_error("kernel vector fails orthogonality check");
    }
    return a;
}

} // namespace cubespec
