#pragma once
// Reference implementations for the test suite.  Deliberately simple and
// algorithmically independent of the production code: dense rational
// elimination instead of fraction-free bit-packed elimination, recursive
// cofactor expansion instead of Bareiss, plain subset loops instead of
// Gray-code walks.  Slow is fine here; disagreement is what matters.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cubespec/bitmatrix.hpp"
#include "cubespec/intvec.hpp"

namespace oracle {

using Mat = std::vector<std::vector<mpq_class>>;

inline Mat from_bits(const cubespec::BinaryMatrix& m) {
    Mat a(static_cast<size_t>(m.rows()), std::vector<mpq_class>(static_cast<size_t>(m.cols())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.entry(i, j);
    return a;
}

// Determinant by recursive cofactor expansion along the first row.
inline mpz_class det_cofactor(const std::vector<std::vector<mpz_class>>& a) {
    size_t n = a.size();
    if (n == 0)
        return 1;
    if (n == 1)
        return a[0][0];
    mpz_class det = 0;
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0)
            continue;
        std::vector<std::vector<mpz_class>> sub(n - 1, std::vector<mpz_class>(n - 1));
        for (size_t i = 1; i < n; ++i) {
            size_t t = 0;
            for (size_t c = 0; c < n; ++c) {
                if (c == j)
                    continue;
                sub[i - 1][t++] = a[i][c];
            }
        }
        mpz_class term = a[0][j] * det_cofactor(sub);
        if (j % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

inline std::vector<std::vector<mpz_class>> int_matrix(const cubespec::BinaryMatrix& m) {
    std::vector<std::vector<mpz_class>> a(static_cast<size_t>(m.rows()),
                                          std::vector<mpz_class>(static_cast<size_t>(m.cols())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.entry(i, j);
    return a;
}

// Rank by rational Gaussian elimination with pivot normalization.
inline int rank_gauss(Mat a) {
    if (a.empty())
        return 0;
    size_t n = a.size(), m = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < m && r < n; ++c) {
        size_t p = r;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            continue;
        std::swap(a[p], a[r]);
        mpq_class inv = 1 / a[r][c];
        for (size_t j = c; j < m; ++j)
            a[r][j] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            mpq_class f = a[i][c];
            for (size_t j = c; j < m; ++j)
                a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

// Determinant by rational Gaussian elimination (pivot product with sign).
inline mpz_class det_gauss(const cubespec::BinaryMatrix& m) {
    Mat a = from_bits(m);
    size_t n = a.size();
    mpq_class det = 1;
    int sign = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        det *= a[c][c];
        mpq_class inv = 1 / a[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0)
                continue;
            mpq_class f = a[i][c] * inv;
            for (size_t j = c; j < n; ++j)
                a[i][j] -= f * a[c][j];
        }
    }
    if (sign < 0)
        det = -det;
    // pivots of a 0/1 matrix multiply to an integer determinant
    mpq_class canon = det;
    canon.canonicalize();
    return canon.get_num();
}

// Primitive integer kernel vector of the column span of a d x (d-1) matrix
// with independent columns: eliminate the transpose and back-substitute.
inline std::vector<mpz_class> kernel_primitive(const cubespec::BinaryMatrix& g) {
    int d = g.rows();
    int m = g.cols(); // = d-1
    // Solve A^T x = 0 where A^T is m x d.
    Mat a(static_cast<size_t>(m), std::vector<mpq_class>(static_cast<size_t>(d)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j)
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = g.entry(j, i);
    std::vector<int> pivot_col(static_cast<size_t>(m), -1);
    size_t r = 0;
    for (int c = 0; c < d && r < static_cast<size_t>(m); ++c) {
        size_t p = r;
        while (p < static_cast<size_t>(m) && a[p][static_cast<size_t>(c)] == 0)
            ++p;
        if (p == static_cast<size_t>(m))
            continue;
        std::swap(a[p], a[r]);
        mpq_class inv = 1 / a[r][static_cast<size_t>(c)];
        for (int j = c; j < d; ++j)
            a[r][static_cast<size_t>(j)] *= inv;
        for (size_t i = 0; i < static_cast<size_t>(m); ++i) {
            if (i == r || a[i][static_cast<size_t>(c)] == 0)
                continue;
            mpq_class f = a[i][static_cast<size_t>(c)];
            for (int j = c; j < d; ++j)
                a[i][static_cast<size_t>(j)] -= f * a[r][static_cast<size_t>(j)];
        }
        pivot_col[r] = c;
        ++r;
    }
    // One free column remains; set it to 1 and back-substitute.
    std::vector<bool> is_pivot(static_cast<size_t>(d), false);
    for (size_t i = 0; i < r; ++i)
        is_pivot[static_cast<size_t>(pivot_col[i])] = true;
    int free_col = -1;
    for (int c = 0; c < d; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) {
            free_col = c;
            break;
        }
    std::vector<mpq_class> x(static_cast<size_t>(d), mpq_class(0));
    x[static_cast<size_t>(free_col)] = 1;
    for (size_t i = 0; i < r; ++i)
        x[static_cast<size_t>(pivot_col[i])] = -a[i][static_cast<size_t>(free_col)];
    // Scale to a primitive integer vector with positive first nonzero entry.
    mpz_class lcm = 1;
    for (const auto& v : x)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<mpz_class> z(static_cast<size_t>(d));
    mpz_class gcd = 0;
    for (int i = 0; i < d; ++i) {
        z[static_cast<size_t>(i)] = x[static_cast<size_t>(i)].get_num() * (lcm / x[static_cast<size_t>(i)].get_den());
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), z[static_cast<size_t>(i)].get_mpz_t());
    }
    for (auto& v : z)
        v /= gcd;
    for (const auto& v : z) {
        if (v == 0)
            continue;
        if (v < 0)
            for (auto& w : z)
                w = -w;
        break;
    }
    return z;
}

// Plain subset loop: number of 0/1 points x with <a, x> = 0.
inline std::uint64_t count_points_plain(const std::vector<mpz_class>& a) {
    int d = static_cast<int>(a.size());
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) {
        mpz_class dot = 0;
        for (int i = 0; i < d; ++i)
            if ((x >> i) & 1u)
                dot += a[static_cast<size_t>(i)];
        count += (dot == 0);
    }
    return count;
}

// Full subset-sum tally.
inline std::map<mpz_class, std::uint64_t> level_tally(const std::vector<mpz_class>& a) {
    int d = static_cast<int>(a.size());
    std::map<mpz_class, std::uint64_t> t;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) {
        mpz_class dot = 0;
        for (int i = 0; i < d; ++i)
            if ((x >> i) & 1u)
                dot += a[static_cast<size_t>(i)];
        ++t[dot];
    }
    return t;
}

inline mpz_class binom_pascal(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    std::vector<mpz_class> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j)
            row[static_cast<size_t>(j)] += row[static_cast<size_t>(j) - 1];
    return row[static_cast<size_t>(k)];
}

// Strong rank by mask enumeration over all column subsets with rational rank.
inline int strong_rank_naive(const cubespec::BinaryMatrix& fam) {
    int m = fam.cols();
    for (int k = 1; k <= m; ++k) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            if (__builtin_popcountll(mask) != k)
                continue;
            Mat sub(static_cast<size_t>(fam.rows()));
            for (auto& row : sub)
                row.reserve(static_cast<size_t>(k));
            for (int j = 0; j < m; ++j) {
                if (!((mask >> j) & 1u))
                    continue;
                for (int i = 0; i < fam.rows(); ++i)
                    sub[static_cast<size_t>(i)].push_back(fam.entry(i, j));
            }
            if (rank_gauss(sub) < k)
                return k - 1;
        }
    }
    return m;
}

inline int n_threshold_naive(int d) {
    double raw = d - 3.0 * d / std::log(static_cast<double>(d));
    int f = static_cast<int>(std::floor(raw));
    return f < 1 ? 1 : f;
}

// Structural label straight from the set definitions.
inline std::string classify_naive(const cubespec::BinaryMatrix& m) {
    int d = m.rows();
    int r = rank_gauss(from_bits(m));
    if (r == d)
        return "R";
    int sr = strong_rank_naive(m);
    int nd = n_threshold_naive(d);
    if (sr == 0 || (sr >= 2 && sr <= nd))
        return "S3";
    if (r == d - 1 && sr == 1)
        return "S1";
    if (r == d - 1 && sr > nd)
        return "S2";
    return "S4";
}

} // namespace oracle
