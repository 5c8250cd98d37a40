#pragma once
#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "cubespec/intvec.hpp"
#include "cubespec/structure.hpp"

// Littlewood-Offord style bounds on subset-sum concentration, and the
// combinatorial sum
//
//     sum_{k=3}^{N(d)}  C(d,k) C(d,k+1) ( C(k,floor(k/2)) / 2^k )^(d-k)
//
// with N(d) = floor(d - 3d/ln d), evaluated exactly as a rational and in
// high-precision log-domain arithmetic.  The comparison against 2^-d and the
// per-term bound 1/(d 2^d) are *reported*, not assumed: both are asymptotic
// statements, and direct evaluation shows where they actually start to hold.

namespace cubespec {

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Largest count of subset sums of n nonzero reals that a point (equivalently,
// any open interval of length below the smallest |a_i|) can capture.
inline mpz_class lo_interval_bound(int n) {
    if (n < 1)
        throw InputError("interval bound needs n >= 1");
    return binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(n / 2));
}

// Refinement when only t of the n entries are required nonzero: the other
// n-t entries can at worst double the count each.
inline mpz_class lo_level_bound(int n, int t) {
    if (t < 1 || t > n)
        throw InputError("level bound needs 1 <= t <= n");
    mpz_class r = binomial(static_cast<unsigned long>(t), static_cast<unsigned long>(t / 2));
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(n - t));
    return r;
}

struct LevelMultiplicity {
    mpz_class value;            // a most frequent subset-sum value (smallest such)
    std::uint64_t multiplicity; // how many of the 2^n subsets reach it
};

// Exhaustive most-frequent subset sum.  2^n enumeration, so guarded.
inline LevelMultiplicity max_level_multiplicity(const IntegerVector& a) {
    int n = static_cast<int>(a.size());
    if (n < 1)
        throw InputError("need at least one entry");
    if (n > 24)
        throw TooExpensive("subset-sum tally over " + std::to_string(n) + " entries exceeds the n <= 24 guard");
    std::int64_t abs_sum = 0;
    if (a.fits_int64(abs_sum)) {
        std::vector<std::int64_t> sums(size_t{1} << n);
        sums[0] = 0;
        for (int b = 0; b < n; ++b) {
            size_t sz = size_t{1} << b;
            std::int64_t v = a[static_cast<size_t>(b)].get_si();
            for (size_t i = 0; i < sz; ++i)
                sums[sz + i] = sums[i] + v;
        }
        std::sort(sums.begin(), sums.end());
        LevelMultiplicity best{mpz_class(static_cast<long>(sums[0])), 1};
        std::uint64_t run = 1;
        for (size_t i = 1; i < sums.size(); ++i) {
            if (sums[i] == sums[i - 1]) {
                ++run;
            } else {
                run = 1;
            }
            if (run > best.multiplicity) {
                best.multiplicity = run;
                best.value = mpz_class(static_cast<long>(sums[i]));
            }
        }
        return best;
    }
    std::map<mpz_class, std::uint64_t> tally;
    std::vector<mpz_class> sums(size_t{1} << n);
    sums[0] = 0;
    for (int b = 0; b < n; ++b) {
        size_t sz = size_t{1} << b;
        for (size_t i = 0; i < sz; ++i)
            sums[sz + i] = sums[i] + a[static_cast<size_t>(b)];
    }
    for (const auto& s : sums)
        ++tally[s];
    LevelMultiplicity best{sums[0], 0};
    for (const auto& [v, c] : tally)
        if (c > best.multiplicity) { // map order makes ties resolve to the smallest value
            best.multiplicity = c;
            best.value = v;
        }
    return best;
}

// --------------------------------------------------------------- lemma -----

inline constexpr mpfr_prec_t kLemmaPrec = 192; // ~57 decimal digits

// Minimal RAII wrapper so mpfr values can live in containers.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec = kLemmaPrec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    ~Mpfr() { mpfr_clear(v_); }
    mpfr_ptr p() { return v_; }
    mpfr_srcptr p() const { return v_; }

  private:
    mpfr_t v_;
};

namespace detail {

// ln(n!) for n = 0..limit, built once per scan.
class LnFactTable {
  public:
    explicit LnFactTable(int limit) : t_() {
        t_.reserve(static_cast<size_t>(limit) + 1);
        t_.emplace_back(); // ln 0! = 0
        Mpfr ln_i;
        for (int i = 1; i <= limit; ++i) {
            mpfr_set_ui(ln_i.p(), static_cast<unsigned long>(i), MPFR_RNDN);
            mpfr_log(ln_i.p(), ln_i.p(), MPFR_RNDN);
            Mpfr next;
            mpfr_add(next.p(), t_.back().p(), ln_i.p(), MPFR_RNDN);
            t_.push_back(std::move(next));
        }
    }
    mpfr_srcptr operator[](int i) const { return t_[static_cast<size_t>(i)].p(); }

    // out = ln C(n, k)
    void ln_binom(Mpfr& out, int n, int k) const {
        mpfr_sub(out.p(), (*this)[n], (*this)[k], MPFR_RNDN);
        mpfr_sub(out.p(), out.p(), (*this)[n - k], MPFR_RNDN);
    }

  private:
    std::vector<Mpfr> t_;
};

inline double mpq_log2(const mpq_class& q) {
    if (q == 0)
        return -std::numeric_limits<double>::infinity();
    Mpfr t;
    mpfr_set_q(t.p(), q.get_mpq_t(), MPFR_RNDN);
    mpfr_log2(t.p(), t.p(), MPFR_RNDN);
    return mpfr_get_d(t.p(), MPFR_RNDN);
}

} // namespace detail

struct LemmaSumResult {
    int d;
    int k_hi;                // N(d); terms run over k = 3..k_hi
    bool empty;              // k_hi < 3: the sum is empty (and trivially holds)
    bool exact;              // true when `value` below is the exact rational
    mpq_class value;         // exact sum (exact path only)
    double log2_value;       // log2 of the sum (-inf when empty)
    bool holds;              // sum <= 2^-d
    int largest_term_k;      // -1 when empty
    double largest_term_log2;
    bool per_term_all_hold;  // every term <= 1/(d 2^d)
    int first_violation_k;   // -1 when none
    int violation_count;
};

// Exact rational evaluation.  Cost grows quickly (terms carry ~k(d-k) bits),
// hence the guard; the log-domain path covers larger d.
inline LemmaSumResult lemma_sum_exact(int d) {
    if (d < 3)
        throw InputError("lemma sum needs d >= 3");
    if (d > 5000)
        throw TooExpensive("exact lemma sum beyond d = 5000; use the log-domain evaluation");
    LemmaSumResult r;
    r.d = d;
    r.k_hi = n_threshold(d).n_d;
    r.empty = r.k_hi < 3;
    r.exact = true;
    r.value = 0;
    r.largest_term_k = -1;
    r.largest_term_log2 = -std::numeric_limits<double>::infinity();
    r.per_term_all_hold = true;
    r.first_violation_k = -1;
    r.violation_count = 0;

    mpz_class one = 1;
    mpq_class per_term_bound(one, mpz_class(static_cast<long>(d)) << d); // 1 / (d 2^d)
    mpq_class largest = 0;
    for (int k = 3; k <= r.k_hi; ++k) {
        mpz_class num = binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        num *= binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(k + 1));
        mpz_class central = binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(k / 2));
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), central.get_mpz_t(), static_cast<unsigned long>(d - k));
        num *= pw;
        mpz_class den = one << (static_cast<unsigned long>(k) * static_cast<unsigned long>(d - k));
        mpq_class term(num, den);
        term.canonicalize();
        r.value += term;
        if (term > largest) {
            largest = term;
            r.largest_term_k = k;
        }
        if (term > per_term_bound) {
            r.per_term_all_hold = false;
            if (r.first_violation_k < 0)
                r.first_violation_k = k;
            ++r.violation_count;
        }
    }
    mpq_class bound(one, one << static_cast<unsigned long>(d));
    r.holds = r.value <= bound;
    r.log2_value = detail::mpq_log2(r.value);
    if (r.largest_term_k >= 0)
        r.largest_term_log2 = detail::mpq_log2(largest);
    return r;
}

// Log-domain evaluation at kLemmaPrec bits.  Terms are reconstructed with
// mpfr_exp, so the sum itself is a high-precision float rather than a
// rational; comparisons here sit far from equality, which the exact path
// cross-checks at feasible sizes.
inline LemmaSumResult lemma_sum_log(int d, const detail::LnFactTable& lf) {
    if (d < 3)
        throw InputError("lemma sum needs d >= 3");
    LemmaSumResult r;
    r.d = d;
    r.k_hi = n_threshold(d).n_d;
    r.empty = r.k_hi < 3;
    r.exact = false;
    r.value = 0;
    r.log2_value = -std::numeric_limits<double>::infinity();
    r.largest_term_k = -1;
    r.largest_term_log2 = -std::numeric_limits<double>::infinity();
    r.per_term_all_hold = true;
    r.first_violation_k = -1;
    r.violation_count = 0;

    Mpfr sum, ln_term, t, ln2, per_term_ln, best_ln;
    mpfr_set_zero(sum.p(), 1);
    mpfr_const_log2(ln2.p(), MPFR_RNDN);
    // ln(1/(d 2^d)) = -(ln d + d ln 2)
    mpfr_mul_ui(per_term_ln.p(), ln2.p(), static_cast<unsigned long>(d), MPFR_RNDN);
    mpfr_set_ui(t.p(), static_cast<unsigned long>(d), MPFR_RNDN);
    mpfr_log(t.p(), t.p(), MPFR_RNDN);
    mpfr_add(per_term_ln.p(), per_term_ln.p(), t.p(), MPFR_RNDN);
    mpfr_neg(per_term_ln.p(), per_term_ln.p(), MPFR_RNDN);
    mpfr_set_inf(best_ln.p(), -1);

    Mpfr part;
    for (int k = 3; k <= r.k_hi; ++k) {
        lf.ln_binom(ln_term, d, k);
        lf.ln_binom(part, d, k + 1);
        mpfr_add(ln_term.p(), ln_term.p(), part.p(), MPFR_RNDN);
        lf.ln_binom(part, k, k / 2);
        mpfr_mul_ui(t.p(), ln2.p(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_sub(part.p(), part.p(), t.p(), MPFR_RNDN); // ln(C(k,k/2)/2^k)
        mpfr_mul_ui(part.p(), part.p(), static_cast<unsigned long>(d - k), MPFR_RNDN);
        mpfr_add(ln_term.p(), ln_term.p(), part.p(), MPFR_RNDN);

        if (mpfr_cmp(ln_term.p(), best_ln.p()) > 0) {
            mpfr_set(best_ln.p(), ln_term.p(), MPFR_RNDN);
            r.largest_term_k = k;
        }
        if (mpfr_cmp(ln_term.p(), per_term_ln.p()) > 0) {
            r.per_term_all_hold = false;
            if (r.first_violation_k < 0)
                r.first_violation_k = k;
            ++r.violation_count;
        }
        mpfr_exp(part.p(), ln_term.p(), MPFR_RNDN);
        mpfr_add(sum.p(), sum.p(), part.p(), MPFR_RNDN);
    }
    if (!r.empty) {
        mpfr_log2(t.p(), sum.p(), MPFR_RNDN);
        r.log2_value = mpfr_get_d(t.p(), MPFR_RNDN);
        mpfr_div(best_ln.p(), best_ln.p(), ln2.p(), MPFR_RNDN);
        r.largest_term_log2 = mpfr_get_d(best_ln.p(), MPFR_RNDN);
        mpfr_set_ui_2exp(t.p(), 1, -static_cast<mpfr_exp_t>(d), MPFR_RNDN);
        r.holds = mpfr_cmp(sum.p(), t.p()) <= 0;
    } else {
        r.holds = true; // empty sum is 0
    }
    return r;
}

inline LemmaSumResult lemma_sum_log(int d) {
    if (d > 100000)
        throw TooExpensive("log-domain lemma sum beyond d = 100000");
    detail::LnFactTable lf(d + 1);
    return lemma_sum_log(d, lf);
}

// Exact when affordable, log-domain beyond.
inline LemmaSumResult lemma_sum(int d) {
    return d <= 1200 ? lemma_sum_exact(d) : lemma_sum_log(d);
}

// ---------------------------------------------------------------- scan -----

struct LemmaScanRow {
    int d;
    bool empty;
    bool holds;
    double log2_value; // -inf for empty
    double log2_gap;   // log2(sum) - (-d); negative means the bound holds
};

// Where does the inequality actually start?  The scan reports per-d outcomes
// plus a far-range estimate obtained from the sufficient condition
// (number of terms) * (largest term) <= 2^-d with Stirling-based term values.
struct LemmaScan {
    int from, to;
    std::vector<LemmaScanRow> rows;
    std::optional<int> smallest_trivial_hold;  // empty sum (holds as 0 <= 2^-d)
    std::optional<int> smallest_nonempty_hold; // genuine inequality within range
    bool estimate_found;
    std::uint64_t estimated_crossover; // estimate of the first d where it holds
    double estimate_log2_margin;
};

namespace detail {

inline long double ln_fact_ld(std::uint64_t n) { return lgammal(static_cast<long double>(n) + 1.0L); }

inline long double ln_binom_ld(std::uint64_t n, std::uint64_t k) {
    return ln_fact_ld(n) - ln_fact_ld(k) - ln_fact_ld(n - k);
}

inline long double log2_term_ld(std::uint64_t d, std::uint64_t k) {
    const long double ln2 = 0.6931471805599453094172321214581766L;
    long double v = ln_binom_ld(d, k) + ln_binom_ld(d, k + 1) +
                    static_cast<long double>(d - k) * (ln_binom_ld(k, k / 2) - static_cast<long double>(k) * ln2);
    return v / ln2;
}

inline std::uint64_t n_threshold_u64(std::uint64_t d) {
    long double raw = static_cast<long double>(d) - 3.0L * static_cast<long double>(d) / logl(static_cast<long double>(d));
    if (raw < 1.0L)
        return 1;
    return static_cast<std::uint64_t>(floorl(raw));
}

// max_k log2(term) by iterative grid refinement (the term profile is smooth
// in k, so a coarse grid plus local refinement finds the peak).
inline long double max_log2_term_ld(std::uint64_t d) {
    std::uint64_t lo = 3, hi = n_threshold_u64(d);
    if (hi < lo)
        return -std::numeric_limits<long double>::infinity();
    while (hi - lo > 4096) {
        const int grid = 1024;
        long double best = -std::numeric_limits<long double>::infinity();
        std::uint64_t best_k = lo;
        for (int i = 0; i <= grid; ++i) {
            std::uint64_t k = lo + (hi - lo) * static_cast<std::uint64_t>(i) / grid;
            long double v = log2_term_ld(d, k);
            if (v > best) {
                best = v;
                best_k = k;
            }
        }
        std::uint64_t step = (hi - lo) / grid;
        lo = best_k > lo + 2 * step ? best_k - 2 * step : lo;
        hi = best_k + 2 * step < hi ? best_k + 2 * step : hi;
    }
    long double best = -std::numeric_limits<long double>::infinity();
    for (std::uint64_t k = lo; k <= hi; ++k) {
        long double v = log2_term_ld(d, k);
        if (v > best)
            best = v;
    }
    return best;
}

// Sufficient condition: N(d) * max_term <= 2^-d.
inline long double log2_upper_margin(std::uint64_t d) {
    std::uint64_t n = n_threshold_u64(d);
    if (n < 3)
        return -1.0L; // empty: holds
    long double count = static_cast<long double>(n - 2);
    return max_log2_term_ld(d) + log2l(count) + static_cast<long double>(d);
}

} // namespace detail

// Bisection for the first d where the sufficient condition holds.  An
// estimate: long-double Stirling arithmetic, and the condition is only
// sufficient, so the true crossover can be somewhat smaller.
inline void lemma_crossover_estimate(bool& found, std::uint64_t& d_first, double& margin) {
    std::uint64_t lo = 29;                  // first nonempty sum
    std::uint64_t hi = std::uint64_t{1} << 40;
    if (detail::log2_upper_margin(hi) > 0) {
        found = false;
        d_first = 0;
        margin = 0;
        return;
    }
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (detail::log2_upper_margin(mid) <= 0)
            hi = mid;
        else
            lo = mid;
    }
    found = true;
    d_first = hi;
    margin = static_cast<double>(detail::log2_upper_margin(hi));
}

inline LemmaScan lemma_scan(int from, int to) {
    if (from < 3)
        from = 3;
    if (to < from)
        throw InputError("empty scan range");
    if (to > 100000)
        throw TooExpensive("scan beyond d = 100000");
    LemmaScan scan;
    scan.from = from;
    scan.to = to;
    detail::LnFactTable lf(to + 1);
    for (int d = from; d <= to; ++d) {
        LemmaSumResult r = lemma_sum_log(d, lf);
        LemmaScanRow row;
        row.d = d;
        row.empty = r.empty;
        row.holds = r.holds;
        row.log2_value = r.log2_value;
        row.log2_gap = r.empty ? -std::numeric_limits<double>::infinity()
                               : r.log2_value + static_cast<double>(d);
        scan.rows.push_back(row);
        if (r.empty && !scan.smallest_trivial_hold)
            scan.smallest_trivial_hold = d;
        if (!r.empty && r.holds && !scan.smallest_nonempty_hold)
            scan.smallest_nonempty_hold = d;
    }
    lemma_crossover_estimate(scan.estimate_found, scan.estimated_crossover, scan.estimate_log2_margin);
    return scan;
}

// ------------------------------------------------------ reference curves ---

struct ReferenceCurves {
    double conjecture;     // d^2 / 2^d
    double kks;            // (1 - 0.001)^d
    double tao_vu;         // (3/4)^d
    double pair_collision; // d^2 / 2^(d+1)
};

inline ReferenceCurves reference_curves(int d) {
    if (d < 1)
        throw InputError("curves need d >= 1");
    ReferenceCurves c;
    c.conjecture = std::ldexp(static_cast<double>(d) * d, -d);
    c.kks = std::pow(0.999, d);
    c.tao_vu = std::pow(0.75, d);
    c.pair_collision = std::ldexp(static_cast<double>(d) * d, -(d + 1));
    return c;
}

} // namespace cubespec
