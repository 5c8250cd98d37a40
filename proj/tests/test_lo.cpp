#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cubespec/lo.hpp"
#include "cubespec/rng.hpp"
#include "oracles.hpp"

using namespace cubespec;

TEST_CASE("binomials match Pascal's triangle", "[lo]") {
    for (int n = 0; n <= 40; n += 4)
        for (int k = 0; k <= n; k += 3)
            CHECK(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)) ==
                  oracle::binom_pascal(n, k));
}

TEST_CASE("concentration bound for the full interval", "[lo]") {
    CHECK(lo_interval_bound(1) == 1);
    CHECK(lo_interval_bound(2) == 2);
    CHECK(lo_interval_bound(3) == 3);
    CHECK(lo_interval_bound(4) == 6);
    CHECK(lo_interval_bound(5) == 10);
    CHECK(lo_interval_bound(30) == 155117520);
    CHECK_THROWS_AS(lo_interval_bound(0), InputError);
}

TEST_CASE("concentration bound with zero entries allowed", "[lo]") {
    CHECK(lo_level_bound(5, 5) == 10);
    CHECK(lo_level_bound(5, 3) == 12);  // C(3,1) * 2^2
    CHECK(lo_level_bound(4, 2) == 8);   // C(2,1) * 2^2
    CHECK(lo_level_bound(8, 1) == 128); // 2^7
    CHECK(lo_level_bound(6, 6) == lo_interval_bound(6));
    CHECK_THROWS_AS(lo_level_bound(4, 0), InputError);
    CHECK_THROWS_AS(lo_level_bound(4, 5), InputError);
}

namespace {

IntegerVector make_vec(std::initializer_list<long> vals) {
    IntegerVector v(vals.size());
    size_t i = 0;
    for (long x : vals)
        v[i++] = x;
    return v;
}

} // namespace

TEST_CASE("most frequent subset-sum value on fixed vectors", "[lo]") {
    LevelMultiplicity a = max_level_multiplicity(make_vec({1, 1}));
    CHECK(a.value == 1);
    CHECK(a.multiplicity == 2);

    LevelMultiplicity b = max_level_multiplicity(make_vec({1, 1, 0, 0}));
    CHECK(b.value == 1);
    CHECK(b.multiplicity == 8);

    LevelMultiplicity c = max_level_multiplicity(make_vec({1, -1}));
    CHECK(c.value == 0);
    CHECK(c.multiplicity == 2);

    LevelMultiplicity e = max_level_multiplicity(make_vec({1, 2, 3}));
    CHECK(e.value == 3);
    CHECK(e.multiplicity == 2);

    CHECK_THROWS_AS(max_level_multiplicity(IntegerVector(25)), TooExpensive);
}

TEST_CASE("most frequent subset-sum value matches the tally oracle", "[lo]") {
    SplitMix64 rng(11);
    for (int t = 0; t < 150; ++t) {
        int n = 1 + static_cast<int>(rng.next() % 12);
        IntegerVector a(static_cast<size_t>(n));
        std::vector<mpz_class> plain(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            long v = static_cast<long>(rng.next() % 11) - 5;
            a[static_cast<size_t>(i)] = v;
            plain[static_cast<size_t>(i)] = v;
        }
        auto tally = oracle::level_tally(plain);
        std::uint64_t best = 0;
        mpz_class best_value;
        for (const auto& [value, mult] : tally) {
            if (mult > best) {
                best = mult;
                best_value = value;
            }
        }
        LevelMultiplicity got = max_level_multiplicity(a);
        CHECK(got.multiplicity == best);
        CHECK(got.value == best_value);
    }
}

TEST_CASE("multiplicity never exceeds the concentration bound", "[lo]") {
    SplitMix64 rng(12);
    for (int t = 0; t < 400; ++t) {
        int n = 1 + static_cast<int>(rng.next() % 14);
        IntegerVector a(static_cast<size_t>(n));
        int nonzero = 0;
        for (int i = 0; i < n; ++i) {
            long v = static_cast<long>(rng.next() % 9) - 4;
            a[static_cast<size_t>(i)] = v;
            nonzero += v != 0;
        }
        if (nonzero == 0)
            continue;
        LevelMultiplicity got = max_level_multiplicity(a);
        CHECK(mpz_class(got.multiplicity) <= lo_level_bound(n, nonzero));
    }
}

TEST_CASE("the bound is attained by repeated ones padded with zeros", "[lo]") {
    for (auto [n, t] : std::initializer_list<std::pair<int, int>>{
             {6, 6}, {6, 3}, {6, 1}, {10, 10}, {10, 4}, {16, 9}, {20, 10}}) {
        IntegerVector a(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            a[static_cast<size_t>(i)] = i < t ? 1 : 0;
        LevelMultiplicity got = max_level_multiplicity(a);
        INFO("n = " << n << ", t = " << t);
        CHECK(mpz_class(got.multiplicity) == lo_level_bound(n, t));
        CHECK(got.value == t / 2);
    }
}

TEST_CASE("the term sum is empty below 29 and nonempty from there", "[lo]") {
    for (int d : {3, 10, 20, 28}) {
        LemmaSumResult r = lemma_sum(d);
        INFO("d = " << d);
        CHECK(r.empty);
        CHECK(r.holds);
        CHECK(r.k_hi < 3);
        CHECK(r.value == 0);
    }
    LemmaSumResult r29 = lemma_sum(29);
    CHECK_FALSE(r29.empty);
    CHECK(r29.k_hi == 3);
    CHECK_FALSE(r29.holds);
    CHECK(r29.largest_term_k == 3);
    // single term: C(29,3) C(29,4) (C(3,1)/2^3)^26
    mpq_class expect(mpz_class("86786154") * mpz_class("2541865828329"),
                     mpz_class(1) << 78);
    expect.canonicalize();
    CHECK(r29.value == expect);
}

TEST_CASE("exact and log-domain term sums agree", "[lo]") {
    for (int d : {29, 50, 100, 300}) {
        LemmaSumResult a = lemma_sum_exact(d);
        LemmaSumResult b = lemma_sum_log(d);
        INFO("d = " << d);
        CHECK(a.exact);
        CHECK_FALSE(b.exact);
        CHECK(a.holds == b.holds);
        CHECK(a.k_hi == b.k_hi);
        CHECK(a.largest_term_k == b.largest_term_k);
        CHECK(a.per_term_all_hold == b.per_term_all_hold);
        CHECK(a.first_violation_k == b.first_violation_k);
        CHECK(a.violation_count == b.violation_count);
        CHECK(std::fabs(a.log2_value - b.log2_value) < 1e-6);
        CHECK(std::fabs(a.largest_term_log2 - b.largest_term_log2) < 1e-6);
    }
}

TEST_CASE("term sum at d = 100: the comparison against 2^-d fails honestly", "[lo]") {
    LemmaSumResult r = lemma_sum(100);
    CHECK(r.exact);
    CHECK_FALSE(r.empty);
    CHECK(r.k_hi == 34);
    CHECK_FALSE(r.holds);
    // the sum is about 3.995e-4, log2 about -11.3, nowhere near -100
    CHECK(r.log2_value > -12.0);
    CHECK(r.log2_value < -11.0);
    CHECK(r.largest_term_k == 34);
    CHECK_FALSE(r.per_term_all_hold);
    CHECK(r.first_violation_k == 3);
    CHECK(r.violation_count >= 1);
    CHECK(r.violation_count <= 32);
}

TEST_CASE("dispatch switches to the log-domain path for large d", "[lo]") {
    CHECK(lemma_sum(1200).exact);
    CHECK_FALSE(lemma_sum(1201).exact);
    CHECK_THROWS_AS(lemma_sum_exact(5001), TooExpensive);
    CHECK_THROWS_AS(lemma_sum(2), InputError);
    CHECK_THROWS_AS(lemma_sum_exact(2), InputError);
}

TEST_CASE("scan over small dimensions and the crossover estimate", "[lo]") {
    LemmaScan s = lemma_scan(3, 60);
    CHECK(s.from == 3);
    CHECK(s.to == 60);
    CHECK(s.rows.size() == 58);
    for (const auto& row : s.rows) {
        INFO("d = " << row.d);
        CHECK(row.empty == (row.d <= 28));
        CHECK(row.holds == row.empty); // no genuine hold this low
        if (!row.empty)
            CHECK(row.log2_gap > 0);
    }
    REQUIRE(s.smallest_trivial_hold.has_value());
    CHECK(*s.smallest_trivial_hold == 3);
    CHECK_FALSE(s.smallest_nonempty_hold.has_value());
    CHECK(s.estimate_found);
    CHECK(s.estimated_crossover > 100000000ull);
    CHECK(s.estimated_crossover < 10000000000ull);
    CHECK(s.estimate_log2_margin <= 0.0);
}

TEST_CASE("reference decay curves", "[lo]") {
    ReferenceCurves c = reference_curves(10);
    CHECK(c.conjecture == 100.0 / 1024.0);
    CHECK(c.pair_collision == 100.0 / 2048.0);
    CHECK(std::fabs(c.kks - std::pow(0.999, 10)) < 1e-15);
    CHECK(std::fabs(c.tao_vu - 59049.0 / 1048576.0) < 1e-15);
    CHECK_THROWS_AS(reference_curves(0), InputError);
}
