#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cubespec/errors.hpp"

namespace cubespec {

// Dense integer vector with exact (arbitrary precision) entries.
struct IntegerVector {
    std::vector<mpz_class> e;

    IntegerVector() = default;
    explicit IntegerVector(size_t n) : e(n) {}
    IntegerVector(std::initializer_list<long> init) {
        e.reserve(init.size());
        for (long v : init)
            e.emplace_back(v);
    }

    size_t size() const { return e.size(); }
    mpz_class& operator[](size_t i) { return e[i]; }
    const mpz_class& operator[](size_t i) const { return e[i]; }

    bool is_zero() const {
        for (const auto& v : e)
            if (v != 0)
                return false;
        return true;
    }

    int support() const {
        int s = 0;
        for (const auto& v : e)
            if (v != 0)
                ++s;
        return s;
    }

    // True when every entry fits a signed 64-bit word; fills the sum of
    // absolute values (clamped check against overflow) for fast-path sizing.
    bool fits_int64(std::int64_t& abs_sum) const {
        abs_sum = 0;
        for (const auto& v : e) {
            if (!v.fits_slong_p())
                return false;
            std::int64_t a = v.get_si();
            if (a < 0)
                a = -a;
            if (abs_sum > (std::int64_t{1} << 62) - a)
                return false;
            abs_sum += a;
        }
        return true;
    }

    bool operator==(const IntegerVector& o) const { return e == o.e; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < e.size(); ++i) {
            if (i)
                s += ", ";
            s += e[i].get_str();
        }
        return s + ")";
    }
};

} // namespace cubespec
