#pragma once
#include <cstdint>
#include <span>

#include "cubespec/bitmatrix.hpp"

namespace cubespec {

// splitmix64 finalizer.  Fast, well mixed, and trivially portable; not
// cryptographic, which is fine for Monte Carlo sampling.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Counter-based stream: the generator state for sample `index` under `seed`
// is derived purely from (seed, index), so sample i produces the same draws
// no matter how the index range is split across worker threads.
struct SampleStream {
    SplitMix64 gen;

    SampleStream(std::uint64_t seed, std::uint64_t index)
        : gen{mix64(mix64(seed) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL))} {}

    std::uint64_t next() { return gen.next(); }

    // n uniform random bits, n in 1..64.
    std::uint64_t bits(int n) {
        std::uint64_t v = gen.next();
        return n >= 64 ? v : v & ((std::uint64_t{1} << n) - 1);
    }
};

// Fills m columns of d fair random bits each; one next() call per column, so
// a stream at a given (seed, index) always yields the same matrix.
inline void random_columns(SampleStream& s, int d, int m, std::uint64_t* out) {
    for (int j = 0; j < m; ++j)
        out[j] = s.bits(d);
}

inline BinaryMatrix random_matrix(int d, SampleStream& s) {
    BinaryMatrix m(d, d);
    for (int j = 0; j < d; ++j) {
        std::uint64_t c = s.bits(d);
        for (int i = 0; i < d; ++i)
            m.set(i, j, static_cast<int>((c >> i) & 1u));
    }
    return m;
}

} // namespace cubespec
