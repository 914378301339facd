#pragma once

#include <cstdint>
#include <random>

#include "shadowlab/linalg.hpp"

namespace shadowlab {

// Deterministic integer stream. Uses raw mt19937_64 output so results do not
// depend on the standard library's distribution implementations.
class GridStream {
public:
    explicit GridStream(std::uint64_t seed, std::uint64_t salt = 0)
        : engine_(seed ^ (salt * 0x9E3779B97F4A7C15ULL)) {}

    long integer(long bound) {
        auto span = static_cast<std::uint64_t>(2 * bound + 1);
        return static_cast<long>(engine_() % span) - bound;
    }
    std::uint64_t next() { return engine_(); }

    Vec vector(std::size_t n, long bound) {
        Vec v(n);
        for (auto& x : v) x = Rat(integer(bound));
        return v;
    }
    Vec nonzero_vector(std::size_t n, long bound) {
        for (;;) {
            Vec v = vector(n, bound);
            if (!is_zero(v)) return v;
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace shadowlab
