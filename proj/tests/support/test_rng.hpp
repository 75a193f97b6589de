#pragma once

#include <cstdint>

namespace testsupport {

// xorshift64* generator for test inputs; independent of the generators used
// inside the library.
struct TestRng {
    std::uint64_t state;

    explicit TestRng(std::uint64_t seed) : state(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1DULL;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

}  // namespace testsupport
