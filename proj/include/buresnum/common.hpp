#pragma once
// Shared small utilities: compensated summation, hashing, a deterministic
// splittable RNG, and the library version string.

#include <cstdint>
#include <cmath>
#include <string>
#include <string_view>

namespace buresnum {

inline constexpr const char* kCodeVersion = "buresnum 0.1.0";

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ----------------------------------------------------------------------
// Neumaier compensated accumulator.  Running sums over millions of terms
// keep ~1 ulp accuracy regardless of term ordering or magnitude spread.
// ----------------------------------------------------------------------
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// ----------------------------------------------------------------------
// FNV-1a 64-bit over bytes.  Used for config digests and result digests.
// ----------------------------------------------------------------------
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

// ----------------------------------------------------------------------
// splitmix64: tiny deterministic generator for shifts/scrambles/tests.
// ----------------------------------------------------------------------
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

}  // namespace buresnum
