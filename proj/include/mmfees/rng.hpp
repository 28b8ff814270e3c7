#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmfees {

// Seeded stream wrapper. Uniform doubles are produced from the top 53 bits of
// the engine output so draws are identical across standard-library
// implementations; distributions built on top of this stay portable.
class Rng {
public:
    Rng() = default;

    static Rng from_keys(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        Rng r;
        r.engine_.seed(seq);
        return r;
    }

    // [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // 0 .. n-1
    int uniform_int(int n) {
        int v = static_cast<int>(uniform() * static_cast<double>(n));
        return v < n ? v : n - 1;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_{0x2545f4914f6cdd1dULL};
};

}  // namespace mmfees
