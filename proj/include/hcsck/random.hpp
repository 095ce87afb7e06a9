#pragma once

#include <cstdint>

namespace hcsck {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based stream: draw i of stream s under seed k is
// splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15), key = splitmix64(k ^ splitmix64(s)).
// Any language with 64-bit wrapping arithmetic reproduces it.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    // 53-bit uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hcsck
