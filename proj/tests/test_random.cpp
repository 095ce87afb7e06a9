#include <gtest/gtest.h>

#include "hcsck/random.hpp"

using hcsck::CounterRng;

TEST(Random, SplitmixReferenceValue) {
    // first output of the reference splitmix64 generator seeded with 0
    EXPECT_EQ(hcsck::splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Random, CounterStreamIsReproducible) {
    CounterRng r(7, 3);
    EXPECT_EQ(r.next_u64(), 0x56083fc5695d6517ULL);
    EXPECT_EQ(r.next_u64(), 0x441a49995dcbac40ULL);
    EXPECT_EQ(r.next_u64(), 0x654438aaac5c57b4ULL);
    EXPECT_EQ(r.counter(), 3u);
}

TEST(Random, StreamsDiffer) {
    CounterRng a(7, 0), b(7, 1), c(8, 0);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(Random, UniformRange) {
    CounterRng r(11);
    double lo = 1, hi = 0, sum = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 20000, 0.5, 0.01);
    const double v = r.uniform(-3.0, -1.0);
    EXPECT_GE(v, -3.0);
    EXPECT_LT(v, -1.0);
}
