#include "enverify/rng.h"

namespace enverify {

Rng::Rng(uint64_t seed, uint64_t index) {
    auto lo = [](uint64_t x) { return static_cast<uint32_t>(x & 0xFFFFFFFFu); };
    auto hi = [](uint64_t x) { return static_cast<uint32_t>(x >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index)};
    engine_.seed(seq);
}

uint64_t Rng::below(uint64_t bound) {
    // Rejection keeps the draw unbiased for bounds that do not divide 2^64.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

}  // namespace enverify
