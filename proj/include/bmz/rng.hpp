#pragma once

#include <cstdint>

// Deterministic RNG used everywhere a seed appears in a contract. SplitMix64
// is stable across platforms and standard libraries, unlike the std::
// distributions, so seeded runs reproduce bit-for-bit.

namespace bmz {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased value in [0, n) via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Inclusive range.
    long long int_in(long long lo, long long hi) {
        return lo + static_cast<long long>(
                        below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Independent stream for e.g. per-trial seeds derived from a master seed.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        Rng r(master ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
        return r.next_u64();
    }

  private:
    std::uint64_t state_;
};

}  // namespace bmz
