#pragma once

#include <cstdint>
#include <vector>

#include "bmz/bareiss.hpp"
#include "bmz/model.hpp"
#include "bmz/rational.hpp"
#include "bmz/transform.hpp"

// Internals shared by the degree engine and the general-position checker:
// denominator-cleared clone rows cached per collection, in an mpz form and,
// when every entry is small enough, an __int128 mirror for the fast lane.

namespace bmz::detail {

constexpr std::int64_t kI128EntryLimit = std::int64_t(1) << 60;

inline void set_mpz_from_i128(mpz_ptr out, i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    mpz_set_ui(out, static_cast<unsigned long>(u >> 64));
    mpz_mul_2exp(out, out, 64);
    mpz_add_ui(out, out, static_cast<unsigned long>(u));
    if (neg) mpz_neg(out, out);
}

struct CloneCache {
    int d = 0, r = 0, n = 0;  // n = N = (d+1)(r-1)
    bool i128_ok = false;
    int max_bits = 0;  // over cleared entries and denominators

    // Rational clones [point][clone index], each an N-vector.
    std::vector<std::vector<QVector>> clones_q;
    // Cleared rows u = D_j * clone and the positive scale factors D_j.
    std::vector<std::vector<std::vector<Integer>>> clones_z;
    std::vector<Integer> denom_z;
    // __int128 mirror, valid when i128_ok.
    std::vector<std::vector<std::vector<i128>>> clones_i;
    std::vector<i128> denom_i;

    static CloneCache build(const BmzCollection& c, const WBasis& w);
};

struct ClearedRay {
    Integer scale;               // K > 0 with K*dir integral
    std::vector<Integer> dir_z;  // K*dir
    bool i128_ok = false;
    int max_bits = 0;
    std::vector<i128> dir_i;

    static ClearedRay build(const QVector& dir);
};

// Rough forecast of whether an n-dimensional fraction-free elimination with
// `bits`-bit entries will keep its minors inside the wide lane's 123-bit
// storage. The fit checks inside the kernels are the real guard; this only
// avoids paying for doomed attempts (e.g. motion-scan interpolants whose
// denominators are inherently large).
inline bool wide_lane_viable(int n, int bits) { return n * (bits + 1) <= 135; }

}  // namespace bmz::detail
