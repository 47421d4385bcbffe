#include "bmz/bareiss.hpp"

namespace bmz::detail {

namespace {

inline bool mul_ck(i128 x, i128 y, i128* out) {
    return __builtin_mul_overflow(x, y, out);
}
inline bool sub_ck(i128 x, i128 y, i128* out) {
    return __builtin_sub_overflow(x, y, out);
}

// One Bareiss update of row i against pivot row k, columns (k+1..cols).
// m[i][j] <- (m[i][j]*piv - m[i][k]*m[k][j]) / prev, exactly. The division
// is skipped on the first step, where prev is 1; __int128 division is slow.
inline bool update_row_i128(IMat& m, int i, int k, i128 piv, i128 prev) {
    const i128 mik = m.at(i, k);
    const bool divide = prev != 1;
    for (int j = k + 1; j < m.cols; ++j) {
        i128 t1, t2;
        if (mul_ck(m.at(i, j), piv, &t1)) return false;
        if (mul_ck(mik, m.at(k, j), &t2)) return false;
        if (sub_ck(t1, t2, &t1)) return false;
        m.at(i, j) = divide ? t1 / prev : t1;
    }
    m.at(i, k) = 0;
    return true;
}

inline void update_row_mpz(ZMat& m, int i, int k, const Integer& piv,
                           const Integer& prev, Integer& t1, Integer& t2) {
    const Integer& mik_const = m.at(i, k);
    mpz_srcptr mik = mik_const.get_mpz_t();
    const bool divide = mpz_cmp_ui(prev.get_mpz_t(), 1) != 0;
    for (int j = k + 1; j < m.cols; ++j) {
        mpz_mul(t1.get_mpz_t(), m.at(i, j).get_mpz_t(), piv.get_mpz_t());
        mpz_mul(t2.get_mpz_t(), mik, m.at(k, j).get_mpz_t());
        mpz_sub(t1.get_mpz_t(), t1.get_mpz_t(), t2.get_mpz_t());
        if (divide)
            mpz_divexact(m.at(i, j).get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
        else
            mpz_set(m.at(i, j).get_mpz_t(), t1.get_mpz_t());
    }
    m.at(i, k) = 0;
}

// ---------------------------------------------------------------------------
// 256-bit helpers for the wide lane. Values are sign + 4x64 magnitude; a
// product of two 128-bit magnitudes always fits, so the Bareiss numerator
// t = a*piv - b*c never overflows. Storage writebacks are capped at
// kWideStoreBits so back-substitution sums stay below 2^256.
// ---------------------------------------------------------------------------

constexpr int kWideStoreBits = 124;

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct U256 {
    u64 w[4];
};

inline u128 abs_u128(i128 v) {
    return v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v);
}

inline U256 mul_full(u128 a, u128 b) {
    const u64 a0 = static_cast<u64>(a), a1 = static_cast<u64>(a >> 64);
    const u64 b0 = static_cast<u64>(b), b1 = static_cast<u64>(b >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    U256 out;
    out.w[0] = static_cast<u64>(p00);
    const u128 mid = (p00 >> 64) + static_cast<u64>(p01) + static_cast<u64>(p10);
    out.w[1] = static_cast<u64>(mid);
    const u128 hi = (mid >> 64) + (p01 >> 64) + (p10 >> 64) + p11;
    out.w[2] = static_cast<u64>(hi);
    out.w[3] = static_cast<u64>(hi >> 64);
    return out;
}

inline int cmp_u256(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i] != b.w[i]) return a.w[i] < b.w[i] ? -1 : 1;
    }
    return 0;
}

inline void sub_u256(U256& a, const U256& b) {  // a -= b, requires a >= b
    u128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        const u128 rhs = static_cast<u128>(b.w[i]) + borrow;
        const u128 lhs = a.w[i];
        a.w[i] = static_cast<u64>(lhs - rhs);
        borrow = lhs < rhs ? 1 : 0;
    }
}

inline void add_u256(U256& a, const U256& b) {
    u128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        const u128 s = static_cast<u128>(a.w[i]) + b.w[i] + carry;
        a.w[i] = static_cast<u64>(s);
        carry = s >> 64;
    }
}

inline bool is_zero_u256(const U256& a) {
    return (a.w[0] | a.w[1] | a.w[2] | a.w[3]) == 0;
}

inline void shr_u256(U256& a, int s) {
    if (s == 0) return;
    const int limbs = s / 64, bits = s % 64;
    for (int i = 0; i < 4; ++i) {
        const int src = i + limbs;
        u64 lo = src < 4 ? a.w[src] : 0;
        if (bits != 0) {
            const u64 hi = src + 1 < 4 ? a.w[src + 1] : 0;
            lo = (lo >> bits) | (hi << (64 - bits));
        }
        a.w[i] = lo;
    }
}

inline u128 low_u128(const U256& a) {
    return (static_cast<u128>(a.w[1]) << 64) | a.w[0];
}

struct S256 {
    int sign = 0;
    U256 mag{};
};

inline S256 mul_s(i128 a, i128 b) {
    S256 out;
    const int s = sign_i128(a) * sign_i128(b);
    out.sign = s;
    if (s != 0) out.mag = mul_full(abs_u128(a), abs_u128(b));
    return out;
}

inline void sub_s(S256& acc, const S256& term) {  // acc -= term
    if (term.sign == 0) return;
    if (acc.sign == 0) {
        acc.sign = -term.sign;
        acc.mag = term.mag;
        return;
    }
    if (acc.sign != term.sign) {  // magnitudes add
        add_u256(acc.mag, term.mag);
        return;
    }
    const int c = cmp_u256(acc.mag, term.mag);
    if (c == 0) {
        acc.sign = 0;
        acc.mag = U256{};
    } else if (c > 0) {
        sub_u256(acc.mag, term.mag);
    } else {
        U256 tmp = term.mag;
        sub_u256(tmp, acc.mag);
        acc.mag = tmp;
        acc.sign = -acc.sign;
    }
}

inline u128 inverse_mod_2_128(u128 odd) {
    u128 x = odd;  // correct to 3 bits
    for (int it = 0; it < 6; ++it) x *= 2 - odd * x;
    return x;
}

inline int ctz_u128(u128 v) {
    const u64 lo = static_cast<u64>(v);
    if (lo != 0) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<u64>(v >> 64));
}

struct WideDivisor {
    int sign = 1;
    int shift = 0;
    u128 odd = 1;
    u128 inv = 1;
    bool trivial = true;  // divisor is +-1

    static WideDivisor make(i128 d) {
        WideDivisor out;
        out.sign = sign_i128(d);
        const u128 mag = abs_u128(d);
        out.trivial = mag == 1;
        if (!out.trivial) {
            out.shift = ctz_u128(mag);
            out.odd = mag >> out.shift;
            out.inv = inverse_mod_2_128(out.odd);
        }
        return out;
    }
};

// Exact division t / divisor with a 128-bit quotient, Jebelean style:
// shift out the divisor's power of two, multiply by the odd part's inverse
// mod 2^128, then confirm with one widening multiply (which also rejects
// quotients that do not fit the storage budget).
inline bool divexact_wide(const S256& t, const WideDivisor& d, i128* out) {
    if (t.sign == 0) {
        *out = 0;
        return true;
    }
    U256 u = t.mag;
    if (d.trivial) {
        if (u.w[2] != 0 || u.w[3] != 0) return false;
    } else {
        shr_u256(u, d.shift);
        const u128 q = low_u128(u) * d.inv;
        const U256 check = mul_full(q, d.odd);
        if (cmp_u256(check, u) != 0) return false;  // quotient overflow
        u.w[0] = static_cast<u64>(q);
        u.w[1] = static_cast<u64>(q >> 64);
        u.w[2] = u.w[3] = 0;
    }
    const u128 mag = low_u128(u);
    if (mag >> (kWideStoreBits - 1) != 0) return false;  // keep headroom
    const int s = t.sign * d.sign;
    *out = s >= 0 ? static_cast<i128>(mag) : -static_cast<i128>(mag);
    return true;
}

// m[i][j] <- (m[i][j]*piv - m[i][k]*m[k][j]) / prev via 256-bit intermediates.
inline bool update_row_wide(IMat& m, int i, int k, i128 piv,
                            const WideDivisor& prev) {
    const i128 mik = m.at(i, k);
    for (int j = k + 1; j < m.cols; ++j) {
        S256 t = mul_s(m.at(i, j), piv);
        sub_s(t, mul_s(mik, m.at(k, j)));
        if (!divexact_wide(t, prev, &m.at(i, j))) return false;
    }
    m.at(i, k) = 0;
    return true;
}

}  // namespace

std::optional<int> det_sign_i128(IMat& m) {
    const int n = m.rows;
    int swap_sign = 1;
    i128 prev = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m.at(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (int j = k; j < m.cols; ++j) std::swap(m.at(p, j), m.at(k, j));
            swap_sign = -swap_sign;
        }
        const i128 piv = m.at(k, k);
        if (k == n - 1) return swap_sign * sign_i128(piv);
        for (int i = k + 1; i < n; ++i)
            if (!update_row_i128(m, i, k, piv, prev)) return std::nullopt;
        prev = piv;
    }
    return swap_sign;  // n == 0
}

int det_sign_mpz(ZMat& m) {
    const int n = m.rows;
    int swap_sign = 1;
    Integer prev = 1, t1, t2;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && sgn(m.at(p, k)) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (int j = k; j < m.cols; ++j)
                mpz_swap(m.at(p, j).get_mpz_t(), m.at(k, j).get_mpz_t());
            swap_sign = -swap_sign;
        }
        if (k == n - 1) return swap_sign * sgn(m.at(k, k));
        const Integer piv = m.at(k, k);
        for (int i = k + 1; i < n; ++i) update_row_mpz(m, i, k, piv, prev, t1, t2);
        prev = piv;
    }
    return swap_sign;
}

std::optional<std::pair<int, int>> rank_aug_i128(IMat& m) {
    const int n = m.rows, w = m.cols - 1;
    int rank = 0;
    i128 prev = 1;
    for (int col = 0; col < w && rank < n; ++col) {
        int p = rank;
        while (p < n && m.at(p, col) == 0) ++p;
        if (p == n) continue;
        if (p != rank)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(rank, j));
        const i128 piv = m.at(rank, col);
        for (int i = rank + 1; i < n; ++i) {
            const i128 mic = m.at(i, col);
            for (int j = col + 1; j < m.cols; ++j) {
                i128 t1, t2;
                if (mul_ck(m.at(i, j), piv, &t1)) return std::nullopt;
                if (mul_ck(mic, m.at(rank, j), &t2)) return std::nullopt;
                if (sub_ck(t1, t2, &t1)) return std::nullopt;
                m.at(i, j) = prev == 1 ? t1 : t1 / prev;
            }
            m.at(i, col) = 0;
        }
        prev = piv;
        ++rank;
    }
    int full = rank;
    for (int i = rank; i < n && full == rank; ++i)
        if (m.at(i, w) != 0) full = rank + 1;
    return std::make_pair(rank, full);
}

std::pair<int, int> rank_aug_mpz(ZMat& m) {
    const int n = m.rows, w = m.cols - 1;
    int rank = 0;
    Integer prev = 1, t1, t2;
    for (int col = 0; col < w && rank < n; ++col) {
        int p = rank;
        while (p < n && sgn(m.at(p, col)) == 0) ++p;
        if (p == n) continue;
        if (p != rank)
            for (int j = 0; j < m.cols; ++j)
                mpz_swap(m.at(p, j).get_mpz_t(), m.at(rank, j).get_mpz_t());
        const Integer piv = m.at(rank, col);
        const bool divide = mpz_cmp_ui(prev.get_mpz_t(), 1) != 0;
        for (int i = rank + 1; i < n; ++i) {
            const Integer mic = m.at(i, col);
            for (int j = col + 1; j < m.cols; ++j) {
                mpz_mul(t1.get_mpz_t(), m.at(i, j).get_mpz_t(), piv.get_mpz_t());
                mpz_mul(t2.get_mpz_t(), mic.get_mpz_t(), m.at(rank, j).get_mpz_t());
                mpz_sub(t1.get_mpz_t(), t1.get_mpz_t(), t2.get_mpz_t());
                if (divide)
                    mpz_divexact(m.at(i, j).get_mpz_t(), t1.get_mpz_t(),
                                 prev.get_mpz_t());
                else
                    mpz_set(m.at(i, j).get_mpz_t(), t1.get_mpz_t());
            }
            m.at(i, col) = 0;
        }
        prev = piv;
        ++rank;
    }
    int full = rank;
    for (int i = rank; i < n && full == rank; ++i)
        if (sgn(m.at(i, w)) != 0) full = rank + 1;
    return {rank, full};
}

std::optional<ForwardResult> forward_i128(IMat& m) {
    const int n = m.rows;
    i128 prev = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m.at(p, k) == 0) ++p;
        if (p == n) return ForwardResult{true};
        if (p != k)
            for (int j = k; j < m.cols; ++j) std::swap(m.at(p, j), m.at(k, j));
        const i128 piv = m.at(k, k);
        for (int i = k + 1; i < n; ++i)
            if (!update_row_i128(m, i, k, piv, prev)) return std::nullopt;
        prev = piv;
    }
    return ForwardResult{false};
}

ForwardResult forward_mpz(ZMat& m) {
    const int n = m.rows;
    Integer prev = 1, t1, t2;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && sgn(m.at(p, k)) == 0) ++p;
        if (p == n) return ForwardResult{true};
        if (p != k)
            for (int j = k; j < m.cols; ++j)
                mpz_swap(m.at(p, j).get_mpz_t(), m.at(k, j).get_mpz_t());
        const Integer piv = m.at(k, k);
        for (int i = k + 1; i < n; ++i) update_row_mpz(m, i, k, piv, prev, t1, t2);
        prev = piv;
    }
    return ForwardResult{false};
}

std::optional<int> det_sign_wide(IMat& m) {
    const int n = m.rows;
    int swap_sign = 1;
    WideDivisor prev = WideDivisor::make(1);
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m.at(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (int j = k; j < m.cols; ++j) std::swap(m.at(p, j), m.at(k, j));
            swap_sign = -swap_sign;
        }
        const i128 piv = m.at(k, k);
        if (k == n - 1) return swap_sign * sign_i128(piv);
        for (int i = k + 1; i < n; ++i)
            if (!update_row_wide(m, i, k, piv, prev)) return std::nullopt;
        prev = WideDivisor::make(piv);
    }
    return swap_sign;
}

std::optional<std::pair<int, int>> rank_aug_wide(IMat& m) {
    const int n = m.rows, w = m.cols - 1;
    int rank = 0;
    WideDivisor prev = WideDivisor::make(1);
    for (int col = 0; col < w && rank < n; ++col) {
        int p = rank;
        while (p < n && m.at(p, col) == 0) ++p;
        if (p == n) continue;
        if (p != rank)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(rank, j));
        const i128 piv = m.at(rank, col);
        for (int i = rank + 1; i < n; ++i) {
            const i128 mic = m.at(i, col);
            for (int j = col + 1; j < m.cols; ++j) {
                S256 t = mul_s(m.at(i, j), piv);
                sub_s(t, mul_s(mic, m.at(rank, j)));
                if (!divexact_wide(t, prev, &m.at(i, j))) return std::nullopt;
            }
            m.at(i, col) = 0;
        }
        prev = WideDivisor::make(piv);
        ++rank;
    }
    int full = rank;
    for (int i = rank; i < n && full == rank; ++i)
        if (m.at(i, w) != 0) full = rank + 1;
    return std::make_pair(rank, full);
}

std::optional<ForwardResult> forward_wide(IMat& m) {
    const int n = m.rows;
    WideDivisor prev = WideDivisor::make(1);
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m.at(p, k) == 0) ++p;
        if (p == n) return ForwardResult{true};
        if (p != k)
            for (int j = k; j < m.cols; ++j) std::swap(m.at(p, j), m.at(k, j));
        const i128 piv = m.at(k, k);
        for (int i = k + 1; i < n; ++i)
            if (!update_row_wide(m, i, k, piv, prev)) return std::nullopt;
        prev = WideDivisor::make(piv);
    }
    return ForwardResult{false};
}

bool backsub_wide_step(const IMat& m, i128* y, int i) {
    const int n = m.rows;
    if (i == n - 1) {
        y[i] = m.at(n - 1, n);
        return true;
    }
    // y_i = (d_n * rhs_i - sum_{j>i} U[i][j] y_j) / U[i][i]
    S256 acc = mul_s(m.at(n - 1, n - 1), m.at(i, n));
    for (int j = i + 1; j < n; ++j) sub_s(acc, mul_s(m.at(i, j), y[j]));
    const WideDivisor div = WideDivisor::make(m.at(i, i));
    return divexact_wide(acc, div, &y[i]);
}

}  // namespace bmz::detail
