#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmz/rational.hpp"

// Fraction-free (Bareiss) elimination kernels on integer matrices. Two lanes:
// a checked __int128 lane that bails out on overflow, and an mpz lane that is
// always exact. Callers clear denominators first; positive row scalings never
// change determinant signs or ranks, so rational-level predicates reduce to
// these kernels.

namespace bmz::detail {

using i128 = __int128;

inline int sign_i128(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

struct IMat {
    int rows = 0, cols = 0;
    std::vector<i128> a;

    void reset(int r, int c) {
        rows = r;
        cols = c;
        a.assign(static_cast<std::size_t>(r) * c, 0);
    }
    // For callers that overwrite every cell during assembly.
    void reset_nozero(int r, int c) {
        rows = r;
        cols = c;
        const std::size_t need = static_cast<std::size_t>(r) * c;
        if (a.size() < need) a.resize(need);
    }
    i128& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    i128 at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// mpz workspace matrix; element buffers are reused across reset() calls so the
// hot loops do no allocation in steady state.
struct ZMat {
    int rows = 0, cols = 0;
    std::vector<Integer> a;

    void reset(int r, int c) {
        rows = r;
        cols = c;
        const std::size_t need = static_cast<std::size_t>(r) * c;
        if (a.size() < need) a.resize(need);
        for (std::size_t i = 0; i < need; ++i) a[i] = 0;
    }
    void reset_nozero(int r, int c) {
        rows = r;
        cols = c;
        const std::size_t need = static_cast<std::size_t>(r) * c;
        if (a.size() < need) a.resize(need);
    }
    Integer& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Integer& at(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }
};

struct ForwardResult {
    bool singular = false;
};

// Sign of det of the leading square block (rows x rows); cols may exceed rows,
// extra columns ride along untouched. Destructive.
std::optional<int> det_sign_i128(IMat& m);
int det_sign_mpz(ZMat& m);

// Rank of the matrix ignoring its last column, and of the full matrix.
// Used for the 0-in-affine-hull tests: append the homogenizing column last.
// Destructive.
std::optional<std::pair<int, int>> rank_aug_i128(IMat& m);
std::pair<int, int> rank_aug_mpz(ZMat& m);

// Forward Bareiss pass on an n x (n+1) augmented system with row pivoting.
// Leaves an upper-triangular fraction-free system in place. singular is set
// when some pivot column vanishes below the diagonal.
std::optional<ForwardResult> forward_i128(IMat& m);
ForwardResult forward_mpz(ZMat& m);

// Wide lane: entries stay in __int128 storage but the Bareiss update
// (a*piv - b*c)/prev runs in 256-bit intermediates with exact division by a
// modular inverse, so no intermediate can overflow; only quotients that no
// longer fit the 120-bit storage budget bail out (nullopt -> caller falls
// back to mpz). Much faster than both the checked-__int128 lane and mpz for
// the bulk enumeration workloads (entry sizes ~12 bits at dimension ~10).
std::optional<int> det_sign_wide(IMat& m);
std::optional<std::pair<int, int>> rank_aug_wide(IMat& m);
std::optional<ForwardResult> forward_wide(IMat& m);

// Back-substitution companion for forward_wide triangles on an n x (n+1)
// system: fills y with the scaled solution (x_i = y_i / d_n, d_n the last
// pivot) in 256-bit intermediates. Returns false on storage overflow.
// y must have room for n entries; entries may be inspected in decreasing
// index order by callers that stop early.
bool backsub_wide_step(const IMat& m, i128* y, int i);

}  // namespace bmz::detail
