#include "bmz/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace bmz {

std::vector<std::string> validate_collection(const BmzCollection& c) {
    std::vector<std::string> violations;
    if (c.d < 1) violations.push_back("dimension: d must be >= 1");
    if (c.r < 2) violations.push_back("r: must be >= 2");
    if (c.d < 1 || c.r < 2) return violations;
    const int expected = c.total_points();
    if (static_cast<int>(c.points.size()) != expected) {
        violations.push_back("class size: expected " + std::to_string(expected) +
                             " points ((d+1) classes of r-1 plus z), got " +
                             std::to_string(c.points.size()));
        return violations;
    }
    for (int j = 0; j < expected; ++j) {
        if (static_cast<int>(c.points[j].size()) != c.d) {
            violations.push_back("point dimension: point " + std::to_string(j + 1) +
                                 " has " + std::to_string(c.points[j].size()) +
                                 " coordinates, expected " + std::to_string(c.d));
            return violations;
        }
    }
    for (int i = 0; i < expected; ++i)
        for (int j = i + 1; j < expected; ++j)
            if (c.points[i] == c.points[j])
                violations.push_back("distinctness: points " + std::to_string(i + 1) +
                                     " and " + std::to_string(j + 1) + " coincide");
    return violations;
}

namespace {

std::uint64_t factorial_u64(int r) {
    std::uint64_t f = 1;
    for (int i = 2; i <= r; ++i) f *= i;
    return f;
}

}  // namespace

std::optional<std::uint64_t> placement_count(int d, int r) {
    if (d < 1 || r < 2) return std::nullopt;
    if (r > 20 || d + 1 > kMaxBoards) return std::nullopt;
    const std::uint64_t base = factorial_u64(r);
    std::uint64_t total = 1;
    for (int k = 0; k <= d; ++k) {
        if (total > UINT64_MAX / base) return std::nullopt;
        total *= base;
    }
    return total;
}

void placement_rows_from_index(int d, int r, std::uint64_t index,
                               std::int8_t* out) {
    const std::uint64_t base = factorial_u64(r);
    // Split into board digits, board 0 most significant.
    std::uint64_t digit[kMaxBoards];
    for (int k = d; k >= 0; --k) {
        digit[k] = index % base;
        index /= base;
    }
    for (int k = 0; k <= d; ++k) {
        std::uint64_t rem = digit[k];
        std::int8_t avail[32];
        int navail = r;
        for (int i = 0; i < r; ++i) avail[i] = static_cast<std::int8_t>(i);
        for (int col = 0; col < r - 1; ++col) {
            std::uint64_t div = 1;
            for (int rest = r - col - 1; rest >= 2; --rest) div *= rest;
            const int pick = static_cast<int>(rem / div);
            rem %= div;
            out[k * (r - 1) + col] = avail[pick];
            for (int i = pick; i + 1 < navail; ++i) avail[i] = avail[i + 1];
            --navail;
        }
    }
}

RookPlacement placement_from_index(int d, int r, std::uint64_t index) {
    RookPlacement p;
    p.d = d;
    p.r = r;
    p.rows_flat.assign(static_cast<std::size_t>(d + 1) * (r - 1), 0);
    placement_rows_from_index(d, r, index, p.rows_flat.data());
    return p;
}

std::uint64_t index_of_placement(const RookPlacement& p) {
    const int d = p.d, r = p.r;
    const std::uint64_t base = factorial_u64(r);
    std::uint64_t index = 0;
    for (int k = 0; k <= d; ++k) {
        std::uint64_t digit = 0;
        std::vector<std::int8_t> avail(r);
        std::iota(avail.begin(), avail.end(), 0);
        for (int col = 0; col < r - 1; ++col) {
            const auto row = static_cast<std::int8_t>(p.row(k, col));
            const auto it = std::find(avail.begin(), avail.end(), row);
            if (it == avail.end())
                throw std::invalid_argument("placement not injective per board");
            const auto pick = static_cast<std::uint64_t>(it - avail.begin());
            std::uint64_t div = 1;
            for (int rest = r - col - 1; rest >= 2; --rest) div *= rest;
            digit += pick * div;
            avail.erase(it);
        }
        index = index * base + digit;
    }
    return index;
}

void for_each_placement(int d, int r, std::uint64_t lo, std::uint64_t hi,
                        const std::function<void(std::uint64_t, const RookPlacement&)>& fn) {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        const RookPlacement p = placement_from_index(d, r, idx);
        fn(idx, p);
    }
}

std::vector<std::vector<int>> classes_of(const RookPlacement& p,
                                         const BmzCollection& c) {
    if (p.d != c.d || p.r != c.r)
        throw std::invalid_argument("placement/collection (d,r) mismatch");
    std::vector<std::vector<int>> classes(p.r);
    const int n = c.ground_size();
    for (int j = 0; j < n; ++j) classes[p.row_of_point(j)].push_back(j);
    classes[p.r - 1].push_back(n);  // z
    return classes;
}

ChessboardPerms chessboard_perms(const RookPlacement& p) {
    ChessboardPerms out;
    out.r = p.r;
    out.perms.resize(p.d + 1);
    for (int k = 0; k <= p.d; ++k) {
        std::vector<bool> used(p.r, false);
        auto& perm = out.perms[k];
        perm.resize(p.r);
        for (int col = 0; col < p.r - 1; ++col) {
            perm[col] = static_cast<std::int8_t>(p.row(k, col));
            used[perm[col]] = true;
        }
        for (int row = 0; row < p.r; ++row)
            if (!used[row]) perm[p.r - 1] = static_cast<std::int8_t>(row);
    }
    return out;
}

RookPlacement placement_from_perms(const ChessboardPerms& perms, int d) {
    RookPlacement p;
    p.r = perms.r;
    p.d = d;
    p.rows_flat.resize(static_cast<std::size_t>(d + 1) * (perms.r - 1));
    for (int k = 0; k <= d; ++k)
        for (int col = 0; col < perms.r - 1; ++col)
            p.rows_flat[k * (perms.r - 1) + col] = perms.perms[k][col];
    return p;
}

int perm_parity(const std::vector<std::int8_t>& perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

RookPlacement apply_permutation(const RookPlacement& p, const std::vector<int>& pi) {
    if (static_cast<int>(pi.size()) != p.r)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<int> inv(p.r);
    for (int i = 0; i < p.r; ++i) inv[pi[i]] = i;
    RookPlacement out = p;
    for (auto& row : out.rows_flat) row = static_cast<std::int8_t>(inv[row]);
    return out;
}

std::vector<std::vector<int>> all_permutations(int r) {
    std::vector<int> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<RookPlacement> equivalence_class(const RookPlacement& p) {
    std::vector<RookPlacement> out;
    for (const auto& pi : all_permutations(p.r)) out.push_back(apply_permutation(p, pi));
    return out;
}

RookPlacement equivalence_class_representative(const RookPlacement& p) {
    RookPlacement best = p;
    for (const auto& pi : all_permutations(p.r)) {
        RookPlacement q = apply_permutation(p, pi);
        if (q < best) best = q;
    }
    return best;
}

}  // namespace bmz
