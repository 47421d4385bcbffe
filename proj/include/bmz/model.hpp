#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmz/rational.hpp"

// BMZ-collections and maximal rainbow r-partitions encoded as non-attacking
// rook placements. A collection has d+1 color classes of r-1 points each plus
// the singleton {z}; points are globally numbered c_1..c_{N+1} with each class
// occupying a consecutive index range and z last, N = (d+1)(r-1).
//
// A placement stores, for each of the d+1 full chessboards, the row of the
// rook in every column (injective per board); z sits in row r of the
// degenerate last board by convention and is not stored.

namespace bmz {

struct BmzCollection {
    int d = 0;
    int r = 0;
    std::vector<QVector> points;  // c_1..c_N, z  (z = points.back())

    int ground_size() const { return (d + 1) * (r - 1); }  // N
    int total_points() const { return ground_size() + 1; }
    const QVector& z() const { return points.back(); }
    // 0-based color class of 0-based point index; z maps to d+1.
    int class_of(int j) const {
        return j == ground_size() ? d + 1 : j / (r - 1);
    }
};

struct RookPlacement {
    int d = 0;
    int r = 0;
    std::vector<std::int8_t> rows_flat;  // (d+1)*(r-1), 0-based rows

    int row(int board, int col) const { return rows_flat[board * (r - 1) + col]; }
    int board_of_point(int j) const { return j / (r - 1); }
    int col_of_point(int j) const { return j % (r - 1); }
    // Row (= class) of 0-based ground point j.
    int row_of_point(int j) const { return rows_flat[j]; }

    friend bool operator==(const RookPlacement& a, const RookPlacement& b) {
        return a.d == b.d && a.r == b.r && a.rows_flat == b.rows_flat;
    }
    friend bool operator<(const RookPlacement& a, const RookPlacement& b) {
        return a.rows_flat < b.rows_flat;
    }
};

struct ChessboardPerms {
    int r = 0;
    // perms[k][j] = 0-based row of board k's rook in column j for j < r-1;
    // perms[k][r-1] = the rook-free row.
    std::vector<std::vector<std::int8_t>> perms;
};

// Empty vector means the collection is valid.
std::vector<std::string> validate_collection(const BmzCollection& c);

// (r!)^(d+1) if it fits in uint64, otherwise nullopt.
std::optional<std::uint64_t> placement_count(int d, int r);

// Lexicographic unranking of the placement stream: board 0 is the most
// significant digit, and within a board columns pick remaining rows in
// ascending order.
inline constexpr int kMaxBoards = 64;  // d+1 <= 64, r <= 20
RookPlacement placement_from_index(int d, int r, std::uint64_t index);
// Allocation-free variant for hot loops; out must hold (d+1)*(r-1) entries.
void placement_rows_from_index(int d, int r, std::uint64_t index, std::int8_t* out);
std::uint64_t index_of_placement(const RookPlacement& p);

// Deterministic lexicographic enumeration over an index range [lo, hi).
void for_each_placement(int d, int r, std::uint64_t lo, std::uint64_t hi,
                        const std::function<void(std::uint64_t, const RookPlacement&)>& fn);

// Classes R_1..R_r as 0-based point-index lists; z (index N) is in R_r.
std::vector<std::vector<int>> classes_of(const RookPlacement& p,
                                         const BmzCollection& c);

ChessboardPerms chessboard_perms(const RookPlacement& p);
RookPlacement placement_from_perms(const ChessboardPerms& perms, int d);

int perm_parity(const std::vector<std::int8_t>& perm);

// R^pi: class at new position i is R_{pi(i)} (z moved back to the last
// class). In board terms every row label goes through pi^{-1}. With
// (f.g)(x) = f(g(x)) this gives apply(apply(p, s), t) = apply(p, s.t).
RookPlacement apply_permutation(const RookPlacement& p, const std::vector<int>& pi);

std::vector<std::vector<int>> all_permutations(int r);

// All r! members of the ~ class of p, in the permutation enumeration order.
std::vector<RookPlacement> equivalence_class(const RookPlacement& p);

// Lexicographically smallest member of the ~ class; canonical class key.
RookPlacement equivalence_class_representative(const RookPlacement& p);

}  // namespace bmz
