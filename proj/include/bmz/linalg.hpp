#pragma once

#include <optional>
#include <vector>

#include "bmz/rational.hpp"

// Exact sign / rank / solve primitives over the rationals. Sign and rank
// questions are answered by clearing denominators row-wise (positive scalings
// preserve both) and running fraction-free integer elimination.

namespace bmz {

// Exact sign of det(m) in {-1, 0, +1}. Requires a square matrix.
int det_sign(const QMatrix& m);

// Exact rank over Q.
int rank(const QMatrix& m);

// Unique solution of a*x = b for square nonsingular a; nullopt when singular.
std::optional<QVector> solve_unique(const QMatrix& a, const QVector& b);

// Basis of { x : m*x = 0 }.
std::vector<QVector> nullspace(const QMatrix& m);

// True iff the homogenized points (each with an appended 1) have rank equal
// to the number of points.
bool affinely_independent(const std::vector<QVector>& points);

// True iff 0 lies in the affine hull of the points, i.e. appending the origin
// as an extra point does not raise the affine rank.
bool origin_in_affine_hull(const std::vector<QVector>& points);

// rank of the point matrix and of its homogenization, in one elimination.
std::pair<int, int> rank_and_homogenized_rank(const std::vector<QVector>& points);

}  // namespace bmz
