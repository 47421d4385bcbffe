#pragma once

#include <optional>
#include <vector>

#include "bmz/rational.hpp"

// Exact rational LP feasibility: phase-one simplex with Bland's anti-cycling
// rule, so termination is guaranteed and every answer is an exact boolean
// with an exact witness. Problem sizes in this project are tiny.

namespace bmz {

// Finds x >= 0 with a*x = b, or nullopt if none exists.
std::optional<QVector> lp_nonneg_solve(const QMatrix& a, const QVector& b);

// Convex coefficients expressing 0 as a combination of the points, if any.
std::optional<QVector> origin_hull_coefficients(const std::vector<QVector>& points);

// Exact membership of x in conv(points).
bool in_convex_hull(const QVector& x, const std::vector<QVector>& points);

}  // namespace bmz
