#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bmz/rational.hpp"

// The Sarkaria-Onn transform: point x in class i maps to its i-th clone
// (x,1) (x) w_i in R^N, N = (d+1)(r-1). Tverberg-type questions about a
// partition become origin-membership questions about the transformed set,
// and both routes are kept available as mutual oracles.

namespace bmz {

struct WBasis {
    int r = 0;
    std::vector<QVector> vectors;  // w_1..w_r in R^{r-1}, integer entries
};

// w_i = r*e_i - 1 for i < r and w_r = -1. An invertible linear image of the
// regular-simplex vertex set: zero sum, every r-1 linearly independent, and
// swap maps orientation-reversing, which is all the theory consumes.
WBasis make_w_basis(int r);

// i-th clone of x (clone_index 0-based), tensor coordinates in row-major
// order: (u1*v, u2*v, ..., u_{d+1}*v).
QVector clone_point(const QVector& x, int clone_index, const WBasis& w);

struct RPartition {
    int d = 0;
    std::vector<std::vector<QVector>> classes;  // P_1..P_r

    int r() const { return static_cast<int>(classes.size()); }
};

struct EmptyClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Phi(P): one clone per ground point, ordered class by class and within a
// class by its point order (the global point order used by sign conventions).
std::vector<QVector> transform_partition(const RPartition& p, const WBasis& w);

struct ConvexWitness {
    // Coefficients aligned with the point order handed to origin_in_hull.
    std::vector<Rational> coefficients;
};

struct HullMembership {
    bool inside = false;
    std::optional<ConvexWitness> witness;
};

// Exact LP feasibility of 0 = sum alpha_p p, alpha >= 0, sum alpha = 1.
HullMembership origin_in_hull(const std::vector<QVector>& points);

struct TverbergPointResult {
    bool has_point = false;
    std::optional<QVector> point;
};

// Direct-space test: a common point of all class hulls (throws
// EmptyClassError when a class is empty).
TverbergPointResult has_tverberg_point(const RPartition& p);

// Transform-space test of Lemma-style equivalence: 0 in aff(Phi(P)).
bool has_affine_tverberg_point(const RPartition& p);
// Direct-space oracle twin: intersection of the class affine hulls nonempty.
bool has_affine_tverberg_point_direct(const RPartition& p);

// Nontrivial common direction of the class affine hulls.
bool has_tverberg_direction(const RPartition& p);

// Phi(P) affinely dependent; equals (some P_i affinely dependent) or
// has_tverberg_direction(p).
bool affinely_dependent_transform(const RPartition& p);

// Reconstruction from a transform-space hull witness: all class coefficient
// sums are equal to some A > 0 and the common point is s/A.
QVector tverberg_point_from_transform_witness(const RPartition& p,
                                              const ConvexWitness& witness);

}  // namespace bmz
