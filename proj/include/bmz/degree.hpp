#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bmz/model.hpp"
#include "bmz/rational.hpp"
#include "bmz/rng.hpp"
#include "bmz/transform.hpp"

// Signs, ray-facet intersection and the degree of a BMZ-collection: the
// signed count of facets F_R = conv(Phi(R - z)) met by a ray from the origin.
// sgn(R) = csgn(R) * gsgn(R), the product of the rook-permutation parities
// and the determinant sign of the N x N matrix of facet vertices in global
// point order.

namespace bmz {

struct Facet {
    RookPlacement placement;
    std::vector<QVector> vertices;  // clone of c_j at row j, global point order
};

Facet build_facet(const RookPlacement& p, const BmzCollection& c, const WBasis& w);

int combinatorial_sign(const RookPlacement& p);
int geometric_sign(const RookPlacement& p, const BmzCollection& c, const WBasis& w);

struct Signs {
    int csgn = 0;
    int gsgn = 0;
    int sgn = 0;
};

struct RayHit {
    Rational t;                      // ray parameter, > 0
    std::vector<Rational> barycentric;  // all > 0, sum 1, vertex order
};

enum class RayFacetStatus { Miss, Hit, NonGeneric };

struct RayFacetResult {
    RayFacetStatus status = RayFacetStatus::Miss;
    std::optional<RayHit> hit;
};

// Solves t*dir = sum_j lambda_j v_j, sum lambda_j = 1 exactly.
// Singular system -> NonGeneric. t <= 0 -> Miss. Some lambda < 0 -> Miss.
// Some lambda = 0 (boundary contact) -> NonGeneric. Otherwise Hit.
RayFacetResult ray_hits_facet(const QVector& dir, const Facet& f);

// rho: opposite to z* = clone(z, r); never zero.
QVector default_ray(const BmzCollection& c, const WBasis& w);

// Uniform small-integer direction, never zero.
QVector sample_ray(Rng& rng, int n);

struct DegreeHit {
    std::uint64_t placement_index = 0;
    RookPlacement placement;
    Signs signs;
    RayHit hit;
};

struct DegreeReport {
    QVector ray_direction;
    std::vector<DegreeHit> hits;
    long long degree = 0;
    long long modulus = 0;  // r!
    long long residue = 0;  // degree mod r!, normalized to [0, r!)
};

enum class DegreeFailure { NonGenericRay, DegenerateFacet };

struct DegreeError {
    DegreeFailure failure = DegreeFailure::NonGenericRay;
    std::uint64_t placement_index = 0;
    RookPlacement placement;
};

using DegreeOutcome = std::variant<DegreeReport, DegreeError>;

// Deterministic for fixed (c, ray, w) regardless of thread count.
DegreeOutcome compute_degree(const BmzCollection& c, const QVector& ray,
                             const WBasis& w, int threads = 1);

struct ExhaustedRetriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RaySelection {
    QVector direction;
    bool used_default = true;
    int attempts = 1;
};

struct DegreeAutoResult {
    DegreeReport report;
    RaySelection ray;
};

// Default ray first (or a sampled one when start_with_default is false); on
// NonGeneric outcomes retries with rays sampled from ray_seed. Throws
// ExhaustedRetriesError after max_ray_attempts. DegenerateFacet is not
// ray-fixable and is returned as-is.
std::variant<DegreeAutoResult, DegreeError> compute_degree_auto(
    const BmzCollection& c, const WBasis& w, int threads,
    std::uint64_t ray_seed, int max_ray_attempts = 16,
    bool start_with_default = true);

// The unique other placement sharing the ridge obtained by dropping the rook
// of the given ground point; moves that rook to the board's free row.
RookPlacement ridge_partner(const RookPlacement& p, int dropped_point);

struct PseudomanifoldReport {
    bool ok = true;
    std::string detail;  // first counterexample, if any
};

// Exhaustive: every (placement, ridge) pair has exactly one distinct partner,
// with opposite combinatorial sign, and partnering is an involution.
PseudomanifoldReport check_pseudomanifold(int d, int r,
                                          std::uint64_t budget = 50'000'000);

long long factorial_ll(int r);
long long residue_mod(long long value, long long modulus);

}  // namespace bmz
