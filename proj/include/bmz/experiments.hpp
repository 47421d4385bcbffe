#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmz/degree.hpp"
#include "bmz/genpos.hpp"
#include "bmz/model.hpp"
#include "bmz/rational.hpp"
#include "bmz/rng.hpp"
#include "bmz/transform.hpp"

// Drivers for the computational experiments: the special cluster collection
// with its explicitly computable degree, random degree-zero searches for
// composite r, Tverberg censuses, discretized motion scans, the
// colored-Tverberg wrapper, and the planar sign-pattern case studies.

namespace bmz {

// Clusters of r-1 points around e_1..e_d and the origin (a standard, not
// regular, simplex: exact rational coordinates), z exactly at the barycenter.
// Offsets are drawn deterministically and re-drawn until check_sufficient
// passes, preserving the cluster/centroid structure throughout.
BmzCollection special_collection(int d, int r, const Rational& radius,
                                 int threads = 1, int max_retries = 32);
Rational default_cluster_radius();

// Uniform rational coordinates in [0, coord_bound] on the 1/denom_bound grid,
// resampled until the collection passes check_sufficient.
BmzCollection random_collection(int d, int r, long coord_bound, long denom_bound,
                                Rng& rng, int threads = 1, int max_retries = 64);

struct CensusEntry {
    std::uint64_t placement_index = 0;
    RookPlacement placement;
    QVector witness;  // a Tverberg point of the placement's classes
};

struct CensusResult {
    std::vector<CensusEntry> tverberg;  // ascending placement index
    std::uint64_t class_count = 0;      // equivalence classes touched
    bool classes_fully_tverberg = false;  // |census| == class_count * r!
};

// Tests every placement in BR via the direct-space LP; placements with an
// empty class are never Tverberg and skip the LP.
CensusResult tverberg_census(const BmzCollection& c, int threads = 1);

struct SearchFind {
    std::uint64_t trial = 0;
    BmzCollection collection;
    DegreeReport report;
    CensusResult census;
};

struct UnverifiedFind {
    std::uint64_t trial = 0;
    BmzCollection collection;
    DegreeReport report;
};

struct SearchLog {
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::uint64_t skipped = 0;  // degenerate or non-generic trials
    std::vector<SearchFind> found;
    // Degree-zero candidates whose exhaustive position check exceeded the
    // configured budget (large r benchmark runs); kept as research
    // artifacts, never counted as verified finds.
    std::vector<UnverifiedFind> unverified;
};

// Samples seed-reproducible random collections, keeps those of degree zero.
// Every find passed check_sufficient; its census rides along (an empty census
// would refute a Barany-Larman instance and is a research alarm upstream).
SearchLog search_degree_zero(int d, int r, std::uint64_t budget,
                             std::uint64_t seed, int threads = 1,
                             long coord_bound = 1, long denom_bound = 1000);

struct MotionSample {
    Rational t;  // in [0, 1]
    bool sufficiently_general = false;
    std::optional<long long> degree;
    std::optional<long long> residue;
};

struct MotionTrace {
    long long modulus = 0;  // r!
    std::optional<long long> residue;  // shared by all generic samples
    std::vector<MotionSample> samples;
};

struct ResidueMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear interpolation sampled at t = k/steps, k = 0..steps. Degrees are
// computed at every sufficiently general sample; all of them must agree mod
// r! or ResidueMismatchError flags an implementation bug.
MotionTrace motion_scan(const BmzCollection& c0, const BmzCollection& c1,
                        int steps, int threads = 1);

struct WrongShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ColoredSolveResult {
    BmzCollection collection;  // the built BMZ-collection, z last
    RookPlacement placement;   // Tverberg placement found by census scan
    // The surviving r0 classes after deleting z's class: global 0-based
    // point indices (class-major input order) and their coordinates.
    std::vector<std::vector<int>> class_indices;
    std::vector<std::vector<QVector>> class_points;
    QVector witness;
};

// The add-an-extra-point reduction: builds the (r0+1)-collection with z (the
// centroid by default), finds the first Tverberg placement, deletes z's
// class. nullopt when the census is empty (possible for composite r0+1).
std::optional<ColoredSolveResult> solve_colored_tverberg(
    const std::vector<std::vector<QVector>>& classes,
    const std::optional<QVector>& z_hint, int threads = 1);

struct SignCasePredicate {
    std::string name;
    int sign = 0;
};

struct SignCaseReport {
    int case_id = 0;
    RookPlacement placement;
    Signs signs;
    std::vector<SignCasePredicate> predicates;
    // Some facet-degeneracy condition holds for R - z (affine dependence of
    // the transformed set or origin in its affine span).
    bool dictionary_condition = false;
    bool sign_zero_iff_condition = false;
};

// Planar r=3 case studies of candidate direct sign definitions; predicate
// values are reported as data, not asserted.
SignCaseReport sign_case_study(const BmzCollection& c, int case_id);

}  // namespace bmz
