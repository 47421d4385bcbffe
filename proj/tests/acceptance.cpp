// Acceptance suite: reproduces the computational claims at desk scale and
// verifies the structural theorems as exhaustive/property checks. Each
// criterion prints one PASS/FAIL line; the exit code is the failure count.
// An optional argv[1] substring filters criteria by name.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bmz/degree.hpp"
#include "bmz/experiments.hpp"
#include "bmz/genpos.hpp"
#include "bmz/linalg.hpp"
#include "bmz/lp.hpp"
#include "bmz/parallel.hpp"
#include "bmz/transform.hpp"

using namespace bmz;

namespace {

int g_threads = 1;

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

RPartition random_partition(Rng& rng) {
    RPartition p;
    p.d = 1 + static_cast<int>(rng.below(3));
    const int r = 2 + static_cast<int>(rng.below(3));
    p.classes.resize(r);
    for (auto& cls : p.classes) {
        const int size = 1 + static_cast<int>(rng.below(p.d + 2));
        for (int i = 0; i < size; ++i) {
            QVector pt(p.d);
            for (int m = 0; m < p.d; ++m) pt[m] = rat(rng.int_in(0, 20));
            cls.push_back(std::move(pt));
        }
    }
    return p;
}

long long expected_degree_magnitude(int d, int r) {
    long long f = factorial_ll(r - 1);
    long long out = 1;
    for (int k = 0; k <= d; ++k) out *= f;
    return out;
}

// ---------------------------------------------------------------------
// Criterion: |deg C0| = ((r-1)!)^(d+1), exact, for the test grid.
bool special_degree(std::string& detail) {
    const std::vector<std::pair<int, int>> grid = {
        {1, 2}, {1, 3}, {2, 3}, {3, 3}, {2, 4}};
    std::ostringstream ss;
    bool ok = true;
    for (auto [d, r] : grid) {
        const auto c = special_collection(d, r, default_cluster_radius(), g_threads);
        const auto w = make_w_basis(r);
        const auto outcome = compute_degree_auto(c, w, g_threads, 1);
        const auto* res = std::get_if<DegreeAutoResult>(&outcome);
        if (!res) {
            ss << " (" << d << "," << r << "): degenerate facet;";
            ok = false;
            continue;
        }
        const long long want = expected_degree_magnitude(d, r);
        const long long got = std::llabs(res->report.degree);
        ss << " (" << d << "," << r << "):|deg|=" << got;
        if (got != want) {
            ss << " want " << want;
            ok = false;
        }
    }
    detail = ss.str();
    return ok;
}

// ---------------------------------------------------------------------
// Criterion: census of C0 has ((r-1)!)^(d+1) placements, all with R_r = {z}.
bool special_census(std::string& detail) {
    const std::vector<std::pair<int, int>> grid = {
        {1, 2}, {1, 3}, {2, 3}, {3, 3}, {2, 4}};
    std::ostringstream ss;
    bool ok = true;
    for (auto [d, r] : grid) {
        const auto c = special_collection(d, r, default_cluster_radius(), g_threads);
        const auto census = tverberg_census(c, g_threads);
        const auto want = static_cast<std::uint64_t>(expected_degree_magnitude(d, r));
        bool z_alone = true;
        for (const auto& entry : census.tverberg) {
            const auto classes = classes_of(entry.placement, c);
            if (classes[r - 1] != std::vector<int>{c.ground_size()}) z_alone = false;
        }
        ss << " (" << d << "," << r << "):" << census.tverberg.size();
        if (census.tverberg.size() != want || !z_alone) {
            ss << " want " << want << (z_alone ? "" : " (z not alone)");
            ok = false;
        }
    }
    detail = ss.str();
    return ok;
}

// ---------------------------------------------------------------------
// Criterion: transform-space and direct-space Tverberg tests agree on 1000
// random partitions, with valid witness round-trips. Zero disagreements.
bool sarkaria_oracle(std::string& detail) {
    Rng rng(0x5a4ca61a);
    int tverberg_count = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_partition(rng);
        const auto w = make_w_basis(p.r());
        const auto hull = origin_in_hull(transform_partition(p, w));
        const auto direct = has_tverberg_point(p);
        if (hull.inside != direct.has_point) {
            detail = "disagreement at trial " + std::to_string(trial);
            return false;
        }
        if (hull.inside) {
            ++tverberg_count;
            const QVector x = tverberg_point_from_transform_witness(p, *hull.witness);
            for (const auto& cls : p.classes) {
                if (!in_convex_hull(x, cls)) {
                    detail = "witness round-trip failed at trial " +
                             std::to_string(trial);
                    return false;
                }
            }
        }
    }
    detail = "1000 partitions, " + std::to_string(tverberg_count) +
             " Tverberg, 0 disagreements";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: both dictionary equivalences on the same randomized suite.
bool dictionary(std::string& detail) {
    Rng rng(0xd1c710);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_partition(rng);
        if (has_affine_tverberg_point(p) != has_affine_tverberg_point_direct(p)) {
            detail = "equivalence (i) failed at trial " + std::to_string(trial);
            return false;
        }
        bool class_dependent = false;
        for (const auto& cls : p.classes)
            if (!affinely_independent(cls)) class_dependent = true;
        const bool rhs = class_dependent || has_tverberg_direction(p);
        if (affinely_dependent_transform(p) != rhs) {
            detail = "equivalence (ii) failed at trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "1000 partitions, both equivalences exact";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: pseudomanifold property, exhaustive for (2,3) and (2,4).
bool pseudomanifold(std::string& detail) {
    for (auto [d, r] : {std::pair{2, 3}, std::pair{2, 4}}) {
        const auto report = check_pseudomanifold(d, r);
        if (!report.ok) {
            detail = "(" + std::to_string(d) + "," + std::to_string(r) + "): " +
                     report.detail;
            return false;
        }
    }
    detail = "every ridge has exactly one partner with opposite csgn";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: csgn and gsgn both scale by sgn(pi)^(d+1) under class
// permutations; 20 collections x 216 placements x 6 permutations.
bool permutation_law(std::string& detail) {
    Rng rng(0x9e4a);
    const auto w = make_w_basis(3);
    const auto perms = all_permutations(3);
    std::vector<int> parities;
    for (const auto& pi : perms) {
        int parity = 1;
        for (std::size_t a = 0; a < pi.size(); ++a)
            for (std::size_t b = a + 1; b < pi.size(); ++b)
                if (pi[a] > pi[b]) parity = -parity;
        parities.push_back(parity);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_collection(2, 3, 1, 1000, rng, g_threads);
        for (std::uint64_t idx = 0; idx < 216; ++idx) {
            const auto p = placement_from_index(2, 3, idx);
            const int cs = combinatorial_sign(p);
            const int gs = geometric_sign(p, c, w);
            for (std::size_t k = 0; k < perms.size(); ++k) {
                const int factor = parities[k] * parities[k] * parities[k];
                const auto q = apply_permutation(p, perms[k]);
                if (combinatorial_sign(q) != factor * cs ||
                    geometric_sign(q, c, w) != factor * gs) {
                    detail = "violated at collection " + std::to_string(trial) +
                             ", placement " + std::to_string(idx);
                    return false;
                }
            }
        }
    }
    detail = "20 collections x 216 placements x 6 permutations, exact";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: 10 generic rays per collection agree on the degree, 20
// collections at (2,3).
bool ray_invariance(std::string& detail) {
    Rng rng(0x4a95);
    const auto w = make_w_basis(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_collection(2, 3, 1, 1000, rng, g_threads);
        std::optional<long long> first;
        int used = 0, attempts = 0;
        while (used < 10 && attempts < 200) {
            ++attempts;
            const QVector dir = sample_ray(rng, c.ground_size());
            const auto outcome = compute_degree(c, dir, w, g_threads);
            const auto* report = std::get_if<DegreeReport>(&outcome);
            if (!report) continue;  // non-generic sample, resample
            if (!first) first = report->degree;
            if (report->degree != *first) {
                detail = "degrees differ at collection " + std::to_string(trial);
                return false;
            }
            ++used;
        }
        if (used < 10) {
            detail = "could not find 10 generic rays";
            return false;
        }
    }
    detail = "20 collections x 10 generic rays, all degrees equal";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: degree residues mod r! are the forced constants: 2 (mod 6) for
// 100 collections at (2,3) and 0 (mod 24) for 30 collections at (2,4).
bool residue_invariance(std::string& detail) {
    Rng rng(0x4e51d);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_collection(2, 3, 1, 1000, rng, g_threads);
        const auto w = make_w_basis(3);
        const auto outcome = compute_degree_auto(c, w, g_threads, trial);
        const auto* res = std::get_if<DegreeAutoResult>(&outcome);
        if (!res || res->report.residue != 2) {
            detail = "(2,3) trial " + std::to_string(trial) + " residue " +
                     (res ? std::to_string(res->report.residue) : "n/a");
            return false;
        }
    }
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = random_collection(2, 4, 1, 1000, rng, g_threads);
        const auto w = make_w_basis(4);
        const auto outcome = compute_degree_auto(c, w, g_threads, trial);
        const auto* res = std::get_if<DegreeAutoResult>(&outcome);
        if (!res || res->report.residue != 0) {
            detail = "(2,4) trial " + std::to_string(trial) + " residue " +
                     (res ? std::to_string(res->report.residue) : "n/a");
            return false;
        }
    }
    detail = "100x(2,3) = 2 (mod 6), 30x(2,4) = 0 (mod 24)";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: the degree-zero search at (2,4) with budget 10^4 finds at least
// one collection; an empty census on a find is a research alarm, not a
// failure (it would refute the conjecture instance).
bool degree_zero_search(std::string& detail) {
    const auto log = search_degree_zero(2, 4, 10000, 20240817, g_threads);
    std::ostringstream ss;
    ss << log.found.size() << " degree-0 finds in " << log.trials << " trials";
    for (const auto& f : log.found) {
        if (f.census.tverberg.empty()) {
            ss << " | RESEARCH ALARM: trial " << f.trial
               << " has degree 0 and an EMPTY census - would refute the "
                  "Barany-Larman instance; inspect it";
        }
    }
    detail = ss.str();
    return !log.found.empty();
}

// ---------------------------------------------------------------------
// Criterion: for prime r = 3, 100 random collections each have a nonempty
// census, and the census coincides with the default-ray hit set.
bool prime_r_existence(std::string& detail) {
    Rng rng(0x94137);
    const auto w = make_w_basis(3);
    int resampled = 0;
    for (int trial = 0; trial < 100; ++trial) {
        BmzCollection c = random_collection(2, 3, 1, 1000, rng, g_threads);
        // The criterion compares against rho specifically; resample the
        // collection in the measure-zero case that rho is non-generic.
        DegreeOutcome outcome = compute_degree(c, default_ray(c, w), w, g_threads);
        while (!std::holds_alternative<DegreeReport>(outcome) && resampled < 20) {
            ++resampled;
            c = random_collection(2, 3, 1, 1000, rng, g_threads);
            outcome = compute_degree(c, default_ray(c, w), w, g_threads);
        }
        const auto* report = std::get_if<DegreeReport>(&outcome);
        if (!report) {
            detail = "could not evaluate rho on a fresh collection";
            return false;
        }
        const auto census = tverberg_census(c, g_threads);
        if (census.tverberg.empty()) {
            detail = "empty census at trial " + std::to_string(trial);
            return false;
        }
        std::set<std::uint64_t> hits, tv;
        for (const auto& h : report->hits) hits.insert(h.placement_index);
        for (const auto& e : census.tverberg) tv.insert(e.placement_index);
        if (hits != tv) {
            detail = "census and rho-hit set differ at trial " +
                     std::to_string(trial) + " (" + std::to_string(hits.size()) +
                     " vs " + std::to_string(tv.size()) + ")";
            return false;
        }
    }
    detail = "100 collections: census nonempty and equal to the rho-hit set";
    return true;
}

// ---------------------------------------------------------------------
// Criterion: 50-step motion scans from C0 to 5 random collections at r=3 and
// r=4 keep one residue across all generic samples.
bool motion_scans(std::string& detail) {
    Rng rng(0x307105);
    std::ostringstream ss;
    for (int r : {3, 4}) {
        const auto c0 = special_collection(2, r, default_cluster_radius(), g_threads);
        for (int run = 0; run < 5; ++run) {
            const auto c1 = random_collection(2, r, 1, 1000, rng, g_threads);
            MotionTrace trace;
            try {
                trace = motion_scan(c0, c1, 50, g_threads);
            } catch (const ResidueMismatchError&) {
                detail = "residue mismatch (r=" + std::to_string(r) + ", run " +
                         std::to_string(run) + ")";
                return false;
            }
            int generic = 0;
            for (const auto& s : trace.samples)
                if (s.degree) ++generic;
            if (generic < 2 || !trace.residue) {
                detail = "scan r=" + std::to_string(r) + " run " +
                         std::to_string(run) + " had fewer than 2 generic samples";
                return false;
            }
            ss << " r=" << r << "#" << run << ":" << generic << "/51 generic,res="
               << *trace.residue << ";";
        }
    }
    detail = ss.str();
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    g_threads = resolve_threads(0);
    const std::string filter = argc > 1 ? argv[1] : "";

    std::vector<Criterion> criteria = {
        {"special-degree", special_degree},
        {"special-census", special_census},
        {"sarkaria-oracle", sarkaria_oracle},
        {"dictionary", dictionary},
        {"pseudomanifold", pseudomanifold},
        {"permutation-law", permutation_law},
        {"ray-invariance", ray_invariance},
        {"residue-invariance", residue_invariance},
        {"degree-zero-search", degree_zero_search},
        {"prime-r-existence", prime_r_existence},
        {"motion-scan", motion_scans},
    };

    int failures = 0;
    for (auto& criterion : criteria) {
        if (!filter.empty() && criterion.name.find(filter) == std::string::npos)
            continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%s %-20s [%7.1fs] %s\n", ok ? "PASS" : "FAIL",
                    criterion.name.c_str(), secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
