#include "bmz/experiments.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "bmz/linalg.hpp"
#include "bmz/lp.hpp"
#include "bmz/parallel.hpp"

namespace bmz {

namespace {

RPartition partition_of_placement(const RookPlacement& p, const BmzCollection& c) {
    RPartition part;
    part.d = c.d;
    part.classes.resize(p.r);
    const auto classes = classes_of(p, c);
    for (int i = 0; i < p.r; ++i)
        for (int j : classes[i]) part.classes[i].push_back(c.points[j]);
    return part;
}

bool any_class_empty(const std::int8_t* rows, int n, int r) {
    bool seen[32] = {false};
    for (int j = 0; j < n; ++j) seen[rows[j]] = true;
    seen[r - 1] = true;  // z
    for (int i = 0; i < r; ++i)
        if (!seen[i]) return true;
    return false;
}

}  // namespace

Rational default_cluster_radius() { return rat(1, 100); }

BmzCollection special_collection(int d, int r, const Rational& radius,
                                 int threads, int max_retries) {
    if (d < 1 || r < 2) throw std::invalid_argument("need d >= 1, r >= 2");
    if (sgn(radius) <= 0) throw std::invalid_argument("radius must be positive");
    const WBasis w = make_w_basis(r);
    constexpr long kGrid = 64;

    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Rng rng(Rng::derive(0x5bec1a1c0dedULL + static_cast<std::uint64_t>(attempt),
                            (static_cast<std::uint64_t>(d) << 8) |
                                static_cast<std::uint64_t>(r)));
        BmzCollection c;
        c.d = d;
        c.r = r;
        // Base vertices e_1..e_d and the origin; cluster k sits at vertex k.
        for (int k = 0; k <= d; ++k) {
            for (int m = 0; m < r - 1; ++m) {
                QVector pt(d, Rational(0));
                if (k < d) pt[k] = 1;
                for (int t = 0; t < d; ++t) {
                    const Rational jitter = rat(rng.int_in(-kGrid, kGrid), kGrid);
                    pt[t] += radius * jitter;
                }
                c.points.push_back(std::move(pt));
            }
        }
        QVector z(d, rat(1, d + 1));  // barycenter of the base vertices
        c.points.push_back(std::move(z));
        if (!validate_collection(c).empty()) continue;
        GenPosOptions opts;
        opts.threads = threads;
        const auto report = check_sufficient(c, w, opts);
        if (report.sufficiently_general && *report.sufficiently_general) return c;
    }
    throw ExhaustedRetriesError("special_collection: no offset assignment passed "
                                "the general-position check at this radius");
}

BmzCollection random_collection(int d, int r, long coord_bound, long denom_bound,
                                Rng& rng, int threads, int max_retries) {
    if (coord_bound < 1 || denom_bound < 1)
        throw std::invalid_argument("bounds must be positive");
    const WBasis w = make_w_basis(r);
    const int total = (d + 1) * (r - 1) + 1;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        BmzCollection c;
        c.d = d;
        c.r = r;
        for (int j = 0; j < total; ++j) {
            QVector pt(d);
            for (int m = 0; m < d; ++m) {
                pt[m] = rat(rng.int_in(0, coord_bound * denom_bound), denom_bound);
            }
            c.points.push_back(std::move(pt));
        }
        if (!validate_collection(c).empty()) continue;
        GenPosOptions opts;
        opts.threads = threads;
        const auto report = check_sufficient(c, w, opts);
        if (report.sufficiently_general && *report.sufficiently_general) return c;
    }
    throw ExhaustedRetriesError("random_collection kept failing the "
                                "general-position check");
}

CensusResult tverberg_census(const BmzCollection& c, int threads) {
    {
        const auto violations = validate_collection(c);
        if (!violations.empty())
            throw std::invalid_argument("invalid collection: " + violations.front());
    }
    const auto total_opt = placement_count(c.d, c.r);
    if (!total_opt || *total_opt > 50'000'000ULL)
        throw BudgetExceededError("census enumeration out of budget");
    const std::uint64_t total = *total_opt;
    const int n = c.ground_size();

    std::vector<std::vector<CensusEntry>> per_worker(std::max(threads, 1));
    parallel_ranges(total, threads, [&](int worker, std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::int8_t> rows(static_cast<std::size_t>(n));
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            placement_rows_from_index(c.d, c.r, idx, rows.data());
            if (any_class_empty(rows.data(), n, c.r)) continue;
            RookPlacement p;
            p.d = c.d;
            p.r = c.r;
            p.rows_flat = rows;
            const auto res = has_tverberg_point(partition_of_placement(p, c));
            if (res.has_point)
                per_worker[worker].push_back(CensusEntry{idx, p, *res.point});
        }
    });

    CensusResult out;
    for (auto& list : per_worker)
        for (auto& e : list) out.tverberg.push_back(std::move(e));
    std::sort(out.tverberg.begin(), out.tverberg.end(),
              [](const CensusEntry& a, const CensusEntry& b) {
                  return a.placement_index < b.placement_index;
              });
    std::set<std::vector<std::int8_t>> reps;
    for (const auto& e : out.tverberg)
        reps.insert(equivalence_class_representative(e.placement).rows_flat);
    out.class_count = reps.size();
    out.classes_fully_tverberg =
        out.tverberg.size() ==
        reps.size() * static_cast<std::uint64_t>(factorial_ll(c.r));
    return out;
}

SearchLog search_degree_zero(int d, int r, std::uint64_t budget,
                             std::uint64_t seed, int threads, long coord_bound,
                             long denom_bound) {
    const WBasis w = make_w_basis(r);
    const int total_points = (d + 1) * (r - 1) + 1;

    struct Candidate {
        std::uint64_t trial;
        BmzCollection collection;
        DegreeReport report;
    };
    std::vector<Candidate> candidates;
    std::mutex mutex;
    std::uint64_t skipped = 0;

    parallel_ranges(budget, threads, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            Rng rng(Rng::derive(seed, trial));
            BmzCollection c;
            c.d = d;
            c.r = r;
            for (int j = 0; j < total_points; ++j) {
                QVector pt(d);
                for (int m = 0; m < d; ++m) {
                    pt[m] = rat(rng.int_in(0, coord_bound * denom_bound), denom_bound);
                }
                c.points.push_back(std::move(pt));
            }
            if (!validate_collection(c).empty()) {
                std::lock_guard<std::mutex> lock(mutex);
                ++skipped;
                continue;
            }
            // Degeneracy is caught en route (non-generic rays, zero signs);
            // the exhaustive position check runs only on degree-0 finds.
            try {
                auto outcome = compute_degree_auto(c, w, 1, Rng::derive(seed, trial) ^ 1);
                if (auto* res = std::get_if<DegreeAutoResult>(&outcome)) {
                    if (res->report.degree == 0) {
                        std::lock_guard<std::mutex> lock(mutex);
                        candidates.push_back(
                            Candidate{trial, std::move(c), std::move(res->report)});
                    }
                } else {
                    std::lock_guard<std::mutex> lock(mutex);
                    ++skipped;
                }
            } catch (const ExhaustedRetriesError&) {
                std::lock_guard<std::mutex> lock(mutex);
                ++skipped;
            }
        }
    });

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.trial < b.trial; });

    SearchLog log;
    log.seed = seed;
    log.trials = budget;
    for (auto& cand : candidates) {
        GenPosOptions opts;
        opts.threads = threads;
        try {
            const auto report = check_sufficient(cand.collection, w, opts);
            if (!(report.sufficiently_general && *report.sufficiently_general)) {
                ++log.skipped;
                continue;
            }
            SearchFind find;
            find.trial = cand.trial;
            find.census = tverberg_census(cand.collection, threads);
            find.collection = std::move(cand.collection);
            find.report = std::move(cand.report);
            log.found.push_back(std::move(find));
        } catch (const BudgetExceededError&) {
            // Too large to verify exhaustively (r = 6 benchmark territory);
            // keep the candidate rather than lose a potential artifact.
            log.unverified.push_back(UnverifiedFind{
                cand.trial, std::move(cand.collection), std::move(cand.report)});
        }
    }
    log.skipped += skipped;
    return log;
}

MotionTrace motion_scan(const BmzCollection& c0, const BmzCollection& c1,
                        int steps, int threads) {
    if (c0.d != c1.d || c0.r != c1.r)
        throw std::invalid_argument("motion endpoints must share (d, r)");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    const WBasis w = make_w_basis(c0.r);

    MotionTrace trace;
    trace.modulus = factorial_ll(c0.r);
    for (int k = 0; k <= steps; ++k) {
        const Rational t = rat(k, steps);
        BmzCollection c;
        c.d = c0.d;
        c.r = c0.r;
        for (int j = 0; j < c0.total_points(); ++j) {
            QVector pt(c0.d);
            for (int m = 0; m < c0.d; ++m)
                pt[m] = (Rational(1) - t) * c0.points[j][m] + t * c1.points[j][m];
            c.points.push_back(std::move(pt));
        }
        MotionSample sample;
        sample.t = t;
        bool generic = validate_collection(c).empty();
        if (generic) {
            GenPosOptions opts;
            opts.threads = threads;
            const auto report = check_sufficient(c, w, opts);
            generic = report.sufficiently_general && *report.sufficiently_general;
        }
        sample.sufficiently_general = generic;
        if (generic) {
            auto outcome = compute_degree_auto(c, w, threads,
                                               0xa11ce ^ static_cast<std::uint64_t>(k));
            if (auto* res = std::get_if<DegreeAutoResult>(&outcome)) {
                sample.degree = res->report.degree;
                sample.residue = res->report.residue;
                if (!trace.residue) {
                    trace.residue = sample.residue;
                } else if (*trace.residue != *sample.residue) {
                    throw ResidueMismatchError(
                        "motion scan found samples with different degree "
                        "residues mod r!; this would falsify the invariance "
                        "and indicates an implementation bug");
                }
            } else {
                sample.sufficiently_general = false;  // degenerate facet en route
            }
        }
        trace.samples.push_back(std::move(sample));
    }
    return trace;
}

std::optional<ColoredSolveResult> solve_colored_tverberg(
    const std::vector<std::vector<QVector>>& classes,
    const std::optional<QVector>& z_hint, int threads) {
    if (classes.empty()) throw WrongShapeError("no color classes given");
    const std::size_t r0 = classes.front().size();
    if (r0 < 1) throw WrongShapeError("color classes must be nonempty");
    const int d = static_cast<int>(classes.size()) - 1;
    if (d < 1) throw WrongShapeError("need d+1 >= 2 color classes");
    for (const auto& cls : classes) {
        if (cls.size() != r0)
            throw WrongShapeError("color classes must share one size");
        for (const auto& pt : cls)
            if (static_cast<int>(pt.size()) != d)
                throw WrongShapeError("points must have dimension d = classes-1");
    }
    const int r = static_cast<int>(r0) + 1;

    BmzCollection c;
    c.d = d;
    c.r = r;
    for (const auto& cls : classes)
        for (const auto& pt : cls) c.points.push_back(pt);

    QVector z;
    if (z_hint) {
        if (static_cast<int>(z_hint->size()) != d)
            throw WrongShapeError("z hint has the wrong dimension");
        z = *z_hint;
    } else {
        z.assign(d, Rational(0));
        for (const auto& pt : c.points)
            for (int m = 0; m < d; ++m) z[m] += pt[m];
        const Rational inv = rat(1, static_cast<long long>(c.points.size()));
        for (int m = 0; m < d; ++m) z[m] *= inv;
    }
    // Keep z distinct from the ground points (a degenerate but legal input).
    for (int nudge = 0; nudge < 64; ++nudge) {
        bool clash = false;
        for (const auto& pt : c.points)
            if (pt == z) clash = true;
        if (!clash) break;
        for (int m = 0; m < d; ++m) z[m] += rat(1 + nudge, 9973 * (m + 1));
    }
    c.points.push_back(z);
    if (!validate_collection(c).empty()) return std::nullopt;

    const auto total_opt = placement_count(d, r);
    if (!total_opt || *total_opt > 50'000'000ULL)
        throw BudgetExceededError("colored solve enumeration out of budget");
    (void)threads;

    const int n = c.ground_size();
    std::vector<std::int8_t> rows(static_cast<std::size_t>(n));
    for (std::uint64_t idx = 0; idx < *total_opt; ++idx) {
        placement_rows_from_index(d, r, idx, rows.data());
        if (any_class_empty(rows.data(), n, r)) continue;
        RookPlacement p;
        p.d = d;
        p.r = r;
        p.rows_flat = rows;
        const auto res = has_tverberg_point(partition_of_placement(p, c));
        if (!res.has_point) continue;

        ColoredSolveResult out;
        out.collection = c;
        out.placement = p;
        out.witness = *res.point;
        const auto point_classes = classes_of(p, c);
        for (int i = 0; i + 1 < r; ++i) {  // delete the class containing z
            out.class_indices.push_back(point_classes[i]);
            std::vector<QVector> pts;
            for (int j : point_classes[i]) pts.push_back(c.points[j]);
            out.class_points.push_back(std::move(pts));
        }
        // Exact membership recheck of the witness in every surviving hull.
        for (const auto& pts : out.class_points)
            if (!in_convex_hull(out.witness, pts))
                throw std::logic_error("witness failed the exact membership recheck");
        return out;
    }
    return std::nullopt;
}

namespace {

int orient(const QVector& a, const QVector& b, const QVector& s) {
    QMatrix m(2, 2);
    m.at(0, 0) = b[0] - a[0];
    m.at(0, 1) = b[1] - a[1];
    m.at(1, 0) = s[0] - a[0];
    m.at(1, 1) = s[1] - a[1];
    return det_sign(m);
}

QVector line_coeffs(const QVector& p, const QVector& q) {
    return QVector{p[1] - q[1], q[0] - p[0], p[0] * q[1] - p[1] * q[0]};
}

}  // namespace

SignCaseReport sign_case_study(const BmzCollection& c, int case_id) {
    if (c.d != 2 || c.r != 3)
        throw WrongShapeError("sign case studies need d = 2, r = 3");
    {
        const auto violations = validate_collection(c);
        if (!violations.empty())
            throw std::invalid_argument("invalid collection: " + violations.front());
    }
    const WBasis w = make_w_basis(3);
    SignCaseReport report;
    report.case_id = case_id;
    RookPlacement p;
    p.d = 2;
    p.r = 3;
    const auto& pts = c.points;
    switch (case_id) {
        case 1:  // R1 = {c1,c3,c5}, R2 = {c2,c4,c6}, R3 = {z}
            p.rows_flat = {0, 1, 0, 1, 0, 1};
            report.predicates.push_back({"orient(c1,c3,c5)", orient(pts[0], pts[2], pts[4])});
            report.predicates.push_back({"orient(c2,c4,c6)", orient(pts[1], pts[3], pts[5])});
            break;
        case 2:  // R1 = {c1,c3,c6}, R2 = {c2,c4}, R3 = {c5,z}
            p.rows_flat = {0, 1, 0, 1, 2, 0};
            report.predicates.push_back({"orient(c1,c3,c6)", orient(pts[0], pts[2], pts[5])});
            report.predicates.push_back({"orient(c2,c4,c5)", orient(pts[1], pts[3], pts[4])});
            break;
        case 3: {  // R1 = {c2,c5}, R2 = {c4,c6}, R3 = {c1,c3,z}
            p.rows_flat = {2, 0, 2, 1, 0, 1};
            report.predicates.push_back({"orient(c2,c5,z)", orient(pts[1], pts[4], c.z())});
            report.predicates.push_back({"orient(c4,c6,z)", orient(pts[3], pts[5], c.z())});
            report.predicates.push_back({"orient(c1,c3,z)", orient(pts[0], pts[2], c.z())});
            QMatrix lines(3, 3);
            lines.rows[0] = line_coeffs(pts[1], pts[4]);
            lines.rows[1] = line_coeffs(pts[3], pts[5]);
            lines.rows[2] = line_coeffs(pts[0], pts[2]);
            report.predicates.push_back({"concurrency(c2c5,c4c6,c1c3)", det_sign(lines)});
            break;
        }
        default:
            throw std::invalid_argument("case must be 1, 2 or 3");
    }
    report.placement = p;
    report.signs.csgn = combinatorial_sign(p);
    report.signs.gsgn = geometric_sign(p, c, w);
    report.signs.sgn = report.signs.csgn * report.signs.gsgn;

    const Facet facet = build_facet(p, c, w);
    report.dictionary_condition = !affinely_independent(facet.vertices) ||
                                  origin_in_affine_hull(facet.vertices);
    report.sign_zero_iff_condition =
        (report.signs.sgn == 0) == report.dictionary_condition;
    return report;
}

}  // namespace bmz
