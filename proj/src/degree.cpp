#include "bmz/degree.hpp"

#include <algorithm>

#include "bmz/linalg.hpp"
#include "bmz/parallel.hpp"
#include "engine_detail.hpp"

namespace bmz {

namespace {

using detail::ClearedRay;
using detail::CloneCache;
using detail::i128;
using detail::IMat;
using detail::ZMat;

enum class HitClass { Miss, Hit, NonGeneric };

struct HitValues {
    Rational t;
    std::vector<Rational> lambda;
};

int csgn_from_rows(const std::int8_t* rows, int d, int r) {
    int sign = 1;
    for (int k = 0; k <= d; ++k) {
        // Permutation = column rows plus the free row; parity by inversions.
        std::int8_t perm[32];
        bool used[32] = {false};
        for (int col = 0; col < r - 1; ++col) {
            perm[col] = rows[k * (r - 1) + col];
            used[perm[col]] = true;
        }
        for (int row = 0; row < r; ++row)
            if (!used[row]) perm[r - 1] = static_cast<std::int8_t>(row);
        int inversions = 0;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                if (perm[i] > perm[j]) ++inversions;
        if (inversions % 2 == 1) sign = -sign;
    }
    return sign;
}

// Back-substitution on the fraction-free triangle of the (N+1)-system with
// unknowns (lambda'_1..lambda'_N, t'). x_i = y_i / d_n with d_n the last
// pivot; only signs matter until a genuine hit needs exact values.
// Unknown N (computed first) is t'; spec precedence: t <= 0 -> Miss, then
// lambda < 0 -> Miss, then lambda = 0 -> NonGeneric, else Hit.
// ray_scale and denoms undo the clearing: t = K t', lambda_j = D_j lambda'_j.
// Element lookup is abstracted so the same loop runs on an mpz triangle or
// lazily off an __int128 one; the early exits make laziness pay.
template <typename Elem>
HitClass backsub_generic(int n, const Elem& elem, const Integer& ray_scale,
                         const std::vector<Integer>& denoms, HitValues* values,
                         std::vector<Integer>& y) {
    Integer dn;
    elem(n - 1, n - 1, dn);
    const int s = sgn(dn);
    y.resize(n);
    elem(n - 1, n, y[n - 1]);
    if (sgn(y[n - 1]) * s <= 0) return HitClass::Miss;  // t <= 0
    bool saw_zero = false;
    Integer acc, tmp, cell;
    for (int i = n - 2; i >= 0; --i) {
        elem(i, n, cell);
        mpz_mul(acc.get_mpz_t(), dn.get_mpz_t(), cell.get_mpz_t());
        for (int j = i + 1; j < n; ++j) {
            elem(i, j, cell);
            mpz_mul(tmp.get_mpz_t(), cell.get_mpz_t(), y[j].get_mpz_t());
            mpz_sub(acc.get_mpz_t(), acc.get_mpz_t(), tmp.get_mpz_t());
        }
        elem(i, i, cell);
        mpz_divexact(y[i].get_mpz_t(), acc.get_mpz_t(), cell.get_mpz_t());
        const int si = sgn(y[i]) * s;
        if (si < 0) return HitClass::Miss;
        if (si == 0) saw_zero = true;
    }
    if (saw_zero) return HitClass::NonGeneric;
    if (values) {
        values->t = Rational(ray_scale * y[n - 1], dn);
        values->t.canonicalize();
        values->lambda.resize(n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            values->lambda[i] = Rational(denoms[i] * y[i], dn);
            values->lambda[i].canonicalize();
        }
    }
    return HitClass::Hit;
}

HitClass backsub_mpz(ZMat& m, const Integer& ray_scale,
                     const std::vector<Integer>& denoms, HitValues* values) {
    std::vector<Integer> y;
    return backsub_generic(
        m.rows,
        [&m](int i, int j, Integer& out) {
            mpz_set(out.get_mpz_t(), m.at(i, j).get_mpz_t());
        },
        ray_scale, denoms, values, y);
}

void assemble_mpz(ZMat& m, const CloneCache& cache, const ClearedRay& ray,
                  const std::int8_t* rows) {
    const int N = cache.n;
    m.reset_nozero(N + 1, N + 2);
    for (int j = 0; j < N; ++j) {
        const auto& u = cache.clones_z[j][rows[j]];
        for (int mm = 0; mm < N; ++mm) m.at(mm, j) = u[mm];
        m.at(N, j) = cache.denom_z[j];
    }
    for (int mm = 0; mm < N; ++mm) {
        m.at(mm, N) = -ray.dir_z[mm];
        m.at(mm, N + 1) = 0;
    }
    m.at(N, N) = 0;
    m.at(N, N + 1) = 1;
}

void assemble_i128(IMat& m, const CloneCache& cache, const ClearedRay& ray,
                   const std::int8_t* rows) {
    const int N = cache.n;
    m.reset_nozero(N + 1, N + 2);
    for (int j = 0; j < N; ++j) {
        const auto& u = cache.clones_i[j][rows[j]];
        for (int mm = 0; mm < N; ++mm) m.at(mm, j) = u[mm];
        m.at(N, j) = cache.denom_i[j];
    }
    for (int mm = 0; mm < N; ++mm) {
        m.at(mm, N) = -ray.dir_i[mm];
        m.at(mm, N + 1) = 0;
    }
    m.at(N, N) = 0;
    m.at(N, N + 1) = 1;
}

struct EngineCtx {
    IMat im;
    ZMat zm;
    std::vector<std::int8_t> rows;
    std::vector<Integer> y;
    std::vector<detail::i128> ywide;
};

// Wide-lane classification; nullopt when a value outgrows the 128-bit
// storage, in which case the caller redoes the work in mpz.
std::optional<HitClass> classify_wide(EngineCtx& ctx, const CloneCache& cache,
                                      const ClearedRay& ray, HitValues* values) {
    const int n = cache.n + 1;
    assemble_i128(ctx.im, cache, ray, ctx.rows.data());
    const auto fw = detail::forward_wide(ctx.im);
    if (!fw) return std::nullopt;
    if (fw->singular) return HitClass::NonGeneric;
    // Same early exits as backsub_generic: t' (stored last) first, then the
    // lambdas; a negative ends it, zeros demote a hit to NonGeneric.
    ctx.ywide.resize(n);
    const int s_dn = detail::sign_i128(ctx.im.at(n - 1, n - 1));
    bool saw_zero = false;
    for (int i = n - 1; i >= 0; --i) {
        if (!detail::backsub_wide_step(ctx.im, ctx.ywide.data(), i))
            return std::nullopt;
        const int si = detail::sign_i128(ctx.ywide[i]) * s_dn;
        if (i == n - 1 && si <= 0) return HitClass::Miss;  // t <= 0
        if (i < n - 1 && si < 0) return HitClass::Miss;
        if (i < n - 1 && si == 0) saw_zero = true;
    }
    if (saw_zero) return HitClass::NonGeneric;
    if (values) {
        Integer dn, yi;
        detail::set_mpz_from_i128(dn.get_mpz_t(), ctx.im.at(n - 1, n - 1));
        detail::set_mpz_from_i128(yi.get_mpz_t(), ctx.ywide[n - 1]);
        values->t = Rational(ray.scale * yi, dn);
        values->t.canonicalize();
        values->lambda.resize(n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            detail::set_mpz_from_i128(yi.get_mpz_t(), ctx.ywide[i]);
            values->lambda[i] = Rational(cache.denom_z[i] * yi, dn);
            values->lambda[i].canonicalize();
        }
    }
    return HitClass::Hit;
}

HitClass classify(EngineCtx& ctx, const CloneCache& cache, const ClearedRay& ray,
                  HitValues* values) {
    const int n = cache.n + 1;
    if (cache.i128_ok && ray.i128_ok &&
        detail::wide_lane_viable(n, std::max(cache.max_bits, ray.max_bits))) {
        if (const auto wide = classify_wide(ctx, cache, ray, values)) return *wide;
    }
    assemble_mpz(ctx.zm, cache, ray, ctx.rows.data());
    const auto fw = detail::forward_mpz(ctx.zm);
    if (fw.singular) return HitClass::NonGeneric;
    const ZMat& zm = ctx.zm;
    return backsub_generic(
        n,
        [&zm](int i, int j, Integer& out) {
            mpz_set(out.get_mpz_t(), zm.at(i, j).get_mpz_t());
        },
        ray.scale, cache.denom_z, values, ctx.y);
}

int gsgn_from_cache(EngineCtx& ctx, const CloneCache& cache,
                    const std::int8_t* rows) {
    const int N = cache.n;
    if (cache.i128_ok && detail::wide_lane_viable(N, cache.max_bits)) {
        ctx.im.reset_nozero(N, N);
        for (int j = 0; j < N; ++j) {
            const auto& u = cache.clones_i[j][rows[j]];
            for (int mm = 0; mm < N; ++mm) ctx.im.at(j, mm) = u[mm];
        }
        if (auto s = detail::det_sign_wide(ctx.im)) return *s;
    }
    ctx.zm.reset_nozero(N, N);
    for (int j = 0; j < N; ++j) {
        const auto& u = cache.clones_z[j][rows[j]];
        for (int mm = 0; mm < N; ++mm) ctx.zm.at(j, mm) = u[mm];
    }
    return detail::det_sign_mpz(ctx.zm);
}

RookPlacement placement_from_rows(int d, int r, const std::vector<std::int8_t>& rows) {
    RookPlacement p;
    p.d = d;
    p.r = r;
    p.rows_flat = rows;
    return p;
}

}  // namespace

long long factorial_ll(int r) {
    long long f = 1;
    for (int i = 2; i <= r; ++i) f *= i;
    return f;
}

long long residue_mod(long long value, long long modulus) {
    return ((value % modulus) + modulus) % modulus;
}

Facet build_facet(const RookPlacement& p, const BmzCollection& c, const WBasis& w) {
    Facet f;
    f.placement = p;
    const int N = c.ground_size();
    f.vertices.reserve(N);
    for (int j = 0; j < N; ++j)
        f.vertices.push_back(clone_point(c.points[j], p.row_of_point(j), w));
    return f;
}

int combinatorial_sign(const RookPlacement& p) {
    return csgn_from_rows(p.rows_flat.data(), p.d, p.r);
}

int geometric_sign(const RookPlacement& p, const BmzCollection& c, const WBasis& w) {
    const int N = c.ground_size();
    QMatrix m(N, N);
    for (int j = 0; j < N; ++j)
        m.rows[j] = clone_point(c.points[j], p.row_of_point(j), w);
    return det_sign(m);
}

RayFacetResult ray_hits_facet(const QVector& dir, const Facet& f) {
    const int N = static_cast<int>(f.vertices.size());
    if (static_cast<int>(dir.size()) != N || is_zero(dir))
        throw std::invalid_argument("ray direction must be a nonzero N-vector");
    // Clear denominators: u_j = D_j v_j, dir' = K dir; lambda and t signs are
    // unchanged, values rescale back at the end.
    ZMat m;
    m.reset(N + 1, N + 2);
    std::vector<Integer> denoms(N);
    for (int j = 0; j < N; ++j) {
        Integer den = 1;
        for (const auto& q : f.vertices[j])
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
        denoms[j] = den;
        for (int mm = 0; mm < N; ++mm) {
            const Rational& q = f.vertices[j][mm];
            Integer cell;
            mpz_divexact(cell.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
            cell *= q.get_num();
            m.at(mm, j) = cell;
        }
        m.at(N, j) = den;
    }
    Integer k = 1;
    for (const auto& q : dir)
        mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), q.get_den().get_mpz_t());
    for (int mm = 0; mm < N; ++mm) {
        Integer cell;
        mpz_divexact(cell.get_mpz_t(), k.get_mpz_t(), dir[mm].get_den().get_mpz_t());
        cell *= dir[mm].get_num();
        m.at(mm, N) = -cell;
    }
    m.at(N, N + 1) = 1;

    const auto fw = detail::forward_mpz(m);
    if (fw.singular) return {RayFacetStatus::NonGeneric, std::nullopt};

    HitValues values;
    switch (backsub_mpz(m, k, denoms, &values)) {
        case HitClass::Miss:
            return {RayFacetStatus::Miss, std::nullopt};
        case HitClass::NonGeneric:
            return {RayFacetStatus::NonGeneric, std::nullopt};
        case HitClass::Hit:
            break;
    }
    return {RayFacetStatus::Hit, RayHit{values.t, values.lambda}};
}

QVector default_ray(const BmzCollection& c, const WBasis& w) {
    QVector zstar = clone_point(c.z(), c.r - 1, w);
    for (auto& q : zstar) q = -q;
    return zstar;
}

QVector sample_ray(Rng& rng, int n) {
    for (;;) {
        QVector dir(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            const long long v = rng.int_in(-1000, 1000);
            dir[i] = rat(v);
            if (v != 0) nonzero = true;
        }
        if (nonzero) return dir;
    }
}

DegreeOutcome compute_degree(const BmzCollection& c, const QVector& ray,
                             const WBasis& w, int threads) {
    {
        const auto violations = validate_collection(c);
        if (!violations.empty())
            throw std::invalid_argument("invalid collection: " + violations.front());
    }
    if (w.r != c.r) throw std::invalid_argument("w basis r mismatch");
    const int N = c.ground_size();
    if (static_cast<int>(ray.size()) != N || is_zero(ray))
        throw std::invalid_argument("ray must be a nonzero N-vector");
    const auto total_opt = placement_count(c.d, c.r);
    if (!total_opt) throw std::invalid_argument("placement count exceeds uint64");
    const std::uint64_t total = *total_opt;

    const CloneCache cache = CloneCache::build(c, w);
    const ClearedRay cray = ClearedRay::build(ray);

    struct WorkerOut {
        long long sum = 0;
        std::vector<DegreeHit> hits;
        std::optional<DegreeError> error;
    };
    std::vector<WorkerOut> outs(std::max(threads, 1));

    parallel_ranges(total, threads, [&](int worker, std::uint64_t lo, std::uint64_t hi) {
        EngineCtx ctx;
        ctx.rows.resize(static_cast<std::size_t>(N));
        WorkerOut& out = outs[worker];
        HitValues values;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            placement_rows_from_index(c.d, c.r, idx, ctx.rows.data());
            const HitClass hc = classify(ctx, cache, cray, &values);
            if (hc == HitClass::Miss) continue;
            if (hc == HitClass::NonGeneric) {
                out.error = DegreeError{DegreeFailure::NonGenericRay, idx,
                                        placement_from_rows(c.d, c.r, ctx.rows)};
                return;  // first error in this ascending range is minimal
            }
            const int gsgn = gsgn_from_cache(ctx, cache, ctx.rows.data());
            if (gsgn == 0) {
                out.error = DegreeError{DegreeFailure::DegenerateFacet, idx,
                                        placement_from_rows(c.d, c.r, ctx.rows)};
                return;
            }
            const int csgn = csgn_from_rows(ctx.rows.data(), c.d, c.r);
            DegreeHit hit;
            hit.placement_index = idx;
            hit.placement = placement_from_rows(c.d, c.r, ctx.rows);
            hit.signs = Signs{csgn, gsgn, csgn * gsgn};
            hit.hit = RayHit{values.t, values.lambda};
            out.sum += hit.signs.sgn;
            out.hits.push_back(std::move(hit));
        }
    });

    std::optional<DegreeError> error;
    for (const auto& out : outs)
        if (out.error && (!error || out.error->placement_index < error->placement_index))
            error = out.error;
    if (error) return *error;

    DegreeReport report;
    report.ray_direction = ray;
    report.modulus = factorial_ll(c.r);
    for (auto& out : outs) {
        report.degree += out.sum;
        for (auto& h : out.hits) report.hits.push_back(std::move(h));
    }
    report.residue = residue_mod(report.degree, report.modulus);
    return report;
}

std::variant<DegreeAutoResult, DegreeError> compute_degree_auto(
    const BmzCollection& c, const WBasis& w, int threads,
    std::uint64_t ray_seed, int max_ray_attempts, bool start_with_default) {
    Rng rng(ray_seed);
    QVector dir =
        start_with_default ? default_ray(c, w) : sample_ray(rng, c.ground_size());
    for (int attempt = 1; attempt <= max_ray_attempts; ++attempt) {
        DegreeOutcome outcome = compute_degree(c, dir, w, threads);
        if (auto* report = std::get_if<DegreeReport>(&outcome)) {
            return DegreeAutoResult{
                std::move(*report),
                RaySelection{dir, start_with_default && attempt == 1, attempt}};
        }
        const auto& err = std::get<DegreeError>(outcome);
        if (err.failure == DegreeFailure::DegenerateFacet) return err;
        dir = sample_ray(rng, c.ground_size());
    }
    throw ExhaustedRetriesError(
        "no generic ray found; the collection is likely near-degenerate");
}

RookPlacement ridge_partner(const RookPlacement& p, int dropped_point) {
    const int r = p.r;
    const int board = p.board_of_point(dropped_point);
    // The board's unique rook-free row; after the drop the column has two
    // legal rows, the current one and this one.
    bool used[32] = {false};
    for (int col = 0; col < r - 1; ++col) used[p.row(board, col)] = true;
    int free_row = -1;
    for (int row = 0; row < r; ++row)
        if (!used[row]) free_row = row;
    RookPlacement q = p;
    q.rows_flat[dropped_point] = static_cast<std::int8_t>(free_row);
    return q;
}

PseudomanifoldReport check_pseudomanifold(int d, int r, std::uint64_t budget) {
    const auto total_opt = placement_count(d, r);
    if (!total_opt || *total_opt > budget)
        throw std::invalid_argument("placement count exceeds the pseudomanifold budget");
    const std::uint64_t total = *total_opt;
    const int N = (d + 1) * (r - 1);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const RookPlacement p = placement_from_index(d, r, idx);
        const int csgn_p = combinatorial_sign(p);
        for (int j = 0; j < N; ++j) {
            // All ways to refill the dropped rook's column without attacks;
            // the ridge is shared by exactly these placements.
            const int board = p.board_of_point(j);
            std::vector<int> refills;
            for (int row = 0; row < r; ++row) {
                bool attacked = false;
                for (int col = 0; col < r - 1; ++col) {
                    if (board * (r - 1) + col == j) continue;
                    if (p.row(board, col) == row) attacked = true;
                }
                if (!attacked) refills.push_back(row);
            }
            if (refills.size() != 2)
                return {false, "ridge of placement " + std::to_string(idx) +
                                   " at point " + std::to_string(j + 1) + " has " +
                                   std::to_string(refills.size()) + " facets"};
            const RookPlacement q = ridge_partner(p, j);
            if (q == p)
                return {false, "partner equals the placement itself at index " +
                                   std::to_string(idx)};
            if (q.row_of_point(j) != refills[0] && q.row_of_point(j) != refills[1])
                return {false, "partner is not one of the two legal refills"};
            if (combinatorial_sign(q) != -csgn_p)
                return {false, "combinatorial sign does not flip at index " +
                                   std::to_string(idx) + ", point " +
                                   std::to_string(j + 1)};
            if (!(ridge_partner(q, j) == p))
                return {false, "partnering is not an involution at index " +
                                   std::to_string(idx)};
        }
    }
    return {true, ""};
}

}  // namespace bmz
