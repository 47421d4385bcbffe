#include "bmz/genpos.hpp"

#include <mutex>

#include "bmz/degree.hpp"
#include "bmz/lp.hpp"
#include "bmz/parallel.hpp"
#include "engine_detail.hpp"

namespace bmz {

namespace {

using detail::CloneCache;
using detail::IMat;
using detail::ZMat;

void require_valid(const BmzCollection& c, const WBasis& w) {
    const auto violations = validate_collection(c);
    if (!violations.empty())
        throw std::invalid_argument("invalid collection: " + violations.front());
    if (w.r != c.r) throw std::invalid_argument("w basis r mismatch");
}

// Rank of the clone matrix of all points except `dropped`, and of its
// homogenization, using each point's current clone row (z's is always r-1).
std::pair<int, int> ranks_without(const CloneCache& cache,
                                  const std::int8_t* rows, int dropped,
                                  IMat& im, ZMat& zm) {
    const int N = cache.n;
    const int total = N + 1;
    if (cache.i128_ok && detail::wide_lane_viable(N, cache.max_bits)) {
        im.reset(total - 1, N + 1);
        int out = 0;
        for (int j = 0; j < total; ++j) {
            if (j == dropped) continue;
            const int clone = j == N ? cache.r - 1 : rows[j];
            const auto& u = cache.clones_i[j][clone];
            for (int m = 0; m < N; ++m) im.at(out, m) = u[m];
            im.at(out, N) = cache.denom_i[j];
            ++out;
        }
        if (auto res = detail::rank_aug_wide(im)) return *res;
    }
    zm.reset(total - 1, N + 1);
    int out = 0;
    for (int j = 0; j < total; ++j) {
        if (j == dropped) continue;
        const int clone = j == N ? cache.r - 1 : rows[j];
        const auto& u = cache.clones_z[j][clone];
        for (int m = 0; m < N; ++m) zm.at(out, m) = u[m];
        zm.at(out, N) = cache.denom_z[j];
        ++out;
    }
    return detail::rank_aug_mpz(zm);
}

// Free row of the board owning ground point j (the partner refill row).
int free_row_of(const std::int8_t* rows, int d, int r, int j) {
    const int board = j / (r - 1);
    bool used[32] = {false};
    for (int col = 0; col < r - 1; ++col) used[rows[board * (r - 1) + col]] = true;
    for (int row = 0; row < r; ++row)
        if (!used[row]) return row;
    return -1;
}

struct ViolationSink {
    std::mutex mutex;
    std::vector<GenPosViolation> list;
    std::uint64_t count = 0;
    std::size_t cap;

    explicit ViolationSink(std::size_t cap_) : cap(cap_) {}

    void add(GenPosViolation v) {
        std::lock_guard<std::mutex> lock(mutex);
        ++count;
        if (list.size() < cap) list.push_back(std::move(v));
    }
};

RookPlacement make_placement(int d, int r, const std::int8_t* rows) {
    RookPlacement p;
    p.d = d;
    p.r = r;
    p.rows_flat.assign(rows, rows + (d + 1) * (r - 1));
    return p;
}

}  // namespace

GenPosReport check_sufficient(const BmzCollection& c, const WBasis& w,
                              const GenPosOptions& opts) {
    require_valid(c, w);
    const int N = c.ground_size();
    const auto total_opt = placement_count(c.d, c.r);
    if (!total_opt || *total_opt > opts.budget / (static_cast<std::uint64_t>(N) + 2))
        throw BudgetExceededError(
            "sufficient-position check over budget: (r!)^(d+1) placements x (N+2) "
            "rank tests exceed " +
            std::to_string(opts.budget));
    const std::uint64_t total = *total_opt;
    const CloneCache cache = CloneCache::build(c, w);
    ViolationSink sink(opts.max_recorded_violations);

    parallel_ranges(total, opts.threads, [&](int, std::uint64_t lo, std::uint64_t hi) {
        IMat im;
        ZMat zm;
        std::vector<std::int8_t> rows(static_cast<std::size_t>(N));
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            placement_rows_from_index(c.d, c.r, idx, rows.data());
            // a = z: one elimination answers both the facet-simplex condition
            // and the origin-avoidance of its span.
            auto [rp, rh] = ranks_without(cache, rows.data(), N, im, zm);
            if (rh < N)
                sink.add({idx, make_placement(c.d, c.r, rows.data()),
                          "facet-degenerate", 0});
            if (rh == rp + 1)
                sink.add({idx, make_placement(c.d, c.r, rows.data()),
                          "origin-in-facet-span", N + 1});
            for (int a = 0; a < N; ++a) {
                // The matrix ignores a's row, so this placement and its ridge
                // partner share it; let the lexicographically smaller side do
                // the work and report for both.
                const int partner_row = free_row_of(rows.data(), c.d, c.r, a);
                if (partner_row < rows[a]) continue;
                auto [rpa, rha] = ranks_without(cache, rows.data(), a, im, zm);
                if (rha == rpa + 1) {
                    sink.add({idx, make_placement(c.d, c.r, rows.data()),
                              "origin-in-facet-span", a + 1});
                    auto partner = make_placement(c.d, c.r, rows.data());
                    partner.rows_flat[a] = static_cast<std::int8_t>(partner_row);
                    sink.add({index_of_placement(partner), std::move(partner),
                              "origin-in-facet-span", a + 1});
                }
            }
        }
    });

    GenPosReport report;
    report.violation_count = sink.count;
    report.violations = std::move(sink.list);
    report.sufficiently_general = sink.count == 0;
    if (sink.count == 0) report.almost_general = true;
    return report;
}

GenPosReport check_almost(const BmzCollection& c, const WBasis& w,
                          const GenPosOptions& opts) {
    require_valid(c, w);
    const int N = c.ground_size();
    const auto total_opt = placement_count(c.d, c.r);
    if (!total_opt || *total_opt > opts.budget / (static_cast<std::uint64_t>(N) + 2))
        throw BudgetExceededError("almost-position check over budget");
    const std::uint64_t total = *total_opt;
    const CloneCache cache = CloneCache::build(c, w);
    ViolationSink sink(opts.max_recorded_violations);

    parallel_ranges(total, opts.threads, [&](int, std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::int8_t> rows(static_cast<std::size_t>(N));
        std::vector<QVector> ridge;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            placement_rows_from_index(c.d, c.r, idx, rows.data());
            for (int a = 0; a < N; ++a) {
                const int partner_row = free_row_of(rows.data(), c.d, c.r, a);
                if (partner_row < rows[a]) continue;
                ridge.clear();
                for (int j = 0; j < N; ++j)
                    if (j != a) ridge.push_back(cache.clones_q[j][rows[j]]);
                if (origin_in_hull(ridge).inside) {
                    sink.add({idx, make_placement(c.d, c.r, rows.data()),
                              "origin-in-ridge", a + 1});
                    auto partner = make_placement(c.d, c.r, rows.data());
                    partner.rows_flat[a] = static_cast<std::int8_t>(partner_row);
                    sink.add({index_of_placement(partner), std::move(partner),
                              "origin-in-ridge", a + 1});
                }
            }
        }
    });

    GenPosReport report;
    report.violation_count = sink.count;
    report.violations = std::move(sink.list);
    report.almost_general = sink.count == 0;
    return report;
}

BmzCollection perturb(const BmzCollection& c, const Rational& epsilon, Rng& rng,
                      const PerturbOptions& opts) {
    if (sgn(epsilon) <= 0) throw std::invalid_argument("epsilon must be positive");
    const WBasis w = make_w_basis(c.r);
    GenPosOptions gopts;
    gopts.threads = opts.threads;

    // Zero jitter is allowed: an already-general collection passes through.
    if (validate_collection(c).empty()) {
        const auto report = check_sufficient(c, w, gopts);
        if (report.sufficiently_general && *report.sufficiently_general) return c;
    }

    // Effective grid: at least two jitter steps inside [-eps, eps], with the
    // denominator bound keeping downstream determinant bit-lengths in check.
    Integer q_eff(static_cast<unsigned long>(opts.jitter_denom));
    {
        Integer need;  // ceil(2 / eps)
        const Integer twice_den = 2 * epsilon.get_den();
        mpz_cdiv_q(need.get_mpz_t(), twice_den.get_mpz_t(),
                   epsilon.get_num().get_mpz_t());
        if (need > q_eff) q_eff = need;
    }
    const Rational scaled = epsilon * Rational(q_eff);
    const Integer steps_z = scaled.get_num() / scaled.get_den();
    const long long steps = steps_z.get_si();

    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
        BmzCollection jittered = c;
        for (auto& point : jittered.points) {
            for (auto& coord : point) {
                const long k = static_cast<long>(rng.int_in(-steps, steps));
                Rational delta(Integer(k), q_eff);
                delta.canonicalize();
                coord += delta;
            }
        }
        if (!validate_collection(jittered).empty()) continue;
        const auto report = check_sufficient(jittered, w, gopts);
        if (report.sufficiently_general && *report.sufficiently_general)
            return jittered;
    }
    throw ExhaustedRetriesError("perturb failed to reach general position");
}

}  // namespace bmz
