#include "bmz/transform.hpp"

#include "bmz/linalg.hpp"
#include "bmz/lp.hpp"

namespace bmz {

WBasis make_w_basis(int r) {
    if (r < 2) throw std::invalid_argument("w basis needs r >= 2");
    WBasis w;
    w.r = r;
    w.vectors.assign(r, QVector(r - 1, Rational(-1)));
    for (int i = 0; i + 1 < r; ++i) w.vectors[i][i] += r;
    return w;
}

QVector clone_point(const QVector& x, int clone_index, const WBasis& w) {
    const int d = static_cast<int>(x.size());
    const QVector& wi = w.vectors.at(clone_index);
    QVector out;
    out.reserve(static_cast<std::size_t>(d + 1) * (w.r - 1));
    for (int m = 0; m <= d; ++m) {
        const Rational um = m < d ? x[m] : Rational(1);
        for (int b = 0; b < w.r - 1; ++b) out.push_back(um * wi[b]);
    }
    return out;
}

std::vector<QVector> transform_partition(const RPartition& p, const WBasis& w) {
    std::vector<QVector> out;
    for (int i = 0; i < p.r(); ++i)
        for (const auto& pt : p.classes[i]) out.push_back(clone_point(pt, i, w));
    return out;
}

HullMembership origin_in_hull(const std::vector<QVector>& points) {
    auto coeffs = origin_hull_coefficients(points);
    if (!coeffs) return {false, std::nullopt};
    return {true, ConvexWitness{*coeffs}};
}

namespace {

void require_nonempty(const RPartition& p) {
    for (const auto& cls : p.classes)
        if (cls.empty()) throw EmptyClassError("partition has an empty class");
}

}  // namespace

TverbergPointResult has_tverberg_point(const RPartition& p) {
    require_nonempty(p);
    const int d = p.d, r = p.r();
    std::size_t n = 0;
    for (const auto& cls : p.classes) n += cls.size();
    // Variables: convex coefficients per class, then x = x+ - x- split.
    const std::size_t cols = n + 2 * static_cast<std::size_t>(d);
    const std::size_t rows = static_cast<std::size_t>(r) * (d + 1);
    QMatrix a(rows, cols);
    QVector b(rows, Rational(0));
    std::size_t col = 0;
    for (int i = 0; i < r; ++i) {
        for (const auto& pt : p.classes[i]) {
            for (int m = 0; m < d; ++m) a.at(i * (d + 1) + m, col) = pt[m];
            a.at(i * (d + 1) + d, col) = 1;
            ++col;
        }
    }
    for (int i = 0; i < r; ++i) {
        for (int m = 0; m < d; ++m) {
            a.at(i * (d + 1) + m, n + m) = -1;
            a.at(i * (d + 1) + m, n + d + m) = 1;
        }
        b[i * (d + 1) + d] = 1;
    }
    auto sol = lp_nonneg_solve(a, b);
    if (!sol) return {false, std::nullopt};
    QVector x(d);
    for (int m = 0; m < d; ++m) x[m] = (*sol)[n + m] - (*sol)[n + d + m];
    return {true, x};
}

bool has_affine_tverberg_point(const RPartition& p) {
    require_nonempty(p);
    const WBasis w = make_w_basis(p.r());
    return origin_in_affine_hull(transform_partition(p, w));
}

bool has_affine_tverberg_point_direct(const RPartition& p) {
    require_nonempty(p);
    const int d = p.d, r = p.r();
    // beta_{i,p} with sum_p beta_{i,p} = 1 and sum_p beta_{i,p} p = x; x free.
    std::size_t n = 0;
    for (const auto& cls : p.classes) n += cls.size();
    const std::size_t cols = n + static_cast<std::size_t>(d);
    const std::size_t rows = static_cast<std::size_t>(r) * (d + 1);
    std::vector<QVector> sys(rows, QVector(cols + 1, Rational(0)));
    std::size_t col = 0;
    for (int i = 0; i < r; ++i) {
        for (const auto& pt : p.classes[i]) {
            for (int m = 0; m < d; ++m) sys[i * (d + 1) + m][col] = pt[m];
            sys[i * (d + 1) + d][col] = 1;
            ++col;
        }
    }
    for (int i = 0; i < r; ++i) {
        for (int m = 0; m < d; ++m) sys[i * (d + 1) + m][n + m] = -1;
        sys[i * (d + 1) + d][cols] = 1;  // rhs
    }
    // Solvable (unconstrained signs) iff augmenting does not raise the rank.
    QMatrix without(rows, cols), with(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) without.at(i, j) = sys[i][j];
        with.rows[i] = sys[i];
    }
    return rank(without) == rank(with);
}

bool has_tverberg_direction(const RPartition& p) {
    require_nonempty(p);
    const int d = p.d;
    // v lies in every linaff(P_i) iff v is orthogonal to every kernel vector
    // of every difference matrix; the intersection is nontrivial iff the
    // stacked kernels span less than R^d.
    std::vector<QVector> stacked;
    for (const auto& cls : p.classes) {
        if (cls.size() == 1) return false;  // linaff = {0}
        QMatrix diffs(cls.size() - 1, d);
        for (std::size_t j = 1; j < cls.size(); ++j)
            for (int m = 0; m < d; ++m) diffs.at(j - 1, m) = cls[j][m] - cls[0][m];
        for (auto& k : nullspace(diffs)) stacked.push_back(std::move(k));
    }
    if (stacked.empty()) return d > 0;  // every linaff is all of R^d
    QMatrix k(stacked.size(), d);
    k.rows = stacked;
    return rank(k) < d;
}

bool affinely_dependent_transform(const RPartition& p) {
    const WBasis w = make_w_basis(p.r());
    return !affinely_independent(transform_partition(p, w));
}

QVector tverberg_point_from_transform_witness(const RPartition& p,
                                              const ConvexWitness& witness) {
    const int d = p.d;
    std::size_t idx = 0;
    Rational a_first;
    QVector s_first(d, Rational(0));
    for (int i = 0; i < p.r(); ++i) {
        Rational a_i(0);
        QVector s_i(d, Rational(0));
        for (const auto& pt : p.classes[i]) {
            const Rational& alpha = witness.coefficients.at(idx++);
            a_i += alpha;
            for (int m = 0; m < d; ++m) s_i[m] += alpha * pt[m];
        }
        if (i == 0) {
            a_first = a_i;
            s_first = s_i;
        } else if (a_i != a_first || s_i != s_first) {
            throw std::logic_error(
                "transform witness violates the equal-sums reconstruction");
        }
    }
    if (sgn(a_first) <= 0)
        throw std::logic_error("transform witness has nonpositive class mass");
    QVector x(d);
    for (int m = 0; m < d; ++m) x[m] = s_first[m] / a_first;
    return x;
}

}  // namespace bmz
