#include "bmz/linalg.hpp"

#include <stdexcept>

#include "bmz/bareiss.hpp"

namespace bmz {

namespace {

enum class Aug { none, zero, ones };

// Clears denominators row-wise; positive row scalings keep det signs and rank.
// Aug::ones appends the (cleared) homogenizing column, Aug::zero a zero column
// so rank_aug reports the plain rank twice.
void load_cleared(detail::ZMat& z, const std::vector<QVector>& rows,
                  std::size_t ncols, Aug aug) {
    z.reset(static_cast<int>(rows.size()),
            static_cast<int>(ncols + (aug == Aug::none ? 0 : 1)));
    Integer l;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ncols)
            throw std::invalid_argument("ragged matrix rows");
        l = 1;
        for (const auto& q : rows[i])
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
        for (std::size_t j = 0; j < ncols; ++j) {
            const Rational& q = rows[i][j];
            Integer& cell = z.at(static_cast<int>(i), static_cast<int>(j));
            mpz_divexact(cell.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
            cell *= q.get_num();
        }
        if (aug == Aug::ones) z.at(static_cast<int>(i), static_cast<int>(ncols)) = l;
    }
}

}  // namespace

int det_sign(const QMatrix& m) {
    if (!m.square()) throw std::invalid_argument("det_sign needs a square matrix");
    detail::ZMat z;
    load_cleared(z, m.rows, m.ncols(), Aug::none);
    return detail::det_sign_mpz(z);
}

int rank(const QMatrix& m) {
    if (m.nrows() == 0) return 0;
    detail::ZMat z;
    load_cleared(z, m.rows, m.ncols(), Aug::zero);
    return detail::rank_aug_mpz(z).first;
}

std::optional<QVector> solve_unique(const QMatrix& a, const QVector& b) {
    const std::size_t n = a.nrows();
    if (!a.square() || b.size() != n)
        throw std::invalid_argument("solve_unique shape mismatch");
    // Plain rational Gaussian elimination; sizes here are small.
    std::vector<QVector> m(n, QVector(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);
        m[i][n] = b[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(m[p][k]) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k) std::swap(m[p], m[k]);
        const Rational piv = m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (sgn(m[i][k]) == 0) continue;
            const Rational f = m[i][k] / piv;
            for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    QVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rational acc = m[ii][n];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= m[ii][j] * x[j];
        x[ii] = acc / m[ii][ii];
    }
    return x;
}

std::vector<QVector> nullspace(const QMatrix& m) {
    const std::size_t nr = m.nrows(), nc = m.ncols();
    std::vector<QVector> a = m.rows;
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < nc && row < nr; ++col) {
        std::size_t p = row;
        while (p < nr && sgn(a[p][col]) == 0) ++p;
        if (p == nr) continue;
        if (p != row) std::swap(a[p], a[row]);
        const Rational piv = a[row][col];
        for (std::size_t j = col; j < nc; ++j) a[row][j] /= piv;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == row || sgn(a[i][col]) == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = col; j < nc; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(nc, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<QVector> basis;
    for (std::size_t free_col = 0; free_col < nc; ++free_col) {
        if (is_pivot[free_col]) continue;
        QVector v(nc, Rational(0));
        v[free_col] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            v[pivot_col[r]] = -a[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::pair<int, int> rank_and_homogenized_rank(const std::vector<QVector>& points) {
    if (points.empty()) return {0, 0};
    detail::ZMat z;
    load_cleared(z, points, points[0].size(), Aug::ones);
    return detail::rank_aug_mpz(z);
}

bool affinely_independent(const std::vector<QVector>& points) {
    if (points.empty()) return true;
    return rank_and_homogenized_rank(points).second ==
           static_cast<int>(points.size());
}

bool origin_in_affine_hull(const std::vector<QVector>& points) {
    if (points.empty()) return false;
    auto [rp, rh] = rank_and_homogenized_rank(points);
    return rh == rp + 1;
}

}  // namespace bmz
