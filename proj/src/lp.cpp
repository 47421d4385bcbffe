#include "bmz/lp.hpp"

#include <stdexcept>

namespace bmz {

namespace {

// Tableau simplex minimizing the sum of artificial variables. Columns
// 0..n-1 are the original variables, n..n+m-1 the artificials, column n+m
// the right-hand side. Bland's rule: entering = lowest-index column with a
// negative reduced cost, leaving = row whose basic variable has the lowest
// index among the minimum-ratio rows.
class PhaseOne {
  public:
    PhaseOne(const QMatrix& a, const QVector& b)
        : m_(a.nrows()), n_(a.ncols()), t_(m_ + 1, QVector(n_ + m_ + 1, Rational(0))) {
        for (std::size_t i = 0; i < m_; ++i) {
            const int flip = sgn(b[i]) < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = flip * a.at(i, j);
            t_[i][n_ + i] = 1;
            t_[i][rhs()] = flip * b[i];
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        // Reduced costs for phase one: cbar_j = -sum_i t[i][j] on original
        // columns; the artificial columns start basic with cost zero.
        for (std::size_t j = 0; j <= rhs(); ++j) {
            Rational s(0);
            for (std::size_t i = 0; i < m_; ++i) s += t_[i][j];
            if (j < n_ || j == rhs()) t_[m_][j] = -s;
        }
    }

    bool run() {
        for (;;) {
            std::size_t enter = rhs();
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (sgn(t_[m_][j]) < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == rhs()) break;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (sgn(t_[i][enter]) <= 0) continue;
                Rational ratio = t_[i][rhs()] / t_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m_)
                throw std::logic_error("phase-one LP unbounded");  // cannot happen
            pivot(leave, enter);
        }
        return sgn(t_[m_][rhs()]) == 0;  // objective -sum(artificials) == 0
    }

    QVector solution() const {
        QVector x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = t_[i][rhs()];
        return x;
    }

  private:
    std::size_t rhs() const { return n_ + m_; }

    void pivot(std::size_t row, std::size_t col) {
        const Rational piv = t_[row][col];
        for (std::size_t j = 0; j <= rhs(); ++j) t_[row][j] /= piv;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row || sgn(t_[i][col]) == 0) continue;
            const Rational f = t_[i][col];
            for (std::size_t j = 0; j <= rhs(); ++j) t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    std::size_t m_, n_;
    std::vector<QVector> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace

std::optional<QVector> lp_nonneg_solve(const QMatrix& a, const QVector& b) {
    if (a.nrows() != b.size()) throw std::invalid_argument("lp shape mismatch");
    if (a.nrows() == 0) return QVector(a.ncols(), Rational(0));
    PhaseOne lp(a, b);
    if (!lp.run()) return std::nullopt;
    return lp.solution();
}

std::optional<QVector> origin_hull_coefficients(const std::vector<QVector>& points) {
    if (points.empty()) return std::nullopt;
    const std::size_t dim = points[0].size();
    QMatrix a(dim + 1, points.size());
    QVector b(dim + 1, Rational(0));
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].size() != dim) throw std::invalid_argument("mixed dimensions");
        for (std::size_t i = 0; i < dim; ++i) a.at(i, j) = points[j][i];
        a.at(dim, j) = 1;
    }
    b[dim] = 1;
    return lp_nonneg_solve(a, b);
}

bool in_convex_hull(const QVector& x, const std::vector<QVector>& points) {
    std::vector<QVector> shifted;
    shifted.reserve(points.size());
    for (const auto& p : points) shifted.push_back(p - x);
    return origin_hull_coefficients(shifted).has_value();
}

}  // namespace bmz
