#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

// Exact rational scalars, vectors and matrices. All arithmetic is exact;
// rationals are kept in canonical form (positive denominator, coprime parts),
// which GMP guarantees as long as every mpq_class is canonicalized on entry.
// Everything here is an immutable value in practice: operations return fresh
// objects and never mutate shared state.

namespace bmz {

using Rational = mpq_class;
using Integer = mpz_class;

using QVector = std::vector<Rational>;

inline Rational rat(long long num, long long den = 1) {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

// Parses "n" or "n/d" with optional leading '-'. Rejects zero or negative
// denominators and any trailing garbage.
std::optional<Rational> parse_rational(const std::string& text);

// Canonical serialization: always "n/d" (denominator included, reduced form).
std::string to_string(const Rational& q);

struct QMatrix {
    std::vector<QVector> rows;

    QMatrix() = default;
    QMatrix(std::size_t nrows, std::size_t ncols)
        : rows(nrows, QVector(ncols, Rational(0))) {}
    explicit QMatrix(std::vector<QVector> r) : rows(std::move(r)) {}

    std::size_t nrows() const { return rows.size(); }
    std::size_t ncols() const { return rows.empty() ? 0 : rows[0].size(); }

    Rational& at(std::size_t i, std::size_t j) { return rows[i][j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return rows[i][j]; }

    bool square() const { return nrows() == ncols(); }
};

bool operator==(const QMatrix& a, const QMatrix& b);

QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator*(const Rational& s, const QVector& v);
Rational dot(const QVector& a, const QVector& b);
bool is_zero(const QVector& v);

}  // namespace bmz
