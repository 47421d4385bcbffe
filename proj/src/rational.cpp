#include "bmz/rational.hpp"

#include <stdexcept>

namespace bmz {

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    const std::string num_part = text.substr(0, slash);
    const std::string den_part =
        slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (num_part.empty() || den_part.empty()) return std::nullopt;

    auto valid_int = [](const std::string& s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    if (!valid_int(num_part, true) || !valid_int(den_part, false))
        return std::nullopt;

    Integer num, den;
    if (num.set_str(num_part, 10) != 0) return std::nullopt;
    if (den.set_str(den_part, 10) != 0) return std::nullopt;
    if (sgn(den) <= 0) return std::nullopt;

    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool operator==(const QMatrix& a, const QMatrix& b) { return a.rows == b.rows; }

QVector operator+(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVector operator-(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVector operator*(const Rational& s, const QVector& v) {
    QVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

Rational dot(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    Rational acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

bool is_zero(const QVector& v) {
    for (const auto& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

}  // namespace bmz
