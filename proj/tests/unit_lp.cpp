#include <doctest.h>

#include "bmz/lp.hpp"
#include "bmz/rng.hpp"
#include "test_oracles.hpp"

using namespace bmz;

namespace {

QVector vec(std::vector<long> v) {
    QVector out;
    for (long x : v) out.push_back(rat(x));
    return out;
}

}  // namespace

TEST_CASE("origin hull membership, small cases") {
    auto w = origin_hull_coefficients({vec({1}), vec({-1})});
    REQUIRE(w);
    CHECK((*w)[0] == rat(1, 2));
    CHECK((*w)[1] == rat(1, 2));
    CHECK(!origin_hull_coefficients({vec({1}), vec({2})}));
    CHECK(!origin_hull_coefficients({}));
    // the origin itself is a valid singleton hull
    CHECK(origin_hull_coefficients({vec({0, 0})}).has_value());
}

TEST_CASE("in_convex_hull on a square") {
    const std::vector<QVector> square = {vec({0, 0}), vec({2, 0}), vec({0, 2}),
                                         vec({2, 2})};
    CHECK(in_convex_hull(vec({1, 1}), square));
    CHECK(in_convex_hull(vec({0, 0}), square));
    CHECK(!in_convex_hull(vec({3, 1}), square));
}

TEST_CASE("LP membership agrees with Caratheodory brute force and witnesses verify") {
    Rng rng(777);
    for (int trial = 0; trial < 400; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int n = 1 + static_cast<int>(rng.below(8));
        std::vector<QVector> pts;
        for (int i = 0; i < n; ++i) {
            QVector p(d);
            for (int j = 0; j < d; ++j) p[j] = rat(rng.int_in(-5, 5));
            pts.push_back(p);
        }
        const auto got = origin_hull_coefficients(pts);
        CHECK(got.has_value() == oracles::origin_in_hull_bruteforce(pts));
        if (got) {
            Rational total(0);
            QVector combo(d, Rational(0));
            for (int i = 0; i < n; ++i) {
                CHECK(sgn((*got)[i]) >= 0);
                total += (*got)[i];
                for (int j = 0; j < d; ++j) combo[j] += (*got)[i] * pts[i][j];
            }
            CHECK(total == Rational(1));
            CHECK(is_zero(combo));
        }
    }
}

TEST_CASE("degenerate LPs terminate (Bland)") {
    // Many coincident points and zero rows exercise degenerate pivots.
    std::vector<QVector> pts(6, vec({0, 0}));
    pts.push_back(vec({1, 0}));
    CHECK(origin_hull_coefficients(pts).has_value());

    QMatrix a(2, 3);
    for (int j = 0; j < 3; ++j) {
        a.at(0, j) = rat(1);
        a.at(1, j) = rat(1);  // duplicate row
    }
    const QVector b{rat(1), rat(1)};
    CHECK(lp_nonneg_solve(a, b).has_value());
    const QVector bad{rat(1), rat(2)};
    CHECK(!lp_nonneg_solve(a, bad).has_value());
}
