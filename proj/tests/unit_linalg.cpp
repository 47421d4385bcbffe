#include <doctest.h>

#include "bmz/bareiss.hpp"
#include "engine_detail.hpp"
#include "bmz/linalg.hpp"
#include "bmz/rng.hpp"
#include "test_oracles.hpp"

using namespace bmz;

namespace {

QMatrix mat(std::vector<std::vector<long>> rows) {
    QMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rat(rows[i][j]);
    return m;
}

QVector vec(std::vector<long> v) {
    QVector out;
    for (long x : v) out.push_back(rat(x));
    return out;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
    CHECK(*parse_rational("3/6") == rat(1, 2));
    CHECK(*parse_rational("-4/2") == rat(-2));
    CHECK(*parse_rational("7") == rat(7));
    CHECK(!parse_rational("1/0"));
    CHECK(!parse_rational("1/-2"));
    CHECK(!parse_rational(""));
    CHECK(!parse_rational("a/b"));
    CHECK(!parse_rational("1/2/3"));
    CHECK(to_string(rat(-3, 9)) == "-1/3");
}

TEST_CASE("det_sign basic cases") {
    CHECK(det_sign(mat({{1, 0}, {0, 1}})) == 1);
    CHECK(det_sign(mat({{0, 1}, {1, 0}})) == -1);
    CHECK(det_sign(mat({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("rank basic cases") {
    CHECK(rank(mat({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})) == 0);
    CHECK(rank(mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
    CHECK(rank(mat({{1, 0}, {0, 1}, {1, 1}})) == 2);
}

TEST_CASE("solve_unique basic cases") {
    CHECK(*solve_unique(mat({{1, 0}, {0, 1}}), vec({3, -2})) == vec({3, -2}));
    auto x = *solve_unique(mat({{2, 0}, {0, 4}}), vec({1, 1}));
    CHECK(x[0] == rat(1, 2));
    CHECK(x[1] == rat(1, 4));
    CHECK(!solve_unique(mat({{1, 1}, {2, 2}}), vec({1, 0})));
}

TEST_CASE("affinely_independent basic cases") {
    CHECK(affinely_independent({vec({0, 0}), vec({1, 0}), vec({0, 1})}));
    CHECK(!affinely_independent({vec({0, 0}), vec({1, 1}), vec({2, 2})}));
    CHECK(affinely_independent({vec({5, 7})}));
}

TEST_CASE("det_sign agrees with a cofactor oracle on random matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const QMatrix m = oracles::random_matrix(rng, n, n, -6, 6);
        CHECK(det_sign(m) == sgn(oracles::cofactor_det(m)));
    }
}

TEST_CASE("exact arithmetic: det of product equals product of dets") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        const QMatrix a = oracles::random_matrix(rng, n, n, -5, 5);
        const QMatrix b = oracles::random_matrix(rng, n, n, -5, 5);
        QMatrix ab(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational acc(0);
                for (int k = 0; k < n; ++k) acc += a.at(i, k) * b.at(k, j);
                ab.at(i, j) = acc;
            }
        CHECK(oracles::cofactor_det(ab) ==
              oracles::cofactor_det(a) * oracles::cofactor_det(b));
        CHECK(det_sign(ab) == det_sign(a) * det_sign(b));
    }
}

TEST_CASE("det_sign under row permutations follows parity") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        QMatrix m = oracles::random_matrix(rng, n, n, -4, 4);
        const int base = det_sign(m);
        // random transposition count
        const int swaps = static_cast<int>(rng.below(4));
        QMatrix p = m;
        for (int s = 0; s < swaps; ++s) {
            int i = static_cast<int>(rng.below(n));
            int j = static_cast<int>(rng.below(n));
            if (i == j) j = (j + 1) % n;
            std::swap(p.rows[i], p.rows[j]);
        }
        const int expected = (swaps % 2 == 0) ? base : -base;
        CHECK(det_sign(p) == expected);
    }
}

TEST_CASE("rank matches an mpq row-reduction oracle and row-op invariance") {
    Rng rng(1234);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const int m = 1 + static_cast<int>(rng.below(5));
        QMatrix a = oracles::random_matrix(rng, n, m, -3, 3);
        CHECK(rank(a) == oracles::rref_rank(a.rows));
        // elementary row operation: add a multiple of one row to another
        if (n >= 2) {
            QMatrix b = a;
            const int src = static_cast<int>(rng.below(n));
            int dst = static_cast<int>(rng.below(n));
            if (dst == src) dst = (dst + 1) % n;
            const Rational f = rat(rng.int_in(-3, 3));
            for (int j = 0; j < m; ++j) b.at(dst, j) += f * b.at(src, j);
            CHECK(rank(b) == rank(a));
        }
    }
}

TEST_CASE("solve_unique round-trips random nonsingular systems") {
    Rng rng(555);
    int done = 0;
    while (done < 60) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const QMatrix a = oracles::random_matrix(rng, n, n, -5, 5);
        if (det_sign(a) == 0) continue;
        QVector x(n);
        for (int i = 0; i < n; ++i)
            x[i] = rat(rng.int_in(-9, 9),
                       static_cast<long long>(1 + rng.below(7)));
        QVector b(n, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b[i] += a.at(i, j) * x[j];
        CHECK(*solve_unique(a, b) == x);
        ++done;
    }
}

TEST_CASE("nullspace vectors really annihilate and have the right count") {
    Rng rng(31337);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(4));
        const int m = 1 + static_cast<int>(rng.below(5));
        const QMatrix a = oracles::random_matrix(rng, n, m, -3, 3);
        const auto basis = nullspace(a);
        CHECK(static_cast<int>(basis.size()) == m - rank(a));
        for (const auto& v : basis) {
            for (int i = 0; i < n; ++i) {
                Rational acc(0);
                for (int j = 0; j < m; ++j) acc += a.at(i, j) * v[j];
                CHECK(sgn(acc) == 0);
            }
        }
    }
}

TEST_CASE("wide elimination lane agrees with the mpz lane") {
    using namespace bmz::detail;
    Rng rng(0x33de11);
    auto fill = [&](IMat& im, ZMat& zm, int n, int cols, long long bound) {
        im.reset(n, cols);
        zm.reset(n, cols);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < cols; ++j) {
                const long long v = rng.int_in(-bound, bound);
                im.at(i, j) = v;
                zm.at(i, j) = static_cast<long>(v);
            }
    };
    // dets and ranks across sizes and magnitudes, including ones that force
    // the wide lane to bail out (large entries at larger n)
    int bailed = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(9));
        const long long bound = trial % 3 == 0 ? 4 : (trial % 3 == 1 ? 4096 : (1LL << 40));
        IMat im;
        ZMat zm;
        fill(im, zm, n, n, bound);
        ZMat zcopy;
        zcopy.reset(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) zcopy.at(i, j) = zm.at(i, j);
        const int expected = det_sign_mpz(zm);
        if (auto got = det_sign_wide(im))
            CHECK(*got == expected);
        else
            ++bailed;

        const int cols = n + 1 + static_cast<int>(rng.below(3));
        fill(im, zm, n, cols, bound);
        ZMat zm2;
        zm2.reset(n, cols);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < cols; ++j) zm2.at(i, j) = zm.at(i, j);
        const auto expected_rank = rank_aug_mpz(zm2);
        if (auto got = rank_aug_wide(im)) CHECK(*got == expected_rank);
    }
    CHECK(bailed > 0);  // the large-entry cases exercised the fallback

    // forward + backsub solves against the rational solver
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        IMat im;
        ZMat zm;
        fill(im, zm, n, n + 1, 500);
        QMatrix a(n, n);
        QVector b(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a.at(i, j) = Rational(zm.at(i, j));
            b[i] = Rational(zm.at(i, n));
        }
        const auto fw = forward_wide(im);
        REQUIRE(fw.has_value());
        const auto expected = solve_unique(a, b);
        if (fw->singular) {
            CHECK(!expected.has_value());
            continue;
        }
        REQUIRE(expected.has_value());
        std::vector<i128> y(n);
        bool ok = true;
        for (int i = n - 1; i >= 0 && ok; --i)
            ok = backsub_wide_step(im, y.data(), i);
        REQUIRE(ok);
        Integer dn, yi;
        set_mpz_from_i128(dn.get_mpz_t(), im.at(n - 1, n - 1));
        for (int i = 0; i < n; ++i) {
            set_mpz_from_i128(yi.get_mpz_t(), y[i]);
            Rational x(yi, dn);
            x.canonicalize();
            CHECK(x == (*expected)[i]);
        }
    }
}

TEST_CASE("origin_in_affine_hull matches an independent row-reduction oracle") {
    CHECK(origin_in_affine_hull({vec({1, 0}), vec({-1, 0})}));
    CHECK(!origin_in_affine_hull({vec({1, 0}), vec({1, 1})}));
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int n = 1 + static_cast<int>(rng.below(5));
        std::vector<QVector> pts;
        for (int i = 0; i < n; ++i) {
            QVector p(d);
            for (int j = 0; j < d; ++j) p[j] = rat(rng.int_in(-3, 3));
            pts.push_back(p);
        }
        // oracle: rank of homogenized rows vs rank with the origin appended
        std::vector<QVector> homog;
        for (const auto& p : pts) {
            QVector h = p;
            h.push_back(Rational(1));
            homog.push_back(h);
        }
        auto with_origin = homog;
        QVector origin_row(d + 1, Rational(0));
        origin_row[d] = 1;
        with_origin.push_back(origin_row);
        const bool expected =
            oracles::rref_rank(homog) == oracles::rref_rank(with_origin);
        CHECK(origin_in_affine_hull(pts) == expected);
    }
}
