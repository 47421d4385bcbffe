#include "engine_detail.hpp"

#include <algorithm>

namespace bmz::detail {

namespace {

bool fits_i128_entry(const Integer& z) {
    return mpz_sizeinbase(z.get_mpz_t(), 2) <= 60;
}

i128 to_i128(const Integer& z) {
    // Callers gate entries to <= 60 bits, so the value is a single GMP limb.
    const int s = sgn(z);
    if (s == 0) return 0;
    const Integer a = abs(z);
    const i128 v = static_cast<i128>(mpz_get_ui(a.get_mpz_t()));
    return s < 0 ? -v : v;
}

}  // namespace

CloneCache CloneCache::build(const BmzCollection& c, const WBasis& w) {
    CloneCache cc;
    cc.d = c.d;
    cc.r = c.r;
    cc.n = c.ground_size();
    const int total = c.total_points();
    cc.clones_q.resize(total);
    cc.clones_z.resize(total);
    cc.denom_z.resize(total);

    bool ok = true;
    std::size_t bits = 1;
    for (int j = 0; j < total; ++j) {
        Integer den = 1;
        for (const auto& q : c.points[j])
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
        cc.denom_z[j] = den;
        cc.clones_q[j].resize(c.r);
        cc.clones_z[j].resize(c.r);
        for (int i = 0; i < c.r; ++i) {
            cc.clones_q[j][i] = clone_point(c.points[j], i, w);
            auto& row = cc.clones_z[j][i];
            row.resize(cc.n);
            for (int m = 0; m < cc.n; ++m) {
                const Rational& q = cc.clones_q[j][i][m];
                Integer cell;
                mpz_divexact(cell.get_mpz_t(), den.get_mpz_t(),
                             q.get_den().get_mpz_t());
                cell *= q.get_num();
                if (!fits_i128_entry(cell)) ok = false;
                if (sgn(cell) != 0)
                    bits = std::max(bits, mpz_sizeinbase(cell.get_mpz_t(), 2));
                row[m] = cell;
            }
        }
        if (!fits_i128_entry(den)) ok = false;
        bits = std::max(bits, mpz_sizeinbase(den.get_mpz_t(), 2));
    }
    cc.i128_ok = ok;
    cc.max_bits = static_cast<int>(bits);
    if (ok) {
        cc.clones_i.resize(total);
        cc.denom_i.resize(total);
        for (int j = 0; j < total; ++j) {
            cc.denom_i[j] = to_i128(cc.denom_z[j]);
            cc.clones_i[j].resize(c.r);
            for (int i = 0; i < c.r; ++i) {
                cc.clones_i[j][i].resize(cc.n);
                for (int m = 0; m < cc.n; ++m)
                    cc.clones_i[j][i][m] = to_i128(cc.clones_z[j][i][m]);
            }
        }
    }
    return cc;
}

ClearedRay ClearedRay::build(const QVector& dir) {
    ClearedRay out;
    out.scale = 1;
    for (const auto& q : dir)
        mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(),
                q.get_den().get_mpz_t());
    out.dir_z.resize(dir.size());
    bool ok = true;
    std::size_t bits = 1;
    for (std::size_t m = 0; m < dir.size(); ++m) {
        Integer cell;
        mpz_divexact(cell.get_mpz_t(), out.scale.get_mpz_t(),
                     dir[m].get_den().get_mpz_t());
        cell *= dir[m].get_num();
        if (!fits_i128_entry(cell)) ok = false;
        if (sgn(cell) != 0)
            bits = std::max(bits, mpz_sizeinbase(cell.get_mpz_t(), 2));
        out.dir_z[m] = cell;
    }
    out.i128_ok = ok;
    out.max_bits = static_cast<int>(bits);
    if (ok) {
        out.dir_i.resize(dir.size());
        for (std::size_t m = 0; m < dir.size(); ++m)
            out.dir_i[m] = to_i128(out.dir_z[m]);
    }
    return out;
}

}  // namespace bmz::detail
