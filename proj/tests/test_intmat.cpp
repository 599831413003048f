#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torsion/intmat.hpp"

using namespace torsion;

namespace {

// deterministic xorshift generator for property-style cases
struct Rng {
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    i64 range(i64 lo, i64 hi) { return lo + i64(next() % std::uint64_t(hi - lo + 1)); }
};

Mat random_mat(Rng& rng, int r, int c, i64 lo = -9, i64 hi = 9) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rng.range(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("smith form reconstructs the input and is a divisor chain") {
    Rng rng;
    for (int iter = 0; iter < 200; ++iter) {
        int r = 1 + int(rng.next() % 5), c = 1 + int(rng.next() % 5);
        Mat a = random_mat(rng, r, c);
        SmithForm s = smith_form(a);
        CHECK(mat_mul(mat_mul(s.u, a), s.v) == s.d);
        CHECK(det_abs(s.u) == 1);
        CHECK(det_abs(s.v) == 1);
        CHECK(mat_mul(s.u, s.u_inv) == Mat::identity(r));
        CHECK(mat_mul(s.v, s.v_inv) == Mat::identity(c));
        for (int t = 0; t + 1 < std::min(r, c); ++t) {
            i64 d1 = s.d.at(t, t), d2 = s.d.at(t + 1, t + 1);
            CHECK(d1 >= 0);
            if (d1 > 0) CHECK(d2 % d1 == 0);
            if (d1 == 0) CHECK(d2 == 0);
        }
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (i != j) CHECK(s.d.at(i, j) == 0);
    }
}

TEST_CASE("row hnf is canonical and spans the same lattice") {
    Rng rng;
    for (int iter = 0; iter < 200; ++iter) {
        int n = 1 + int(rng.next() % 4);
        Mat a = random_mat(rng, n + int(rng.next() % 3), n);
        // force full rank by stacking a diagonal
        Mat full(a.rows + n, n);
        for (int i = 0; i < a.rows; ++i)
            for (int j = 0; j < n; ++j) full.at(i, j) = a.at(i, j);
        for (int j = 0; j < n; ++j) full.at(a.rows + j, j) = rng.range(1, 12);
        Mat h = row_hnf(full);
        REQUIRE(h.rows == n);
        CHECK(row_hnf(h) == h);
        // pivots positive, entries above reduced
        for (int i = 0; i < n; ++i) {
            CHECK(h.at(i, i) > 0);
            for (int k = 0; k < i; ++k) {
                CHECK(h.at(k, i) >= 0);
                CHECK(h.at(k, i) < h.at(i, i));
            }
            for (int j = 0; j < i; ++j) CHECK(h.at(i, j) == 0);
        }
        // every original row lies in the row lattice of h
        std::vector<i64> y;
        for (int i = 0; i < full.rows; ++i) {
            std::vector<i64> v(n);
            for (int j = 0; j < n; ++j) v[j] = full.at(i, j);
            CHECK(solve_upper_row(h, v, y));
        }
        // shuffling rows does not change the canonical form
        Mat shuffled = full;
        for (int i = full.rows - 1; i > 0; --i) {
            int j = int(rng.next() % std::uint64_t(i + 1));
            for (int col = 0; col < n; ++col) std::swap(shuffled.at(i, col), shuffled.at(j, col));
        }
        CHECK(row_hnf(shuffled) == h);
    }
}

TEST_CASE("solve_upper_row detects non-members") {
    Mat b(2, 2);
    b.at(0, 0) = 2;
    b.at(0, 1) = 1;
    b.at(1, 1) = 3;
    std::vector<i64> y;
    CHECK(solve_upper_row(b, {2, 1}, y));
    CHECK(y == std::vector<i64>{1, 0});
    CHECK(solve_upper_row(b, {2, 4}, y));
    CHECK_FALSE(solve_upper_row(b, {1, 0}, y));
}

TEST_CASE("det_abs on known matrices") {
    Mat a(2, 2);
    a.at(0, 0) = 3;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 2;
    CHECK(det_abs(a) == 5);
    CHECK(det_abs(Mat::identity(4)) == 1);
    Mat z(3, 3);
    CHECK(det_abs(z) == 0);
}
