#include "doctest.h"

#include <random>

#include "dginj/field.hpp"

using namespace dginj;

namespace {

const Field F5 = Field::prime(5);
const Field FP = Field::prime(32003);
const Field QQ = Field::rationals();

// all vectors of F_5^n annihilated by m
std::vector<std::vector<long>> brute_kernel(const Mat& m) {
    std::vector<std::vector<long>> out;
    int n = m.cols();
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
    for (long code = 0; code < total; ++code) {
        std::vector<long> v(n);
        long c = code;
        for (int i = 0; i < n; ++i) { v[i] = c % 5; c /= 5; }
        Mat x = Mat::from_ints(F5, n, 1, v);
        if ((m * x).is_zero()) out.push_back(v);
    }
    return out;
}

Mat random_mat(Field f, int r, int c, std::mt19937& g, int density = 70) {
    Mat m(f, r, c);
    std::uniform_int_distribution<int> pct(0, 99), val(-4, 4);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (pct(g) < density) m.set(i, j, val(g));
    return m;
}

}  // namespace

TEST_CASE("kernel of identity and zero") {
    CHECK(kernel_basis(Mat::identity(FP, 3)).cols() == 0);
    CHECK(kernel_basis(Mat::identity(FP, 3)).rows() == 3);
    CHECK(kernel_basis(Mat::zero(FP, 2, 2)) == Mat::identity(FP, 2));
}

TEST_CASE("kernel over F5 matches enumeration") {
    Mat m = Mat::from_rows(F5, {{1, 1}, {0, 0}});
    auto all = brute_kernel(m);
    CHECK(all.size() == 5);  // one-dimensional
    Mat k = kernel_basis(m);
    REQUIRE(k.cols() == 1);
    // echelon-normalized: last free coordinate is 1
    CHECK(k == Mat::from_ints(F5, 2, 1, {4, 1}));
    // the basis vector spans exactly the enumerated set
    int hits = 0;
    for (auto& v : all) hits += in_span(k, Mat::from_ints(F5, 2, 1, v));
    CHECK(hits == 5);
}

TEST_CASE("kernel size agrees with brute force on random F5 matrices") {
    std::mt19937 g(11);
    for (int t = 0; t < 40; ++t) {
        int r = 1 + t % 4, c = 1 + (t / 4) % 5;
        Mat m = random_mat(F5, r, c, g, 50);
        auto all = brute_kernel(m);
        long expect = 1;
        int kd = kernel_basis(m).cols();
        for (int i = 0; i < kd; ++i) expect *= 5;
        CHECK(static_cast<long>(all.size()) == expect);
    }
}

TEST_CASE("solve examples") {
    Mat b = Mat::from_ints(FP, 3, 1, {4, -2, 7});
    auto x = solve(Mat::identity(FP, 3), b);
    REQUIRE(x);
    CHECK(*x == b);
    CHECK_FALSE(solve(Mat::zero(FP, 2, 2), Mat::from_ints(FP, 2, 1, {1, 0})).has_value());
    // 2x = 1 over F5: enumerate
    long expect = -1;
    for (long v = 0; v < 5; ++v)
        if ((2 * v) % 5 == 1) expect = v;
    auto y = solve(Mat::from_rows(F5, {{2}}), Mat::from_rows(F5, {{1}}));
    REQUIRE(y);
    CHECK(expect == 3);
    CHECK(*y == Mat::from_rows(F5, {{expect}}));
}

TEST_CASE("solve sets free variables to zero") {
    Mat m = Mat::from_rows(QQ, {{1, 2, 0}, {0, 0, 1}});
    auto x = solve(m, Mat::from_ints(QQ, 2, 1, {3, 5}));
    REQUIRE(x);
    CHECK(*x == Mat::from_ints(QQ, 3, 1, {3, 0, 5}));
}

TEST_CASE("rank examples") {
    CHECK(rank(Mat::identity(QQ, 5)) == 5);
    CHECK(rank(Mat::zero(QQ, 3, 4)) == 0);
    Mat m = Mat::from_rows(QQ, {{1, 2}, {2, 4}});
    // 2x2 minor vanishes, an entry does not
    CHECK((m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)).is_zero());
    CHECK(rank(m) == 1);
}

TEST_CASE("rational arithmetic is exact") {
    Scalar a(QQ, mpq_class(1, 3)), b(QQ, mpq_class(1, 6));
    CHECK(a + b == Scalar(QQ, mpq_class(1, 2)));
    CHECK_THROWS_AS(Scalar(QQ, 0).inv(), Error);
    CHECK_THROWS_AS(Scalar(FP, 0).inv(), Error);
    CHECK(Scalar(F5, 3) * Scalar(F5, 2) == Scalar(F5, 1));
    CHECK(Scalar(F5, -1) == Scalar(F5, 4));
}

TEST_CASE("mixed fields are rejected") {
    CHECK_THROWS_AS(Mat::identity(F5, 2) * Mat::identity(FP, 2), Error);
    CHECK_THROWS_AS(Scalar(F5, 1) + Scalar(QQ, 1), Error);
    CHECK_THROWS_AS(solve(Mat::identity(F5, 2), Mat::zero(QQ, 2, 1)), Error);
}

TEST_CASE("random properties over both fields") {
    std::mt19937 g(2024);
    for (Field f : {FP, QQ, F5}) {
        for (int t = 0; t < 60; ++t) {
            int r = 1 + g() % 12, c = 1 + g() % 12;
            Mat m = random_mat(f, r, c, g, 20 + static_cast<int>(g() % 70));
            Mat k = kernel_basis(m);
            CHECK(rank(m) + k.cols() == c);
            CHECK((m * k).is_zero());
            CHECK(rank(k) == k.cols());
            Mat im = image_basis(m);
            CHECK(im.cols() == rank(m));
            for (int j = 0; j < c; ++j) CHECK(solve(im, m.col(j)).has_value());
            Mat b = random_mat(f, r, 1, g);
            bool consistent = solve(m, b).has_value();
            CHECK(consistent == (rank(m) == rank(Mat::hcat(m, b))));
            if (consistent) CHECK(m * *solve(m, b) == b);
        }
    }
}

TEST_CASE("left inverse and inverse") {
    Mat m = Mat::from_rows(QQ, {{1, 0}, {2, 1}, {0, 3}});
    CHECK(left_inverse(m) * m == Mat::identity(QQ, 2));
    Mat s = Mat::from_rows(FP, {{2, 1}, {1, 1}});
    auto inv = inverse(s);
    REQUIRE(inv);
    CHECK(*inv * s == Mat::identity(FP, 2));
    CHECK_FALSE(inverse(Mat::from_rows(FP, {{1, 2}, {2, 4}})).has_value());
}

TEST_CASE("subquotient and induced maps") {
    // Z = everything in F^3, B = span(e0): quotient has dim 2
    Mat Z = Mat::identity(QQ, 3);
    Mat B = Mat::from_ints(QQ, 3, 1, {1, 0, 0});
    auto sq = subquotient(Z, B, QQ, 3);
    CHECK(sq.dim() == 2);
    CHECK((sq.proj * B).is_zero());
    CHECK(sq.proj * sq.reps == Mat::identity(QQ, 2));
    // f = identity induces identity
    CHECK(induced_map_on_quotients(Mat::identity(QQ, 3), sq, sq) == Mat::identity(QQ, 2));
    // f that kills e1 and e2 induces zero on the quotient
    Mat f = Mat::zero(QQ, 3, 3);
    f.set(0, 1, 1);
    CHECK(induced_map_on_quotients(f, sq, sq).is_zero());
    // incompatible: B not inside Z
    CHECK_THROWS_AS(subquotient(Mat::from_ints(QQ, 3, 1, {0, 1, 0}), B, QQ, 3), Error);
}

TEST_CASE("polynomial roots") {
    // (x-1)(x-3)(x^2+2) over F5: x^2+2 has no roots (squares mod 5 are 0,1,4)
    Poly p = poly_mul(poly_mul({Scalar(F5, -1), Scalar(F5, 1)}, {Scalar(F5, -3), Scalar(F5, 1)}),
                      {Scalar(F5, 2), Scalar(F5, 0), Scalar(F5, 1)});
    auto r = poly_roots(p, F5);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == Scalar(F5, 1));
    CHECK(r[1] == Scalar(F5, 3));
    // over F_32003, roots of (x-5)^2 (x+7)
    Poly q = poly_mul(poly_mul({Scalar(FP, -5), Scalar(FP, 1)}, {Scalar(FP, -5), Scalar(FP, 1)}),
                      {Scalar(FP, 7), Scalar(FP, 1)});
    auto rq = poly_roots(q, FP);
    REQUIRE(rq.size() == 2);
    CHECK(rq[0] == Scalar(FP, 5));
    CHECK(rq[1] == Scalar(FP, -7));
    // rational roots of 6x^2 - 5x + 1 = (2x-1)(3x-1)
    Poly w = {Scalar(QQ, 1), Scalar(QQ, -5), Scalar(QQ, 6)};
    auto rw = poly_roots(w, QQ);
    REQUIRE(rw.size() == 2);
    CHECK(rw[0] == Scalar(QQ, mpq_class(1, 3)));
    CHECK(rw[1] == Scalar(QQ, mpq_class(1, 2)));
    // x^2 + 1 over Q: none
    CHECK(poly_roots({Scalar(QQ, 1), Scalar(QQ, 0), Scalar(QQ, 1)}, QQ).empty());
}

TEST_CASE("minimal polynomial") {
    Mat n = Mat::from_rows(QQ, {{0, 1}, {0, 0}});
    Poly mp = minimal_polynomial(n);
    REQUIRE(mp.size() == 3);
    CHECK(mp[2].is_one());
    CHECK(mp[0].is_zero());
    CHECK(mp[1].is_zero());
    CHECK(minimal_polynomial(Mat::identity(QQ, 3)).size() == 2);
}

TEST_CASE("rational elimination survives int64 overflow") {
    // Hilbert matrix: the inverse has large integer entries
    const int n = 12;
    Mat h(QQ, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h.set(i, j, Scalar(QQ, mpq_class(1, i + j + 1)));
    auto inv = inverse(h);
    REQUIRE(inv.has_value());
    CHECK((h * *inv).is_identity());
    // entries near 2^62 overflow the small path on the first update
    Mat b(QQ, 2, 2);
    b.set(0, 0, Scalar(QQ, mpq_class(4611686018427387903L)));
    b.set(0, 1, Scalar(QQ, mpq_class(3)));
    b.set(1, 0, Scalar(QQ, mpq_class(5)));
    b.set(1, 1, Scalar(QQ, mpq_class(4611686018427387901L)));
    auto bi = inverse(b);
    REQUIRE(bi.has_value());
    CHECK((b * *bi).is_identity());
    CHECK(rank(b) == 2);
    Mat s = Mat::from_rows(QQ, {{2, 4, 6}, {1, 2, 3}, {3, 1, 7}});
    CHECK(rank(s) == 2);
    CHECK((s * kernel_basis(s)).is_zero());
}
