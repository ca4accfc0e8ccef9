#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ainfss/corpus.hpp"
#include "ainfss/matrix.hpp"

using namespace ainfss;

namespace {

Matrix from_rows(const Field& f, std::vector<std::vector<long>> rows) {
    Matrix m(f, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = Scalar::of_int(f, rows[r][c]);
    return m;
}

Vec vec(const Field& f, std::vector<long> v) {
    Vec out;
    for (long x : v) out.push_back(Scalar::of_int(f, x));
    return out;
}

Matrix random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols) {
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.chance(1, 2)) m.at(r, c) = Scalar::of_int(f, rng.range(-5, 5));
    return m;
}

}  // namespace

TEST_CASE("scalar arithmetic and canonical text") {
    Field q = Field::rationals();
    CHECK(Scalar::parse(q, "2/3").to_string() == "2/3");
    CHECK((Scalar::parse(q, "2/3") + Scalar::parse(q, "-2/3")).is_zero());
    CHECK((Scalar::parse(q, "1/2") * Scalar::of_int(q, 4)).to_string() == "2");
    CHECK_THROWS_AS(Scalar::parse(q, "2/4"), validation_error);
    CHECK_THROWS_AS(Scalar::parse(q, "1/-2"), validation_error);
    Field f7 = Field::prime(7);
    CHECK((Scalar::of_int(f7, 3) * Scalar::of_int(f7, 5)).to_string() == "1");
    CHECK(Scalar::of_int(f7, -1).to_string() == "6");
    CHECK((Scalar::of_int(f7, 4).inverse() * Scalar::of_int(f7, 4)).is_one());
    CHECK_THROWS_AS(Scalar::parse(f7, "7"), validation_error);
    CHECK_THROWS_AS(Field::prime(6), validation_error);
}

TEST_CASE("rref on the documented cases") {
    Field q = Field::rationals();
    auto [ri, pi] = rref(Matrix::identity(q, 2));
    CHECK(ri == Matrix::identity(q, 2));
    CHECK(pi == std::vector<std::size_t>{0, 1});

    auto [rz, pz] = rref(Matrix(q, 3, 2));
    CHECK(rz.is_zero());
    CHECK(pz.empty());

    Field f7 = Field::prime(7);
    auto [r7, p7] = rref(from_rows(f7, {{2, 4}, {1, 2}}));
    CHECK(r7 == from_rows(f7, {{1, 2}, {0, 0}}));
    CHECK(p7 == std::vector<std::size_t>{0});
}

TEST_CASE("solve_linear particular solutions") {
    Field q = Field::rationals();
    auto x = solve_linear(Matrix::identity(q, 3), vec(q, {5, -2, 7}));
    REQUIRE(x.has_value());
    CHECK(*x == vec(q, {5, -2, 7}));

    CHECK_FALSE(solve_linear(Matrix(q, 2, 2), vec(q, {1, 0})).has_value());

    // underdetermined [1 1] x = [1]: free coordinate pinned to zero
    auto u = solve_linear(from_rows(q, {{1, 1}}), vec(q, {1}));
    REQUIRE(u.has_value());
    CHECK(*u == vec(q, {1, 0}));
}

TEST_CASE("split_subspace canonical complements") {
    Field q = Field::rationals();
    auto c1 = split_subspace(q, 2, {vec(q, {1, 0})});
    REQUIRE(c1.size() == 1);
    CHECK(c1[0] == vec(q, {0, 1}));

    auto c2 = split_subspace(q, 2, {});
    REQUIRE(c2.size() == 2);
    CHECK(c2[0] == vec(q, {1, 0}));
    CHECK(c2[1] == vec(q, {0, 1}));

    // span{e0+e1}: pivot at coordinate 0, complement {e1}
    auto c3 = split_subspace(q, 2, {vec(q, {1, 1})});
    REQUIRE(c3.size() == 1);
    CHECK(c3[0] == vec(q, {0, 1}));

    CHECK_THROWS_AS(split_subspace(q, 2, {vec(q, {1, 1}), vec(q, {2, 2})}), validation_error);
}

TEST_CASE("rank-nullity and rref idempotence on random matrices") {
    for (Field f : {Field::rationals(), Field::prime(101), Field::prime(2)}) {
        Rng rng(2026);
        for (int trial = 0; trial < 500; ++trial) {
            std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(5);
            Matrix m = random_matrix(rng, f, rows, cols);
            auto rr = rref(m);
            CHECK(rref(rr.R).R == rr.R);
            CHECK(rr.pivots.size() + kernel_basis(m).size() == cols);
            // pivots are strictly increasing and leftmost-first
            for (std::size_t i = 1; i < rr.pivots.size(); ++i) CHECK(rr.pivots[i - 1] < rr.pivots[i]);
        }
    }
}

TEST_CASE("solve_linear solutions satisfy the system exactly") {
    for (Field f : {Field::rationals(), Field::prime(101)}) {
        Rng rng(99);
        int solved = 0;
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
            Matrix m = random_matrix(rng, f, rows, cols);
            Vec x0(cols, Scalar::zero(f));
            for (auto& s : x0) s = Scalar::of_int(f, rng.range(-3, 3));
            Vec b = m.apply(x0);  // consistent by construction
            auto x = solve_linear(m, b);
            REQUIRE(x.has_value());
            CHECK(m.apply(*x) == b);
            ++solved;
        }
        CHECK(solved == 200);
    }
}

TEST_CASE("split_subspace complement spans with full rank") {
    for (Field f : {Field::rationals(), Field::prime(101)}) {
        Rng rng(7);
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t n = 1 + rng.below(5);
            Matrix m = random_matrix(rng, f, rng.below(4) + 1, n);
            auto rr = rref(m);
            std::vector<Vec> basis;
            for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
                Vec row(n, Scalar::zero(f));
                for (std::size_t c = 0; c < n; ++c) row[c] = rr.R.at(i, c);
                basis.push_back(row);
            }
            auto comp = split_subspace(f, n, basis);
            CHECK(basis.size() + comp.size() == n);
            std::vector<Vec> all = basis;
            all.insert(all.end(), comp.begin(), comp.end());
            CHECK(rank(Matrix::from_columns(f, n, all)) == n);
        }
    }
}
