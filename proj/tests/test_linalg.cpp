#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sopt/linalg.hpp"

using namespace sopt;

TEST_CASE("rank of basic matrices") {
    CHECK(rank(RMatrix::identity(2)) == 2);
    CHECK(rank(RMatrix({{0, 0}, {0, 0}})) == 0);
    CHECK(rank(RMatrix({{1, 2}, {2, 4}})) == 1);
    CHECK(rank(RMatrix({{rat(1, 2), rat(1, 3)}, {rat(1, 4), rat(1, 6)}})) == 1);
    CHECK(rank(RMatrix({{1, 0, 0}, {0, 1, 0}})) == 2);
    CHECK(rank(RMatrix({{1, 1}, {1, -1}, {2, 0}})) == 2);
}

TEST_CASE("ragged rows are rejected") {
    CHECK_THROWS_AS(RMatrix({{1, 2}, {3}}), DimensionMismatch);
}

TEST_CASE("solve classifies unique, none, and underdetermined") {
    auto u = solve(RMatrix({{1, 0}, {0, 1}}), {3, 4});
    REQUIRE(u.kind == SolveKind::Unique);
    CHECK(u.solution == RVector{3, 4});

    auto n = solve(RMatrix({{1, 1}, {1, 1}}), {1, 2});
    CHECK(n.kind == SolveKind::None);

    auto d = solve(RMatrix({{1, 1}}), {1});
    CHECK(d.kind == SolveKind::Underdetermined);

    // overdetermined but consistent
    auto c = solve(RMatrix({{1, 0}, {0, 1}, {1, 1}}), {rat(1, 2), rat(1, 3), rat(5, 6)});
    REQUIRE(c.kind == SolveKind::Unique);
    CHECK(c.solution == RVector{rat(1, 2), rat(1, 3)});
}

namespace {

RMatrix random_matrix(std::mt19937_64& rng, size_t rows, size_t cols) {
    std::vector<RVector> data(rows, RVector(cols));
    for (auto& row : data) {
        for (auto& x : row) {
            long long num = static_cast<long long>(rng() % 21) - 10;
            long long den = 1 + static_cast<long long>(rng() % 6);
            x = rat(num, den);
        }
    }
    return RMatrix(data);
}

}  // namespace

TEST_CASE("rank is invariant under row swaps and row scaling") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 50; ++trial) {
        size_t rows = 2 + rng() % 4;
        size_t cols = 2 + rng() % 4;
        RMatrix m = random_matrix(rng, rows, cols);
        size_t base = rank(m);

        RMatrix swapped = m;
        std::swap(swapped.rows[0], swapped.rows[rows - 1]);
        CHECK(rank(swapped) == base);

        RMatrix scaled = m;
        for (auto& x : scaled.rows[rng() % rows]) {
            x *= rat(7, 3);
        }
        CHECK(rank(scaled) == base);
    }
}

TEST_CASE("appending a linear combination of rows preserves rank") {
    std::mt19937_64 rng(995511);
    for (int trial = 0; trial < 50; ++trial) {
        size_t rows = 2 + rng() % 3;
        size_t cols = 2 + rng() % 4;
        RMatrix m = random_matrix(rng, rows, cols);
        RVector combo(cols, 0);
        for (size_t r = 0; r < rows; ++r) {
            Rational coeff = rat(static_cast<long long>(rng() % 9) - 4, 1 + rng() % 3);
            for (size_t c = 0; c < cols; ++c) {
                combo[c] += coeff * m.rows[r][c];
            }
        }
        RMatrix extended = m;
        extended.rows.push_back(combo);
        CHECK(rank(extended) == rank(m));
    }
}

TEST_CASE("unique solutions verify by substitution") {
    std::mt19937_64 rng(77002);
    for (int trial = 0; trial < 40; ++trial) {
        size_t n = 2 + rng() % 3;
        RMatrix m = random_matrix(rng, n, n);
        RVector b(n);
        for (auto& x : b) {
            x = rat(static_cast<long long>(rng() % 13) - 6, 1 + rng() % 4);
        }
        auto res = solve(m, b);
        if (res.kind != SolveKind::Unique) {
            continue;
        }
        for (size_t r = 0; r < n; ++r) {
            CHECK(dot(m.rows[r], res.solution) == b[r]);
        }
    }
}
