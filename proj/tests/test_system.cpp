#include <catch2/catch_amalgamated.hpp>

#include "sopt/generate.hpp"
#include "sopt/system.hpp"

using namespace sopt;

TEST_CASE("system construction is validated") {
    CHECK_THROWS_AS(make_system("A", 0), InvalidState);
    CHECK_THROWS_AS(make_system("A", 2, EffectModel::restricted({})), InvalidEffect);
    CHECK_THROWS_AS(make_system("A", 2, EffectModel::restricted({{1, 1, 1}})), DimensionMismatch);
    CHECK_THROWS_AS(make_system("A", 2, EffectModel::restricted({{rat(3, 2), 0}})), InvalidEffect);
    CHECK(make_system("A", 2, EffectModel::restricted({{1, 1}}))->dim == 2);
}

TEST_CASE("state construction is validated") {
    auto A = make_system("A", 2);
    CHECK_THROWS_AS(make_state(A, {1, 0, 0}), DimensionMismatch);
    CHECK_THROWS_AS(make_state(A, {-1, 0}), InvalidState);
    CHECK_THROWS_AS(make_state(A, {rat(3, 4), rat(1, 2)}), InvalidState);
    CHECK_THROWS_AS(vertex_state(A, 0), InvalidState);
    CHECK_THROWS_AS(vertex_state(A, 3), InvalidState);
    CHECK(vertex_state(A, 2).coords == RVector{0, 1});
    CHECK(null_state(A).coords == RVector{0, 0});
}

TEST_CASE("effect construction is validated") {
    auto A = make_system("A", 2);
    CHECK_THROWS_AS(make_effect(A, {1}), DimensionMismatch);
    CHECK_THROWS_AS(make_effect(A, {rat(3, 2), 0}), InvalidEffect);
    CHECK_THROWS_AS(make_effect(A, {rat(-1, 2), 0}), InvalidEffect);
    CHECK(dual_basis_effect(A, 1).coords == RVector{1, 0});
}

TEST_CASE("pairing computes exact probabilities") {
    auto A = make_system("A", 2);
    CHECK(pair(dual_basis_effect(A, 1), vertex_state(A, 1)) == 1);
    CHECK(pair(dual_basis_effect(A, 1), vertex_state(A, 2)) == 0);
    CHECK(pair(deterministic_effect(A), make_state(A, {rat(1, 3), rat(1, 3)})) == rat(2, 3));

    auto B = make_system("B", 3);
    CHECK_THROWS_AS(pair(dual_basis_effect(B, 1), vertex_state(A, 1)), SystemMismatch);
}

TEST_CASE("dual basis pairs to the identity") {
    auto A = make_system("A", 5);
    for (size_t i = 1; i <= 5; ++i) {
        for (size_t j = 1; j <= 5; ++j) {
            CHECK(pair(dual_basis_effect(A, i), vertex_state(A, j)) == (i == j ? 1 : 0));
        }
    }
}

TEST_CASE("deterministic effect on the full dual box") {
    auto A = make_system("A", 3);
    CHECK(deterministic_effect(A).coords == RVector{1, 1, 1});
}

TEST_CASE("deterministic effect inside a restricted cone") {
    auto ok = make_system("A", 2, EffectModel::restricted({{1, 1}, {1, 0}}));
    CHECK(deterministic_effect(ok).coords == RVector{1, 1});

    // cone of (1/2,1/2) contains (1,1) by scaling and truncation to the box
    auto scaled = make_system("A", 2, EffectModel::restricted({{rat(1, 2), rat(1, 2)}}));
    CHECK(deterministic_effect(scaled).coords == RVector{1, 1});

    // a cone genuinely missing the all-ones direction
    auto missing = make_system("A", 2, EffectModel::restricted({{1, 0}}));
    CHECK_THROWS_AS(deterministic_effect(missing), NoDeterministicEffect);
}

TEST_CASE("state classification covers all five classes") {
    auto A = make_system("A", 2);
    CHECK(classify_state(make_state(A, {0, 0})).cls == StateClass::Null);

    auto pure = classify_state(make_state(A, {1, 0}));
    CHECK(pure.cls == StateClass::PureVertex);
    CHECK(pure.vertex == 1);

    CHECK(classify_state(make_state(A, {rat(1, 2), rat(1, 2)})).cls ==
          StateClass::DeterministicMixed);

    auto sub = classify_state(make_state(A, {0, rat(1, 3)}));
    CHECK(sub.cls == StateClass::SubnormalizedAtomic);
    CHECK(sub.vertex == 2);

    CHECK(classify_state(make_state(A, {rat(1, 4), rat(1, 4)})).cls ==
          StateClass::SubnormalizedMixed);
}

TEST_CASE("effect membership in the full dual box") {
    auto A = make_system("A", 2);
    CHECK(is_effect(A, {rat(1, 2), 1}).ok);
    CHECK_FALSE(is_effect(A, {rat(3, 2), 0}).ok);
    CHECK_THROWS_AS(is_effect(A, {1}), DimensionMismatch);
}

TEST_CASE("effect membership in a restricted cone") {
    auto A = make_system("A", 2, EffectModel::restricted({{1, 1}, {1, 0}}));

    // (0,1) = 1·(1,1) - 1·(1,0) needs a negative coefficient; solving the
    // two coordinate equations by hand leaves no nonnegative solution
    CHECK_FALSE(is_effect(A, {0, 1}).ok);

    auto member = is_effect(A, {1, rat(1, 2)});
    REQUIRE(member.ok);
    REQUIRE(member.cone_coefficients.size() == 2);
    const auto& lam = member.cone_coefficients;
    CHECK(lam[0] * 1 + lam[1] * 1 == 1);           // first coordinate
    CHECK(lam[0] * 1 + lam[1] * 0 == rat(1, 2));   // second coordinate
    for (const auto& l : lam) {
        CHECK(l >= 0);
    }
}

TEST_CASE("pairing the deterministic effect detects deterministic states") {
    auto A = make_system("A", 4);
    auto e = deterministic_effect(A);
    Rng rng(60601);
    for (int trial = 0; trial < 200; ++trial) {
        StateVector rho = random_state(rng, A, trial % 2 == 0);
        auto cls = classify_state(rho).cls;
        bool deterministic =
            cls == StateClass::PureVertex || cls == StateClass::DeterministicMixed;
        CHECK((pair(e, rho) == 1) == deterministic);
    }
}

TEST_CASE("pairing stays within the unit interval") {
    Rng rng(883310);
    auto A = make_system("A", 5);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_box_effect(rng, A);
        auto rho = random_state(rng, A, false);
        Rational v = pair(a, rho);
        CHECK(v >= 0);
        CHECK(v <= 1);
    }
}
