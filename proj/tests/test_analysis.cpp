#include <catch2/catch_amalgamated.hpp>

#include "sopt/analysis.hpp"
#include "sopt/generate.hpp"

using namespace sopt;

namespace {

Theory make_t5_theory() {
    Theory t;
    t.add_system(make_system("A", 2));
    t.add_system(make_system("B", 2));
    std::vector<BlockEntry> blocks = {{1, 1, {1, 2}, {rat(1, 2), rat(1, 2)}},
                                      {1, 2, {3}, {1}},
                                      {2, 1, {4}, {1}},
                                      {2, 2, {5}, {1}}};
    t.add_composite(
        make_rule(make_system("AB", 5), t.find_system("A"), t.find_system("B"), blocks));
    return t;
}

// T5 on (A,B), product rules elsewhere, and a hand-built rule for (A, BC)
// that redistributes the T5 weights consistently with ((A B) C).
Theory make_t5_triple_theory() {
    Theory t = make_t5_theory();
    t.add_system(make_system("C", 2));

    auto product_blocks = [](size_t dl, size_t dr) {
        std::vector<BlockEntry> blocks;
        size_t v = 1;
        for (size_t i = 1; i <= dl; ++i) {
            for (size_t j = 1; j <= dr; ++j) {
                blocks.push_back({i, j, {v++}, {1}});
            }
        }
        return blocks;
    };
    t.add_composite(make_rule(make_system("ABC", 10), t.find_system("AB"), t.find_system("C"),
                              product_blocks(5, 2)));
    t.add_composite(make_rule(make_system("BC", 4), t.find_system("B"), t.find_system("C"),
                              product_blocks(2, 2)));

    std::vector<BlockEntry> a_bc = {{1, 1, {1, 2}, {rat(1, 2), rat(1, 2)}},
                                    {1, 2, {3, 4}, {rat(1, 2), rat(1, 2)}},
                                    {1, 3, {5}, {1}},
                                    {1, 4, {6}, {1}},
                                    {2, 1, {7}, {1}},
                                    {2, 2, {8}, {1}},
                                    {2, 3, {9}, {1}},
                                    {2, 4, {10}, {1}}};
    t.add_composite(
        make_rule(make_system("A(BC)", 10), t.find_system("A"), t.find_system("BC"), a_bc));
    return t;
}

}  // namespace

TEST_CASE("separability closed form on the worked instances") {
    Theory t = make_t5_theory();
    const CompositionRule& r = *t.rule_by_name("AB");

    SECTION("a product state is separable with its lambda map") {
        auto omega = make_state(r.composite, {rat(1, 2), rat(1, 2), 0, 0, 0});
        auto cert = is_separable(r, omega);
        REQUIRE(cert.separable);
        CHECK(cert.lambda[0].first == std::make_pair<size_t, size_t>(1, 1));
        CHECK(cert.lambda[0].second == 1);
        CHECK(is_separable_lp(r, omega));
    }
    SECTION("an oversized-block vertex is entangled") {
        auto omega = vertex_state(r.composite, 1);
        auto cert = is_separable(r, omega);
        REQUIRE_FALSE(cert.separable);
        CHECK(cert.violating_block == std::make_pair<size_t, size_t>(1, 1));
        CHECK(cert.inconsistent_indices == std::make_pair<size_t, size_t>(1, 2));
        CHECK(cert.ratio_a == 2);
        CHECK(cert.ratio_b == 0);
        CHECK_FALSE(is_separable_lp(r, omega));
    }
    SECTION("lambda reconstructs the state exactly") {
        auto omega = make_state(r.composite,
                                {rat(1, 8), rat(1, 8), rat(1, 4), rat(1, 4), rat(1, 4)});
        auto cert = is_separable(r, omega);
        REQUIRE(cert.separable);
        RVector rebuilt(r.composite_dim(), 0);
        for (const auto& [pair_ij, lam] : cert.lambda) {
            CHECK(lam >= 0);
            auto prod = compose_states(r, vertex_state(r.left, pair_ij.first),
                                       vertex_state(r.right, pair_ij.second));
            for (size_t k = 0; k < rebuilt.size(); ++k) {
                rebuilt[k] += lam * prod.coords[k];
            }
        }
        CHECK(rebuilt == omega.coords);
    }
}

TEST_CASE("every state of a product-rule composite is separable") {
    Theory ct = generate_ct({2, 2});
    const CompositionRule& r = *ct.rule_by_name("AB");
    Rng rng(24601);
    for (int trial = 0; trial < 50; ++trial) {
        auto omega = random_state(rng, r.composite, false);
        auto cert = is_separable(r, omega);
        CHECK(cert.separable);
        CHECK(is_separable_lp(r, omega));
    }
}

TEST_CASE("closed-form separability agrees with the LP oracle on random states") {
    Rng rng(20240815);
    size_t checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        for (int s = 0; s < 12; ++s) {
            StateVector omega = [&] {
                switch (s % 3) {
                    case 0: return random_state(rng, r.composite, false);
                    case 1: return vertex_state(r.composite, 1 + rng.index(r.composite_dim()));
                    default:
                        return compose_states(r, random_state(rng, r.left, false),
                                              random_state(rng, r.right, false));
                }
            }();
            auto cert = is_separable(r, omega);
            CHECK(cert.separable == is_separable_lp(r, omega));
            ++checked;
        }
    }
    CHECK(checked == 360);
}

TEST_CASE("entanglement presence tracks oversized blocks") {
    Theory t5 = make_t5_theory();
    auto ent = entanglement_present(*t5.rule_by_name("AB"));
    CHECK(ent.present);
    CHECK(ent.witness_vertex == 1);

    Theory ct = generate_ct({2, 2});
    CHECK_FALSE(entanglement_present(*ct.rule_by_name("AB")).present);
}

TEST_CASE("causality verdicts across effect models") {
    auto full = make_system("A", 4);
    auto r1 = check_causality(full);
    REQUIRE(r1.status == CausalityStatus::Unique);
    CHECK(r1.effect->coords == RVector{1, 1, 1, 1});

    auto cone = make_system("A", 2, EffectModel::restricted({{1, 1}, {1, 0}}));
    auto r2 = check_causality(cone);
    REQUIRE(r2.status == CausalityStatus::Unique);
    CHECK(r2.effect->coords == RVector{1, 1});

    auto missing = make_system("A", 2, EffectModel::restricted({{1, 0}}));
    CHECK(check_causality(missing).status == CausalityStatus::NoDeterministicEffect);
}

TEST_CASE("classicality needs the dual basis inside the effect model") {
    auto full = make_system("A", 3);
    auto r1 = check_classicality(full);
    REQUIRE(r1.classical);
    REQUIRE(r1.test.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        for (size_t j = 1; j <= 3; ++j) {
            CHECK(pair(r1.test[i], vertex_state(full, j)) == (i + 1 == j ? 1 : 0));
        }
    }

    auto half = make_system("A", 2, EffectModel::restricted({{1, 1}, {1, 0}}));
    auto r2 = check_classicality(half);
    REQUIRE_FALSE(r2.classical);
    CHECK(verify_certificate(r2.lp, r2.certificate));

    auto basis = make_system("A", 2, EffectModel::restricted({{1, 0}, {0, 1}}));
    auto r3 = check_classicality(basis);
    REQUIRE(r3.classical);
    Rational total = 0;
    for (const auto& a : r3.test) {
        total += sum(a.coords);
    }
    CHECK(total == 2);  // the test sums to the deterministic effect
}

TEST_CASE("atomicity fails exactly on oversized blocks") {
    Theory t5 = make_t5_theory();
    auto r1 = check_atomicity(*t5.rule_by_name("AB"));
    REQUIRE_FALSE(r1.atomic);
    CHECK(r1.violating_pair == std::make_pair<size_t, size_t>(1, 1));

    Theory ct = generate_ct({3, 2});
    CHECK(check_atomicity(*ct.rule_by_name("AB")).atomic);
}

TEST_CASE("discriminability degree for one and two factors") {
    Theory ct = generate_ct({2, 2});
    CHECK(discriminability_degree(ct, {"A"}) == 1);
    CHECK(discriminability_degree(ct, {"A", "B"}) == 1);

    Theory t5 = make_t5_theory();
    CHECK(discriminability_degree(t5, {"A", "B"}) == 2);

    CHECK_THROWS_AS(discriminability_degree(ct, {"A", "B", "A", "B"}), TooManyFactors);
    CHECK_THROWS_AS(discriminability_degree(ct, {"B", "A"}), MissingRule);
}

TEST_CASE("discriminability degree for three factors") {
    Theory ct = generate_ct({2, 2, 2});
    CHECK(discriminability_degree(ct, {"A", "B", "C"}) == 1);

    Theory t5c = make_t5_triple_theory();
    CHECK(discriminability_degree(t5c, {"A", "B", "C"}) == 2);
}

TEST_CASE("associativity of declared triples") {
    SECTION("product rules associate with the identity bijection") {
        Theory ct = generate_ct({2, 2, 2});
        auto res = check_associativity(ct, "A", "B", "C");
        REQUIRE(res.associative);
        for (size_t m = 1; m <= res.bijection.size(); ++m) {
            CHECK(res.bijection[m - 1] == m);
        }
    }
    SECTION("consistent redistributed weights associate") {
        Theory t = make_t5_triple_theory();
        auto res = check_associativity(t, "A", "B", "C");
        REQUIRE(res.associative);
        // vertices 3,4 of A(BC) carry the (1,1,2) pairs of ((AB)C) = {2,4}
        CHECK(res.bijection[2] + res.bijection[3] == 6);
    }
    SECTION("dimension mismatches are reported") {
        Theory t = make_t5_theory();
        t.add_system(make_system("C", 2));
        std::vector<BlockEntry> prod10;
        size_t v = 1;
        for (size_t i = 1; i <= 5; ++i) {
            for (size_t j = 1; j <= 2; ++j) {
                prod10.push_back({i, j, {v++}, {1}});
            }
        }
        t.add_composite(make_rule(make_system("ABC", 10), t.find_system("AB"),
                                  t.find_system("C"), prod10));
        std::vector<BlockEntry> prod4;
        v = 1;
        for (size_t i = 1; i <= 2; ++i) {
            for (size_t j = 1; j <= 2; ++j) {
                prod4.push_back({i, j, {v++}, {1}});
            }
        }
        t.add_composite(
            make_rule(make_system("BC", 4), t.find_system("B"), t.find_system("C"), prod4));
        std::vector<BlockEntry> prod8;
        v = 1;
        for (size_t i = 1; i <= 2; ++i) {
            for (size_t j = 1; j <= 4; ++j) {
                prod8.push_back({i, j, {v++}, {1}});
            }
        }
        t.add_composite(
            make_rule(make_system("A(BC)", 8), t.find_system("A"), t.find_system("BC"), prod8));

        auto res = check_associativity(t, "A", "B", "C");
        REQUIRE_FALSE(res.associative);
        CHECK(res.mismatch.find("dimension mismatch") != std::string::npos);
    }
    SECTION("weight mismatches are reported") {
        Theory t = make_t5_triple_theory();
        Theory bad = make_t5_theory();
        bad.add_system(make_system("C", 2));
        bad.add_composite(*t.rule_by_name("ABC"));
        bad.add_composite(*t.rule_by_name("BC"));
        std::vector<BlockEntry> skewed = {{1, 1, {1, 2}, {rat(1, 3), rat(2, 3)}},
                                          {1, 2, {3, 4}, {rat(1, 2), rat(1, 2)}},
                                          {1, 3, {5}, {1}},
                                          {1, 4, {6}, {1}},
                                          {2, 1, {7}, {1}},
                                          {2, 2, {8}, {1}},
                                          {2, 3, {9}, {1}},
                                          {2, 4, {10}, {1}}};
        bad.add_composite(make_rule(make_system("A(BC)", 10), bad.find_system("A"),
                                    bad.find_system("BC"), skewed));
        auto res = check_associativity(bad, "A", "B", "C");
        REQUIRE_FALSE(res.associative);
        CHECK(res.mismatch.find("weight multiset mismatch") != std::string::npos);
    }
    SECTION("missing rules are reported") {
        Theory t5 = make_t5_theory();
        CHECK_THROWS_AS(check_associativity(t5, "A", "B", "B"), MissingRule);
    }
}

TEST_CASE("composite analysis reports are internally consistent") {
    Theory t5 = make_t5_theory();
    auto rep = analyze_composite(*t5.rule_by_name("AB"));
    CHECK(rep.excess == 1);
    CHECK(rep.entanglement.present);
    CHECK(rep.entanglement.witness_vertex == 1);
    CHECK_FALSE(rep.atomicity.atomic);
    CHECK_FALSE(rep.local_discriminability);
    CHECK(rep.degree == 2);
    CHECK(rep.causality.status == CausalityStatus::Unique);
    CHECK(rep.classicality.classical);

    Theory ct = generate_ct({2, 3});
    auto rep2 = analyze_composite(*ct.rule_by_name("AB"));
    CHECK(rep2.excess == 0);
    CHECK_FALSE(rep2.entanglement.present);
    CHECK(rep2.atomicity.atomic);
    CHECK(rep2.local_discriminability);
    CHECK(rep2.degree == 1);
}

TEST_CASE("equivalences hold across a randomized battery") {
    Rng rng(5551212);
    for (int trial = 0; trial < 60; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        auto rep = analyze_composite(r);  // throws if any equivalence breaks
        CHECK((rep.excess > 0) == rep.entanglement.present);
        CHECK(rep.entanglement.present == !rep.atomicity.atomic);
        CHECK(rep.entanglement.present == !rep.local_discriminability);
        CHECK(rep.entanglement.present == (discriminability_degree(t, {"A", "B"}) == 2));
    }
}
