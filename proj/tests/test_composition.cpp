#include <catch2/catch_amalgamated.hpp>

#include "sopt/composition.hpp"
#include "sopt/generate.hpp"
#include "sopt/theory.hpp"

using namespace sopt;

namespace {

// D_AB = 5 over two bits: block (1,1) holds vertices {1,2} with weights
// (1/2, 1/2), the other blocks are singletons.
CompositionRule make_t5() {
    auto A = make_system("A", 2);
    auto B = make_system("B", 2);
    auto AB = make_system("AB", 5);
    std::vector<BlockEntry> blocks = {
        {1, 1, {1, 2}, {rat(1, 2), rat(1, 2)}},
        {1, 2, {3}, {1}},
        {2, 1, {4}, {1}},
        {2, 2, {5}, {1}},
    };
    return make_rule(AB, A, B, blocks);
}

// independent oracle: expand the product over all vertex pairs
RVector brute_force_product(const CompositionRule& r, const StateVector& rho,
                            const StateVector& sigma) {
    RVector out(r.composite_dim(), 0);
    for (size_t i = 1; i <= r.left->dim; ++i) {
        for (size_t j = 1; j <= r.right->dim; ++j) {
            RVector basis =
                compose_states(r, vertex_state(r.left, i), vertex_state(r.right, j)).coords;
            for (size_t k = 0; k < out.size(); ++k) {
                out[k] += rho.coords[i - 1] * sigma.coords[j - 1] * basis[k];
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("rule validation accepts the worked examples") {
    auto A = make_system("A", 2);
    auto B = make_system("B", 2);

    std::vector<BlockEntry> ct = {
        {1, 1, {1}, {1}}, {1, 2, {2}, {1}}, {2, 1, {3}, {1}}, {2, 2, {4}, {1}}};
    CHECK(validate_rule(A, B, 4, ct).valid());

    std::vector<BlockEntry> t5 = {{1, 1, {1, 2}, {rat(1, 2), rat(1, 2)}},
                                  {1, 2, {3}, {1}},
                                  {2, 1, {4}, {1}},
                                  {2, 2, {5}, {1}}};
    CHECK(validate_rule(A, B, 5, t5).valid());
}

TEST_CASE("rule validation reports violations") {
    auto A = make_system("A", 2);
    auto B = make_system("B", 2);

    SECTION("overlapping blocks") {
        std::vector<BlockEntry> bad = {
            {1, 1, {1}, {1}}, {1, 2, {1}, {1}}, {2, 1, {2}, {1}}, {2, 2, {3}, {1}}};
        auto rep = validate_rule(A, B, 4, bad);
        REQUIRE_FALSE(rep.valid());
        bool mentions_disjoint = false;
        for (const auto& v : rep.violations) {
            mentions_disjoint |= v.find("not disjoint") != std::string::npos;
        }
        CHECK(mentions_disjoint);
    }
    SECTION("weights must sum to 1") {
        std::vector<BlockEntry> bad = {{1, 1, {1, 2}, {rat(1, 2), rat(1, 3)}},
                                       {1, 2, {3}, {1}},
                                       {2, 1, {4}, {1}},
                                       {2, 2, {5}, {1}}};
        auto rep = validate_rule(A, B, 5, bad);
        REQUIRE_FALSE(rep.valid());
        CHECK(rep.violations.front().find("weights sum != 1") != std::string::npos);
    }
    SECTION("weights must be positive") {
        std::vector<BlockEntry> bad = {{1, 1, {1, 2}, {rat(3, 2), rat(-1, 2)}},
                                       {1, 2, {3}, {1}},
                                       {2, 1, {4}, {1}},
                                       {2, 2, {5}, {1}}};
        CHECK_FALSE(validate_rule(A, B, 5, bad).valid());
    }
    SECTION("every pair needs a block and every vertex an owner") {
        std::vector<BlockEntry> bad = {{1, 1, {1}, {1}}, {1, 2, {2}, {1}}, {2, 1, {3}, {1}}};
        auto rep = validate_rule(A, B, 5, bad);
        REQUIRE_FALSE(rep.valid());
        bool missing = false, uncovered = false;
        for (const auto& v : rep.violations) {
            missing |= v.find("missing block (2,2)") != std::string::npos;
            uncovered |= v.find("unassigned") != std::string::npos;
        }
        CHECK(missing);
        CHECK(uncovered);
    }
    SECTION("composite dimension cannot undercut the product") {
        std::vector<BlockEntry> bad = {{1, 1, {1}, {1}}, {1, 2, {2}, {1}}, {2, 1, {3}, {1}},
                                       {2, 2, {3}, {1}}};
        auto rep = validate_rule(A, B, 3, bad);
        CHECK_FALSE(rep.valid());
    }
    SECTION("make_rule throws on invalid data") {
        std::vector<BlockEntry> bad = {
            {1, 1, {1}, {1}}, {1, 2, {1}, {1}}, {2, 1, {2}, {1}}, {2, 2, {3}, {1}}};
        CHECK_THROWS_AS(make_rule(make_system("AB", 3), A, B, bad), ValidationError);
    }
}

TEST_CASE("products of vertices spread over blocks") {
    auto r = make_t5();
    CHECK(compose_states(r, vertex_state(r.left, 1), vertex_state(r.right, 1)).coords ==
          RVector{rat(1, 2), rat(1, 2), 0, 0, 0});
    CHECK(compose_states(r, vertex_state(r.left, 2), vertex_state(r.right, 2)).coords ==
          RVector{0, 0, 0, 0, 1});
}

TEST_CASE("bilinear product expansion agrees with the brute-force oracle") {
    auto r = make_t5();
    StateVector rho = make_state(r.left, {rat(1, 2), rat(1, 2)});
    StateVector sigma = vertex_state(r.right, 1);
    RVector expected = brute_force_product(r, rho, sigma);
    // block (2,1) holds vertex 4, so the ρ_2·σ_1 mass lands there
    CHECK(expected == RVector{rat(1, 4), rat(1, 4), 0, rat(1, 2), 0});
    CHECK(compose_states(r, rho, sigma).coords == expected);
}

TEST_CASE("product effects evaluate through the block labels") {
    auto r = make_t5();
    auto eA = deterministic_effect(r.left);
    auto eB = deterministic_effect(r.right);
    CHECK(compose_effects(r, eA, eB).coords == RVector{1, 1, 1, 1, 1});

    auto b1a = dual_basis_effect(r.left, 1);
    auto b1b = dual_basis_effect(r.right, 1);
    auto b2b = dual_basis_effect(r.right, 2);
    CHECK(compose_effects(r, b1a, b1b).coords[0] == 1);  // vertex 1 sits in block (1,1)
    CHECK(compose_effects(r, b1a, b2b).coords[1] == 0);  // vertex 2 also sits in block (1,1)
}

TEST_CASE("system mismatches are rejected") {
    auto r = make_t5();
    auto C = make_system("C", 3);
    CHECK_THROWS_AS(compose_states(r, vertex_state(C, 1), vertex_state(r.right, 1)),
                    SystemMismatch);
    CHECK_THROWS_AS(compose_effects(r, dual_basis_effect(r.left, 1), dual_basis_effect(C, 1)),
                    SystemMismatch);
    CHECK_THROWS_AS(marginalize(r, vertex_state(C, 1), Side::Left), SystemMismatch);
}

TEST_CASE("marginals collapse composite vertices onto factor vertices") {
    auto r = make_t5();
    CHECK(marginalize(r, vertex_state(r.composite, 1), Side::Left).coords == RVector{1, 0});
    CHECK(marginalize(r, vertex_state(r.composite, 1), Side::Right).coords == RVector{1, 0});
    CHECK(marginalize(r, vertex_state(r.composite, 4), Side::Left).coords == RVector{0, 1});

    auto prod = compose_states(r, vertex_state(r.left, 1), vertex_state(r.right, 1));
    CHECK(marginalize(r, prod, Side::Left).coords == RVector{1, 0});

    CHECK(is_zero(marginalize(r, null_state(r.composite), Side::Left).coords));
}

TEST_CASE("excess dimension arithmetic") {
    auto r = make_t5();
    CHECK(excess_dimension(r) == 1);

    Theory ct = generate_ct({2, 2});
    CHECK(excess_dimension(*ct.rule_by_name("AB")) == 0);

    Theory big = generate_toy(3, 2, 5, 7);
    CHECK(excess_dimension(*big.rule_by_name("AB")) == 5);
    CHECK(big.rule_by_name("AB")->composite_dim() == 11);
}

TEST_CASE("composition is exactly bilinear on random inputs") {
    Rng rng(171200);
    for (int trial = 0; trial < 30; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        StateVector r1 = random_state(rng, r.left, false);
        StateVector r2 = random_state(rng, r.left, false);
        StateVector sig = random_state(rng, r.right, false);
        Rational p1 = rat(1, 3), p2 = rat(1, 2);

        RVector mixed(r.left->dim);
        for (size_t i = 0; i < mixed.size(); ++i) {
            mixed[i] = p1 * r1.coords[i] + p2 * r2.coords[i];
        }
        RVector lhs = compose_states(r, make_state(r.left, mixed), sig).coords;
        RVector c1 = compose_states(r, r1, sig).coords;
        RVector c2 = compose_states(r, r2, sig).coords;
        for (size_t k = 0; k < lhs.size(); ++k) {
            CHECK(lhs[k] == p1 * c1[k] + p2 * c2[k]);
        }
    }
}

TEST_CASE("pairing factorizes over products on random inputs") {
    Rng rng(445533);
    for (int trial = 0; trial < 30; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        auto a = random_box_effect(rng, r.left);
        auto b = random_box_effect(rng, r.right);
        auto rho = random_state(rng, r.left, false);
        auto sig = random_state(rng, r.right, false);
        CHECK(pair(compose_effects(r, a, b), compose_states(r, rho, sig)) ==
              pair(a, rho) * pair(b, sig));
    }
}

TEST_CASE("composition preserves total mass multiplicatively") {
    Rng rng(90125);
    for (int trial = 0; trial < 30; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        auto rho = random_state(rng, r.left, trial % 2 == 0);
        auto sig = random_state(rng, r.right, false);
        CHECK(sum(compose_states(r, rho, sig).coords) == sum(rho.coords) * sum(sig.coords));
    }
}

TEST_CASE("marginals of composite vertices are vertices of the kept factor") {
    Rng rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        for (size_t k = 1; k <= r.composite_dim(); ++k) {
            for (Side side : {Side::Left, Side::Right}) {
                auto marg = marginalize(r, vertex_state(r.composite, k), side);
                auto cls = classify_state(marg);
                CHECK(cls.cls == StateClass::PureVertex);
                CHECK(cls.vertex == (side == Side::Left ? r.label[k - 1].first
                                                        : r.label[k - 1].second));
            }
        }
    }
}

TEST_CASE("brute-force product expansion matches on random rules") {
    Rng rng(777001);
    for (int trial = 0; trial < 25; ++trial) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        auto rho = random_state(rng, r.left, false);
        auto sig = random_state(rng, r.right, false);
        CHECK(compose_states(r, rho, sig).coords == brute_force_product(r, rho, sig));
    }
}

TEST_CASE("n-fold composition walks declared rules left to right") {
    Theory ct = generate_ct({2, 2, 2});
    auto triple = compose_nfold(ct, {"A", "B", "C"});
    CHECK(triple.system->dim == 8);
    CHECK(triple.chain.size() == 2);

    auto single = compose_nfold(ct, {"B"});
    CHECK(single.system->name == "B");
    CHECK(single.chain.empty());

    CHECK_THROWS_AS(compose_nfold(ct, {"C", "A"}), MissingRule);
    CHECK_THROWS_AS(compose_nfold(ct, {"A", "Z"}), UnknownSystem);
}

TEST_CASE("toy generator output always validates") {
    Rng rng(5150);
    for (int trial = 0; trial < 40; ++trial) {
        size_t d_a = 1 + rng.index(4), d_b = 1 + rng.index(4), delta = 1 + rng.index(4);
        Theory t = generate_toy(d_a, d_b, delta, rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        CHECK(excess_dimension(r) == delta);
        CHECK(validate_rule(r.left, r.right, r.composite_dim(),
                            std::vector<BlockEntry>(r.blocks.begin(), r.blocks.end()))
                  .valid());
        for (const auto& b : r.blocks) {
            CHECK(sum(b.weights) == 1);
            for (const auto& w : b.weights) {
                CHECK(w > 0);
            }
        }
    }
    CHECK_THROWS_AS(generate_toy(2, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("toy generator is deterministic in the seed") {
    Theory a = generate_toy(3, 3, 4, 99);
    Theory b = generate_toy(3, 3, 4, 99);
    const CompositionRule& ra = *a.rule_by_name("AB");
    const CompositionRule& rb = *b.rule_by_name("AB");
    REQUIRE(ra.blocks.size() == rb.blocks.size());
    for (size_t n = 0; n < ra.blocks.size(); ++n) {
        CHECK(ra.blocks[n].vertices == rb.blocks[n].vertices);
        CHECK(ra.blocks[n].weights == rb.blocks[n].weights);
    }
}
