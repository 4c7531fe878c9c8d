// Theory generators: classical product theories, toy theories with excess
// composite dimension, seeded random rules, and restricted-effect system
// families used by the property batteries. All randomness flows through a
// single engine so outputs are reproducible given a seed.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sopt/theory.hpp"

namespace sopt {

// mt19937_64 bit stream with hand-rolled draws: std::uniform_int_distribution
// is not specified bit-for-bit across standard libraries, and generator
// output must be stable for golden files.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(uint64_t seed) : eng(seed) {}

    // inclusive bounds, unbiased by rejection
    uint64_t uniform(uint64_t lo, uint64_t hi) {
        uint64_t span = hi - lo + 1;
        if (span == 0) {  // whole range
            return eng();
        }
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t x;
        do {
            x = eng();
        } while (x >= limit);
        return lo + x % span;
    }

    size_t index(size_t count) {
        return static_cast<size_t>(uniform(0, count - 1));
    }
};

// s positive rationals over a common denominator <= max(max_den, s),
// summing to exactly 1.
inline RVector random_block_weights(Rng& rng, size_t s, size_t max_den = 16) {
    if (s == 1) {
        return {1};
    }
    size_t den = static_cast<size_t>(rng.uniform(std::max<size_t>(2, s), std::max(max_den, s)));
    std::vector<size_t> pool(den - 1);
    for (size_t t = 0; t < pool.size(); ++t) {
        pool[t] = t + 1;
    }
    for (size_t t = 0; t + 1 < s; ++t) {  // partial shuffle picks s-1 distinct cuts
        std::swap(pool[t], pool[t + rng.index(pool.size() - t)]);
    }
    std::vector<size_t> cuts(pool.begin(), pool.begin() + (s - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(den);
    RVector w(s);
    size_t prev = 0;
    for (size_t t = 0; t < s; ++t) {
        w[t] = rat(static_cast<long long>(cuts[t] - prev), static_cast<long long>(den));
        prev = cuts[t];
    }
    return w;
}

inline std::string default_system_name(size_t index) {
    if (index < 26) {
        return std::string(1, static_cast<char>('A' + index));
    }
    return "S" + std::to_string(index + 1);
}

namespace detail {

// Product composition with singleton blocks: D_AB = D_A·D_B, weights all 1.
inline CompositionRule product_rule(const std::string& name, SystemPtr left, SystemPtr right) {
    std::vector<BlockEntry> blocks;
    size_t v = 1;
    for (size_t i = 1; i <= left->dim; ++i) {
        for (size_t j = 1; j <= right->dim; ++j) {
            blocks.push_back({i, j, {v++}, {1}});
        }
    }
    SystemPtr comp = make_system(name, left->dim * right->dim);
    return make_rule(std::move(comp), std::move(left), std::move(right), std::move(blocks));
}

}  // namespace detail

// Classical product theory over the given dimensions: full-dual systems, all
// pairwise composites, the left-associated chain, and for each consecutive
// triple the right-associated helper (A, BC) so triple analyses have every
// rule they need.
inline Theory generate_ct(const std::vector<size_t>& dims) {
    if (dims.empty()) {
        throw std::invalid_argument("generate_ct: need at least one dimension");
    }
    Theory t;
    std::vector<std::string> names;
    for (size_t n = 0; n < dims.size(); ++n) {
        if (dims[n] < 1) {
            throw std::invalid_argument("generate_ct: dimensions must be >= 1");
        }
        names.push_back(default_system_name(n));
        t.add_system(make_system(names.back(), dims[n]));
    }
    for (size_t a = 0; a < dims.size(); ++a) {
        for (size_t b = a + 1; b < dims.size(); ++b) {
            t.add_composite(detail::product_rule(names[a] + names[b], t.find_system(names[a]),
                                                 t.find_system(names[b])));
        }
    }
    // left-associated chain beyond pairs: ABC, ABCD, ...
    std::string prefix = dims.size() >= 2 ? names[0] + names[1] : names[0];
    for (size_t n = 2; n < dims.size(); ++n) {
        std::string next = prefix + names[n];
        t.add_composite(detail::product_rule(next, t.find_system(prefix), t.find_system(names[n])));
        prefix = std::move(next);
    }
    // right-associated helpers per consecutive triple: A(BC), B(CD), ...
    for (size_t n = 0; n + 2 < dims.size(); ++n) {
        std::string inner = names[n + 1] + names[n + 2];
        t.add_composite(detail::product_rule(names[n] + "(" + inner + ")", t.find_system(names[n]),
                                             t.find_system(inner)));
    }
    return t;
}

// Two full-dual systems with a composite of dimension d_a·d_b + delta: the
// extra vertices land in seeded-random blocks and every oversized block gets
// random positive weights summing to 1. Canonical numbering: blocks ordered
// by (i,j), vertices consecutive.
inline Theory generate_toy(size_t d_a, size_t d_b, size_t delta, uint64_t seed,
                           size_t max_den = 16) {
    if (d_a < 1 || d_b < 1) {
        throw std::invalid_argument("generate_toy: dimensions must be >= 1");
    }
    if (delta < 1) {
        throw std::invalid_argument("generate_toy: delta must be >= 1 (a composite without "
                                    "excess dimension carries no entanglement)");
    }
    Rng rng(seed);
    std::vector<std::vector<size_t>> extra(d_a, std::vector<size_t>(d_b, 0));
    for (size_t n = 0; n < delta; ++n) {
        ++extra[rng.index(d_a)][rng.index(d_b)];
    }
    Theory t;
    t.add_system(make_system("A", d_a));
    t.add_system(make_system("B", d_b));
    std::vector<BlockEntry> blocks;
    size_t v = 1;
    for (size_t i = 1; i <= d_a; ++i) {
        for (size_t j = 1; j <= d_b; ++j) {
            size_t size = 1 + extra[i - 1][j - 1];
            BlockEntry b{i, j, {}, {}};
            for (size_t n = 0; n < size; ++n) {
                b.vertices.push_back(v++);
            }
            b.weights = random_block_weights(rng, size, max_den);
            blocks.push_back(std::move(b));
        }
    }
    SystemPtr comp = make_system("AB", d_a * d_b + delta);
    t.add_composite(
        make_rule(std::move(comp), t.find_system("A"), t.find_system("B"), std::move(blocks)));
    return t;
}

// Seeded random bipartite theory: dimensions in [1,4], excess in [0,3] (so
// both entangled and entanglement-free composites occur).
inline Theory generate_random(uint64_t seed, size_t max_dim = 4, size_t max_delta = 3,
                              size_t max_den = 16) {
    Rng rng(seed);
    size_t d_a = static_cast<size_t>(rng.uniform(1, max_dim));
    size_t d_b = static_cast<size_t>(rng.uniform(1, max_dim));
    size_t delta = static_cast<size_t>(rng.uniform(0, max_delta));
    if (delta == 0) {
        Theory t;
        t.add_system(make_system("A", d_a));
        t.add_system(make_system("B", d_b));
        t.add_composite(detail::product_rule("AB", t.find_system("A"), t.find_system("B")));
        return t;
    }
    // reuse the toy layout under a fresh stream so (seed, dims) fully
    // determine the blocks
    Theory t = generate_toy(d_a, d_b, delta, rng.eng(), max_den);
    return t;
}

// Restricted effect model spanned by the dual basis itself: the classical
// observation is available, nothing else is.
inline SystemPtr restricted_classical_system(const std::string& name, size_t d) {
    std::vector<RVector> gens;
    for (size_t i = 0; i < d; ++i) {
        RVector g(d, 0);
        g[i] = 1;
        gens.push_back(std::move(g));
    }
    return make_system(name, d, EffectModel::restricted(std::move(gens)));
}

// d + extra vertices (extra >= 2). Generators: the dual functionals of the
// first d vertices, their sums with each extra-vertex functional, and the
// indicator of the extra vertices. The greedy maximal discriminable set is
// {1..d+1}, and all remaining free columns are pinned to the vertex d+1
// coordinate: the observation polytope is a single point.
inline SystemPtr restricted_forced_system(const std::string& name, size_t d, size_t extra) {
    if (d < 1 || extra < 2) {
        throw std::invalid_argument("restricted_forced_system: need d >= 1, extra >= 2");
    }
    size_t dim = d + extra;
    std::vector<RVector> gens;
    auto basis = [dim](size_t v) {
        RVector g(dim, 0);
        g[v - 1] = 1;
        return g;
    };
    for (size_t i = 1; i <= d; ++i) {
        gens.push_back(basis(i));
    }
    for (size_t i = 1; i <= d; ++i) {
        for (size_t k = d + 1; k <= dim; ++k) {
            RVector g = basis(i);
            g[k - 1] = 1;
            gens.push_back(std::move(g));
        }
    }
    RVector mask(dim, 0);
    for (size_t k = d + 1; k <= dim; ++k) {
        mask[k - 1] = 1;
    }
    gens.push_back(std::move(mask));
    return make_system(name, dim, EffectModel::restricted(std::move(gens)));
}

// d + 2 vertices (d >= 2). Generators: the first d dual functionals plus the
// four couplings (vertex 1 or 2) + (either extra vertex). The maximal
// discriminable set is exactly {1..d} and the observation polytope is a
// one-parameter segment: free columns exist but are genuinely constrained.
inline SystemPtr restricted_segment_system(const std::string& name, size_t d) {
    if (d < 2) {
        throw std::invalid_argument("restricted_segment_system: need d >= 2");
    }
    size_t dim = d + 2;
    std::vector<RVector> gens;
    for (size_t i = 1; i <= d; ++i) {
        RVector g(dim, 0);
        g[i - 1] = 1;
        gens.push_back(std::move(g));
    }
    for (size_t i = 1; i <= 2; ++i) {
        for (size_t k = d + 1; k <= dim; ++k) {
            RVector g(dim, 0);
            g[i - 1] = 1;
            g[k - 1] = 1;
            gens.push_back(std::move(g));
        }
    }
    return make_system(name, dim, EffectModel::restricted(std::move(gens)));
}

// Valid random restricted model: the all-ones vector is always a generator,
// the rest are random box vectors over small denominators.
inline SystemPtr restricted_random_system(Rng& rng, const std::string& name, size_t d,
                                          size_t extra_generators, size_t max_den = 8) {
    std::vector<RVector> gens;
    gens.push_back(RVector(d, 1));
    for (size_t g = 0; g < extra_generators; ++g) {
        RVector v(d);
        for (auto& x : v) {
            uint64_t den = rng.uniform(1, max_den);
            x = rat(static_cast<long long>(rng.uniform(0, den)), static_cast<long long>(den));
        }
        gens.push_back(std::move(v));
    }
    return make_system(name, d, EffectModel::restricted(std::move(gens)));
}

// Valid random state: coordinates are nonnegative rationals scaled so the
// total lands in [0, 1]; deterministic targets are renormalized to sum 1.
inline StateVector random_state(Rng& rng, const SystemPtr& s, bool deterministic,
                                size_t max_den = 16) {
    RVector c(s->dim);
    Rational total = 0;
    for (auto& x : c) {
        uint64_t den = rng.uniform(1, max_den);
        x = rat(static_cast<long long>(rng.uniform(0, den)), static_cast<long long>(den));
        total += x;
    }
    if (total == 0) {
        c[rng.index(s->dim)] = 1;
        total = 1;
    }
    if (deterministic) {
        for (auto& x : c) {
            x /= total;
        }
    } else if (total > 1) {
        Rational cap = rat(static_cast<long long>(rng.uniform(1, max_den)),
                           static_cast<long long>(max_den));
        for (auto& x : c) {
            x *= cap / total;
        }
    }
    return make_state(s, std::move(c));
}

// Valid random effect in the full dual box.
inline EffectVector random_box_effect(Rng& rng, const SystemPtr& s, size_t max_den = 16) {
    RVector c(s->dim);
    for (auto& x : c) {
        uint64_t den = rng.uniform(1, max_den);
        x = rat(static_cast<long long>(rng.uniform(0, den)), static_cast<long long>(den));
    }
    return make_effect(s, std::move(c));
}

}  // namespace sopt
