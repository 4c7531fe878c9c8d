// Decision procedures on systems and composition rules: separability with
// certificates (closed form plus an independent LP oracle), causality,
// classicality, atomicity of state-composition, discriminability degree, and
// associativity of declared rule triples.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sopt/linalg.hpp"
#include "sopt/theory.hpp"

namespace sopt {

// Separable means ω = Σ_ij λ_ij · (|i⟩ ⊠ |j⟩) with λ_ij >= 0. Because blocks
// partition the composite vertices, the decomposition is unique when it
// exists: within block (i,j) every coordinate must be λ_ij · p_k.
struct SeparabilityCertificate {
    bool separable = false;

    // Separable: λ per block, aligned with rule.blocks (sorted by (i,j)).
    std::vector<std::pair<std::pair<size_t, size_t>, Rational>> lambda;

    // Entangled: the offending block and two composite vertices in it whose
    // ratios ω_k / p_k differ.
    std::pair<size_t, size_t> violating_block{0, 0};
    std::pair<size_t, size_t> inconsistent_indices{0, 0};
    Rational ratio_a, ratio_b;
};

inline SeparabilityCertificate is_separable(const CompositionRule& r, const StateVector& omega) {
    if (!same_system(omega.system, r.composite)) {
        throw SystemMismatch("is_separable: state is on '" + omega.system->name +
                             "', rule composes '" + r.composite->name + "'");
    }
    SeparabilityCertificate cert;
    for (const auto& b : r.blocks) {
        size_t k0 = b.vertices[0];
        Rational ratio = omega.coords[k0 - 1] / b.weights[0];
        for (size_t t = 1; t < b.vertices.size(); ++t) {
            size_t k = b.vertices[t];
            Rational other = omega.coords[k - 1] / b.weights[t];
            if (other != ratio) {
                cert.separable = false;
                cert.violating_block = {b.i, b.j};
                cert.inconsistent_indices = {k0, k};
                cert.ratio_a = ratio;
                cert.ratio_b = other;
                return cert;
            }
        }
        cert.lambda.push_back({{b.i, b.j}, ratio});
    }
    cert.separable = true;
    return cert;
}

// Independent oracle: membership of ω in the cone generated by the product
// states |i⟩ ⊠ |j⟩, decided by exact LP. Kept deliberately separate from the
// closed form above so the two can be played against each other.
inline bool is_separable_lp(const CompositionRule& r, const StateVector& omega) {
    if (!same_system(omega.system, r.composite)) {
        throw SystemMismatch("is_separable_lp: state is on '" + omega.system->name +
                             "', rule composes '" + r.composite->name + "'");
    }
    std::vector<RVector> products;
    for (size_t i = 1; i <= r.left->dim; ++i) {
        for (size_t j = 1; j <= r.right->dim; ++j) {
            products.push_back(
                compose_states(r, vertex_state(r.left, i), vertex_state(r.right, j)).coords);
        }
    }
    LPProblem p(products.size());
    p.set_all_nonneg();
    for (size_t k = 0; k < r.composite_dim(); ++k) {
        RVector row(products.size());
        for (size_t g = 0; g < products.size(); ++g) {
            row[g] = products[g][k];
        }
        p.add_eq(std::move(row), omega.coords[k]);
    }
    return lp_feasible(p).feasible;
}

struct EntanglementResult {
    bool present = false;
    size_t witness_vertex = 0;  // lowest vertex of the first oversized block
};

inline EntanglementResult entanglement_present(const CompositionRule& r) {
    for (const auto& b : r.blocks) {  // sorted by (i, j)
        if (b.vertices.size() < 2) {
            continue;
        }
        size_t witness = *std::min_element(b.vertices.begin(), b.vertices.end());
        auto check = is_separable(r, vertex_state(r.composite, witness));
        if (check.separable) {
            throw std::logic_error("entanglement_present: oversized block vertex " +
                                   std::to_string(witness) + " came back separable");
        }
        return {true, witness};
    }
    return {false, 0};
}

enum class CausalityStatus { Unique, NoDeterministicEffect };

// A deterministic effect a must satisfy pair(a, |j⟩) = 1 for every vertex j,
// and vertex evaluations are exactly the dual-basis coordinates, so the only
// candidate is the all-ones vector; non-uniqueness cannot occur. What can
// fail is membership of that candidate in a restricted effect model.
struct CausalityResult {
    CausalityStatus status = CausalityStatus::NoDeterministicEffect;
    std::optional<EffectVector> effect;
};

inline CausalityResult check_causality(const SystemPtr& s) {
    RVector ones(s->dim, 1);
    if (!is_effect(s, ones).ok) {
        return {CausalityStatus::NoDeterministicEffect, std::nullopt};
    }
    return {CausalityStatus::Unique, EffectVector{s, std::move(ones)}};
}

// Classical systems admit an observation test {a_1..a_D} with
// pair(a_i, |j⟩) = δ_ij. Those constraints pin a_i to the dual-basis
// functional b_i, so the one LP asks whether every b_i lies in the model;
// the test sums to the deterministic effect automatically.
struct ClassicalityResult {
    bool classical = false;
    std::vector<EffectVector> test;  // when classical
    FarkasCertificate certificate;   // when not (over the joint cone LP)
    LPProblem lp{0};                 // the LP the certificate refers to
};

inline ClassicalityResult check_classicality(const SystemPtr& s) {
    ClassicalityResult out;
    if (s->effects.kind == EffectModel::Kind::FullDual) {
        out.classical = true;
        for (size_t i = 1; i <= s->dim; ++i) {
            out.test.push_back(dual_basis_effect(s, i));
        }
        return out;
    }
    const auto& gens = s->effects.generators;
    size_t d = s->dim;
    // variables: coefficients c[i][g] >= 0 with Σ_g c[i][g]·gen_g = b_i
    LPProblem p(d * gens.size());
    p.set_all_nonneg();
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) {
            RVector row(p.num_vars, 0);
            for (size_t g = 0; g < gens.size(); ++g) {
                row[i * gens.size() + g] = gens[g][j];
            }
            p.add_eq(std::move(row), i == j ? 1 : 0);
        }
    }
    auto r = lp_feasible(p);
    if (!r.feasible) {
        out.classical = false;
        out.certificate = std::move(r.certificate);
        out.lp = std::move(p);
        return out;
    }
    out.classical = true;
    for (size_t i = 0; i < d; ++i) {
        RVector coords(d, 0);
        coords[i] = 1;
        out.test.push_back(EffectVector{s, std::move(coords)});
    }
    return out;
}

struct AtomicityResult {
    bool atomic = false;
    std::pair<size_t, size_t> violating_pair{0, 0};  // block with >= 2 vertices
};

// Products of pure states stay pure exactly when every block is a singleton.
inline AtomicityResult check_atomicity(const CompositionRule& r) {
    for (const auto& b : r.blocks) {
        if (b.vertices.size() >= 2) {
            return {false, {b.i, b.j}};
        }
    }
    return {true, {0, 0}};
}

namespace detail {

// rank of the span of block-indicator functionals: row (i,j) is 1 exactly on
// the composite vertices labeled (i,j). Product effects a ⊠ b span exactly
// this space.
inline size_t pair_indicator_rank(const CompositionRule& r) {
    std::vector<RVector> rows;
    for (const auto& b : r.blocks) {
        RVector row(r.composite_dim(), 0);
        for (size_t v : b.vertices) {
            row[v - 1] = 1;
        }
        rows.push_back(std::move(row));
    }
    return rank(RMatrix(std::move(rows)));
}

}  // namespace detail

struct AssociativityResult {
    bool associative = false;
    std::string mismatch;  // set when not associative

    // vertex m' of A(BC) (position m'-1) maps to vertex of (AB)C
    std::vector<size_t> bijection;
};

// Compares ((A B) C) against (A (B C)): both bracketings must produce the
// same dimension and, triple of factor vertices by triple, the same multiset
// of composed weights. States are identified by their pairing probabilities,
// so weights are observable and must match exactly.
inline AssociativityResult check_associativity(const Theory& t, const std::string& a,
                                               const std::string& b, const std::string& c) {
    SystemPtr A = t.find_system(a), B = t.find_system(b), C = t.find_system(c);
    const CompositionRule& rab = t.require_rule(a, b);
    const CompositionRule& rab_c = t.require_rule(rab.composite->name, c);
    const CompositionRule& rbc = t.require_rule(b, c);
    const CompositionRule& ra_bc = t.require_rule(a, rbc.composite->name);

    AssociativityResult out;
    if (rab_c.composite_dim() != ra_bc.composite_dim()) {
        out.mismatch = "dimension mismatch: D_(" + a + b + ")" + c + " = " +
                       std::to_string(rab_c.composite_dim()) + " vs D_" + a + "(" + b + c +
                       ") = " + std::to_string(ra_bc.composite_dim());
        return out;
    }

    using Triple = std::tuple<size_t, size_t, size_t>;
    // (weight, vertex) lists per factor-vertex triple, for each bracketing
    std::map<Triple, std::vector<std::pair<Rational, size_t>>> lhs, rhs;
    for (size_t m = 1; m <= rab_c.composite_dim(); ++m) {
        auto [u, l] = rab_c.label[m - 1];
        auto [i, j] = rab.label[u - 1];
        lhs[{i, j, l}].push_back({rab.weight[u - 1] * rab_c.weight[m - 1], m});
    }
    for (size_t m = 1; m <= ra_bc.composite_dim(); ++m) {
        auto [i, v] = ra_bc.label[m - 1];
        auto [j, l] = rbc.label[v - 1];
        rhs[{i, j, l}].push_back({rbc.weight[v - 1] * ra_bc.weight[m - 1], m});
    }

    out.bijection.assign(ra_bc.composite_dim(), 0);
    for (auto& [triple, left_list] : lhs) {
        auto it = rhs.find(triple);
        auto [i, j, l] = triple;
        std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                          std::to_string(l) + ")";
        if (it == rhs.end() || it->second.size() != left_list.size()) {
            out.mismatch = "block size mismatch at triple " + tag;
            return out;
        }
        auto& right_list = it->second;
        std::sort(left_list.begin(), left_list.end());
        std::sort(right_list.begin(), right_list.end());
        for (size_t t2 = 0; t2 < left_list.size(); ++t2) {
            if (left_list[t2].first != right_list[t2].first) {
                out.mismatch = "weight multiset mismatch at triple " + tag + ": " +
                               to_string(left_list[t2].first) + " vs " +
                               to_string(right_list[t2].first);
                return out;
            }
            out.bijection[right_list[t2].second - 1] = left_list[t2].second;
        }
    }
    out.associative = true;
    return out;
}

// Smallest n ≤ 3 such that conic products of effects on groupings of at most
// n adjacent factors span the composite's full dual space; decided by rank.
inline int discriminability_degree(const Theory& t, const std::vector<std::string>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("discriminability_degree: empty factor list");
    }
    if (factors.size() > 3) {
        throw TooManyFactors("discriminability_degree handles at most 3 factors, got " +
                             std::to_string(factors.size()));
    }
    if (factors.size() == 1) {
        t.find_system(factors[0]);  // single-system effects span their own dual
        return 1;
    }
    if (factors.size() == 2) {
        const CompositionRule& r = t.require_rule(factors[0], factors[1]);
        return detail::pair_indicator_rank(r) == r.composite_dim() ? 1 : 2;
    }

    const std::string &a = factors[0], &b = factors[1], &c = factors[2];
    const CompositionRule& rab = t.require_rule(a, b);
    const CompositionRule& rab_c = t.require_rule(rab.composite->name, c);
    const CompositionRule& rbc = t.require_rule(b, c);
    const CompositionRule& ra_bc = t.require_rule(a, rbc.composite->name);
    size_t dim = rab_c.composite_dim();

    // leaf labels of the left bracketing
    std::vector<std::tuple<size_t, size_t, size_t>> leaf(dim);
    for (size_t m = 1; m <= dim; ++m) {
        auto [u, l] = rab_c.label[m - 1];
        auto [i, j] = rab.label[u - 1];
        leaf[m - 1] = {i, j, l};
    }

    {  // n = 1: products over {A|B|C} span the triple-indicator space
        std::map<std::tuple<size_t, size_t, size_t>, RVector> rows;
        for (size_t m = 1; m <= dim; ++m) {
            auto& row = rows.try_emplace(leaf[m - 1], RVector(dim, 0)).first->second;
            row[m - 1] = 1;
        }
        std::vector<RVector> mat;
        for (auto& [key, row] : rows) {
            mat.push_back(std::move(row));
        }
        if (rank(RMatrix(std::move(mat))) == dim) {
            return 1;
        }
    }

    // n = 2: groupings {AB|C} and {A|BC}; the latter transports through the
    // associativity bijection onto the left bracketing's vertex numbering
    auto assoc = check_associativity(t, a, b, c);
    if (!assoc.associative) {
        throw ValidationError("discriminability_degree: bracketings disagree: " + assoc.mismatch);
    }
    std::map<std::pair<size_t, size_t>, RVector> rows;
    for (size_t m = 1; m <= dim; ++m) {
        auto [u, l] = rab_c.label[m - 1];
        auto& row = rows.try_emplace(std::make_pair(u, l), RVector(dim, 0)).first->second;
        row[m - 1] = 1;
    }
    std::map<std::pair<size_t, size_t>, RVector> rows2;
    for (size_t m = 1; m <= dim; ++m) {
        auto [i, v] = ra_bc.label[m - 1];
        auto& row = rows2.try_emplace(std::make_pair(i, v), RVector(dim, 0)).first->second;
        row[assoc.bijection[m - 1] - 1] = 1;
    }
    std::vector<RVector> mat;
    for (auto& [key, row] : rows) {
        mat.push_back(std::move(row));
    }
    for (auto& [key, row] : rows2) {
        mat.push_back(std::move(row));
    }
    return rank(RMatrix(std::move(mat))) == dim ? 2 : 3;
}

// Aggregated verdicts for one composite. The constructor cross-checks the
// structural equivalences (entanglement ⇔ excess dimension > 0 ⇔ no local
// discriminability ⇔ atomicity failure) and refuses to produce a report
// whose sub-answers disagree.
struct AnalysisReport {
    size_t excess = 0;
    EntanglementResult entanglement;
    AtomicityResult atomicity;
    bool local_discriminability = false;
    int degree = 0;  // 1 or 2 for a bipartite rule
    CausalityResult causality;        // of the composite system
    ClassicalityResult classicality;  // of the composite system
};

inline AnalysisReport analyze_composite(const CompositionRule& r) {
    AnalysisReport rep;
    rep.excess = excess_dimension(r);
    rep.entanglement = entanglement_present(r);
    rep.atomicity = check_atomicity(r);
    rep.degree = detail::pair_indicator_rank(r) == r.composite_dim() ? 1 : 2;
    rep.local_discriminability = rep.degree == 1;
    rep.causality = check_causality(r.composite);
    rep.classicality = check_classicality(r.composite);

    bool excess_positive = rep.excess > 0;
    if (rep.entanglement.present != excess_positive ||
        rep.entanglement.present == rep.local_discriminability ||
        rep.entanglement.present == rep.atomicity.atomic) {
        throw std::logic_error("analyze_composite: equivalence violated on '" +
                               r.composite->name + "'");
    }
    return rep;
}

}  // namespace sopt
