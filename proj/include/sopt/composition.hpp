// Bipartite composition data: a composite simplex whose vertex set is
// partitioned into blocks I_ij, one per pair of factor vertices, with
// positive per-block weights summing to 1. Product states spread each
// ρ_i·σ_j across block (i,j) by those weights; product effects evaluate
// through the block labels.

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "sopt/system.hpp"

namespace sopt {

struct BlockEntry {
    size_t i = 0;                  // left factor vertex, 1-based
    size_t j = 0;                  // right factor vertex, 1-based
    std::vector<size_t> vertices;  // composite vertex indices, 1-based
    RVector weights;               // aligned with vertices, > 0, sum 1
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool valid() const {
        return violations.empty();
    }
    std::string to_text() const {
        std::string s;
        for (const auto& v : violations) {
            s += v;
            s += '\n';
        }
        return s;
    }
};

struct CompositionRule {
    SystemPtr left;
    SystemPtr right;
    SystemPtr composite;             // dim = composite dimension D_AB
    std::vector<BlockEntry> blocks;  // sorted by (i, j) once built

    // refinement map, filled by make_rule: composite vertex k (1-based)
    // carries label (i_k, j_k) = label[k-1] and weight p_k = weight[k-1]
    std::vector<std::pair<size_t, size_t>> label;
    RVector weight;

    size_t composite_dim() const {
        return composite->dim;
    }

    const BlockEntry* find_block(size_t i, size_t j) const {
        for (const auto& b : blocks) {
            if (b.i == i && b.j == j) {
                return &b;
            }
        }
        return nullptr;
    }
};

inline ValidationReport validate_rule(const SystemPtr& left, const SystemPtr& right,
                                      size_t composite_dim,
                                      const std::vector<BlockEntry>& blocks) {
    ValidationReport rep;
    auto flag = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };
    auto block_name = [](const BlockEntry& b) {
        return "(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
    };

    if (composite_dim < left->dim * right->dim) {
        flag("composite dim " + std::to_string(composite_dim) + " below product dimension " +
             std::to_string(left->dim * right->dim));
    }

    std::vector<std::vector<bool>> seen_pair(left->dim, std::vector<bool>(right->dim, false));
    std::vector<size_t> owner(composite_dim, 0);  // 1-based block index into `blocks`

    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        if (b.i < 1 || b.i > left->dim || b.j < 1 || b.j > right->dim) {
            flag("block " + block_name(b) + " outside factor vertex ranges");
            continue;
        }
        if (seen_pair[b.i - 1][b.j - 1]) {
            flag("duplicate block " + block_name(b));
            continue;
        }
        seen_pair[b.i - 1][b.j - 1] = true;

        if (b.vertices.empty()) {
            flag("block " + block_name(b) + " is empty");
        }
        if (b.weights.size() != b.vertices.size()) {
            flag("block " + block_name(b) + " has " + std::to_string(b.weights.size()) +
                 " weights for " + std::to_string(b.vertices.size()) + " vertices");
        }
        for (size_t v : b.vertices) {
            if (v < 1 || v > composite_dim) {
                flag("vertex " + std::to_string(v) + " out of range in block " + block_name(b));
                continue;
            }
            if (owner[v - 1] != 0) {
                flag("blocks not disjoint: vertex " + std::to_string(v) + " in block " +
                     block_name(blocks[owner[v - 1] - 1]) + " and block " + block_name(b));
            } else {
                owner[v - 1] = bi + 1;
            }
        }
        bool positive = true;
        for (const auto& w : b.weights) {
            if (w <= 0) {
                positive = false;
            }
        }
        if (!positive) {
            flag("nonpositive weight in block " + block_name(b));
        }
        if (!b.weights.empty() && sum(b.weights) != 1) {
            flag("weights sum != 1 in block " + block_name(b) + " (got " + to_string(sum(b.weights)) +
                 ")");
        }
    }

    for (size_t i = 1; i <= left->dim; ++i) {
        for (size_t j = 1; j <= right->dim; ++j) {
            if (!seen_pair[i - 1][j - 1]) {
                flag("missing block (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    for (size_t v = 1; v <= composite_dim; ++v) {
        if (owner[v - 1] == 0) {
            flag("blocks do not cover: vertex " + std::to_string(v) + " unassigned");
        }
    }
    return rep;
}

// Builds a validated rule with its refinement map. The composite system's
// dimension fixes D_AB; the blocks are stored sorted by (i, j).
inline CompositionRule make_rule(SystemPtr composite, SystemPtr left, SystemPtr right,
                                 std::vector<BlockEntry> blocks) {
    auto rep = validate_rule(left, right, composite->dim, blocks);
    if (!rep.valid()) {
        throw ValidationError("composition rule for '" + composite->name + "': " +
                              rep.violations.front());
    }
    std::sort(blocks.begin(), blocks.end(), [](const BlockEntry& a, const BlockEntry& b) {
        return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
    });
    CompositionRule r{std::move(left), std::move(right), std::move(composite), std::move(blocks),
                      {}, {}};
    r.label.assign(r.composite_dim(), {0, 0});
    r.weight.assign(r.composite_dim(), 0);
    for (const auto& b : r.blocks) {
        for (size_t t = 0; t < b.vertices.size(); ++t) {
            r.label[b.vertices[t] - 1] = {b.i, b.j};
            r.weight[b.vertices[t] - 1] = b.weights[t];
        }
    }
    return r;
}

inline size_t excess_dimension(const CompositionRule& r) {
    return r.composite_dim() - r.left->dim * r.right->dim;
}

// ρ ⊠ σ: composite coordinate k gets ρ_{i_k}·σ_{j_k}·p_k.
inline StateVector compose_states(const CompositionRule& r, const StateVector& rho,
                                  const StateVector& sigma) {
    if (!same_system(rho.system, r.left)) {
        throw SystemMismatch("compose_states: left state is on '" + rho.system->name +
                             "', rule expects '" + r.left->name + "'");
    }
    if (!same_system(sigma.system, r.right)) {
        throw SystemMismatch("compose_states: right state is on '" + sigma.system->name +
                             "', rule expects '" + r.right->name + "'");
    }
    RVector out(r.composite_dim());
    for (size_t k = 0; k < out.size(); ++k) {
        auto [i, j] = r.label[k];
        out[k] = rho.coords[i - 1] * sigma.coords[j - 1] * r.weight[k];
    }
    return {r.composite, std::move(out)};
}

// a ⊠ b: value on composite vertex k is a_{i_k}·b_{j_k}.
inline EffectVector compose_effects(const CompositionRule& r, const EffectVector& a,
                                    const EffectVector& b) {
    if (!same_system(a.system, r.left)) {
        throw SystemMismatch("compose_effects: left effect is on '" + a.system->name +
                             "', rule expects '" + r.left->name + "'");
    }
    if (!same_system(b.system, r.right)) {
        throw SystemMismatch("compose_effects: right effect is on '" + b.system->name +
                             "', rule expects '" + r.right->name + "'");
    }
    RVector out(r.composite_dim());
    for (size_t k = 0; k < out.size(); ++k) {
        auto [i, j] = r.label[k];
        out[k] = a.coords[i - 1] * b.coords[j - 1];
    }
    return {r.composite, std::move(out)};
}

enum class Side { Left, Right };

// Applies the deterministic effect to the discarded factor: composite vertex
// k collapses onto the kept factor's vertex i_k (or j_k).
inline StateVector marginalize(const CompositionRule& r, const StateVector& omega, Side keep) {
    if (!same_system(omega.system, r.composite)) {
        throw SystemMismatch("marginalize: state is on '" + omega.system->name +
                             "', rule composes '" + r.composite->name + "'");
    }
    const SystemPtr& target = keep == Side::Left ? r.left : r.right;
    RVector out(target->dim, 0);
    for (size_t k = 0; k < omega.coords.size(); ++k) {
        auto [i, j] = r.label[k];
        out[(keep == Side::Left ? i : j) - 1] += omega.coords[k];
    }
    return {target, std::move(out)};
}

}  // namespace sopt
