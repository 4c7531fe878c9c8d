// Single-system model: a simplex of states over D vertices, an effect model
// (the full dual box or a finitely generated cone inside it), the pairing
// functional, the deterministic effect, and state classification.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sopt/lp.hpp"
#include "sopt/rational.hpp"

namespace sopt {

// Effects live in conic_hull(generators) ∩ [0,1]^D for RestrictedCone, and
// in the whole box [0,1]^D for FullDual. Generators must themselves be valid
// effects (componentwise in [0,1]).
struct EffectModel {
    enum class Kind { FullDual, RestrictedCone };

    Kind kind = Kind::FullDual;
    std::vector<RVector> generators;  // used only for RestrictedCone

    static EffectModel full_dual() {
        return {};
    }
    static EffectModel restricted(std::vector<RVector> gens) {
        EffectModel m;
        m.kind = Kind::RestrictedCone;
        m.generators = std::move(gens);
        return m;
    }
};

// A system: D vertices spanning a simplex of states. Vertex indices are
// 1-based in every public interface.
struct SystemSpace {
    std::string name;
    size_t dim = 0;
    EffectModel effects;
};

using SystemPtr = std::shared_ptr<const SystemSpace>;

inline SystemPtr make_system(std::string name, size_t dim, EffectModel model = {}) {
    if (dim < 1) {
        throw InvalidState("system '" + name + "': dim must be >= 1");
    }
    if (model.kind == EffectModel::Kind::RestrictedCone) {
        if (model.generators.empty()) {
            throw InvalidEffect("system '" + name + "': restricted cone needs >= 1 generator");
        }
        for (size_t g = 0; g < model.generators.size(); ++g) {
            if (model.generators[g].size() != dim) {
                throw DimensionMismatch("system '" + name + "': generator " +
                                        std::to_string(g + 1) + " has wrong length");
            }
            for (const auto& x : model.generators[g]) {
                if (x < 0 || x > 1) {
                    throw InvalidEffect("system '" + name + "': generator " +
                                        std::to_string(g + 1) +
                                        " leaves [0,1] and is not an effect");
                }
            }
        }
    }
    return std::make_shared<SystemSpace>(
        SystemSpace{std::move(name), dim, std::move(model)});
}

// Two handles denote the same system when they share structure; composite
// construction copies system values, so pointer identity is not required.
inline bool same_system(const SystemPtr& a, const SystemPtr& b) {
    return a == b || (a && b && a->name == b->name && a->dim == b->dim);
}

// Barycentric coordinates over the vertices |1⟩..|D⟩. Valid states have all
// coordinates >= 0 with total <= 1; the null state is the zero vector.
struct StateVector {
    SystemPtr system;
    RVector coords;
};

inline StateVector make_state(SystemPtr system, RVector coords) {
    if (coords.size() != system->dim) {
        throw DimensionMismatch("state on '" + system->name + "': expected " +
                                std::to_string(system->dim) + " coordinates, got " +
                                std::to_string(coords.size()));
    }
    for (const auto& x : coords) {
        if (x < 0) {
            throw InvalidState("state on '" + system->name + "': negative coordinate");
        }
    }
    if (sum(coords) > 1) {
        throw InvalidState("state on '" + system->name + "': coordinates sum above 1");
    }
    return {std::move(system), std::move(coords)};
}

// vertex is 1-based
inline StateVector vertex_state(SystemPtr system, size_t vertex) {
    if (vertex < 1 || vertex > system->dim) {
        throw InvalidState("vertex index " + std::to_string(vertex) + " out of range on '" +
                           system->name + "'");
    }
    RVector c(system->dim, 0);
    c[vertex - 1] = 1;
    return {std::move(system), std::move(c)};
}

inline StateVector null_state(SystemPtr system) {
    RVector c(system->dim, 0);
    return {std::move(system), std::move(c)};
}

// Coordinates in the dual basis: entry j is the value on vertex |j⟩.
// Construction enforces the [0,1] box; cone membership for RestrictedCone
// systems is the separate LP test is_effect, which every path that fabricates
// effects on a restricted system must go through.
struct EffectVector {
    SystemPtr system;
    RVector coords;
};

inline EffectVector make_effect(SystemPtr system, RVector coords) {
    if (coords.size() != system->dim) {
        throw DimensionMismatch("effect on '" + system->name + "': expected " +
                                std::to_string(system->dim) + " coordinates, got " +
                                std::to_string(coords.size()));
    }
    for (const auto& x : coords) {
        if (x < 0 || x > 1) {
            throw InvalidEffect("effect on '" + system->name + "': value outside [0,1]");
        }
    }
    return {std::move(system), std::move(coords)};
}

// Dual-basis functional: 1 on vertex |index⟩, 0 on the others.
inline EffectVector dual_basis_effect(SystemPtr system, size_t index) {
    if (index < 1 || index > system->dim) {
        throw InvalidEffect("dual basis index " + std::to_string(index) + " out of range on '" +
                            system->name + "'");
    }
    RVector c(system->dim, 0);
    c[index - 1] = 1;
    return {std::move(system), std::move(c)};
}

// The probability of observing effect a on state ρ.
inline Rational pair(const EffectVector& a, const StateVector& rho) {
    if (!same_system(a.system, rho.system)) {
        throw SystemMismatch("pair: effect on '" + a.system->name + "' vs state on '" +
                             rho.system->name + "'");
    }
    return dot(a.coords, rho.coords);
}

struct EffectMembership {
    bool ok = false;
    RVector cone_coefficients;  // nonnegative witness, RestrictedCone only
};

// Membership of a raw coordinate vector in the system's effect set. For
// FullDual this is the box test; for RestrictedCone an exact LP finds
// nonnegative conic coefficients reproducing v (the box test still applies).
inline EffectMembership is_effect(const SystemPtr& s, const RVector& v) {
    if (v.size() != s->dim) {
        throw DimensionMismatch("is_effect: expected " + std::to_string(s->dim) +
                                " coordinates, got " + std::to_string(v.size()));
    }
    for (const auto& x : v) {
        if (x < 0 || x > 1) {
            return {};
        }
    }
    if (s->effects.kind == EffectModel::Kind::FullDual) {
        return {true, {}};
    }
    const auto& gens = s->effects.generators;
    LPProblem p(gens.size());
    p.set_all_nonneg();
    for (size_t j = 0; j < s->dim; ++j) {
        RVector row(gens.size());
        for (size_t g = 0; g < gens.size(); ++g) {
            row[g] = gens[g][j];
        }
        p.add_eq(std::move(row), v[j]);
    }
    auto r = lp_feasible(p);
    if (!r.feasible) {
        return {};
    }
    return {true, std::move(r.witness)};
}

// The unique effect valued 1 on every vertex. For RestrictedCone systems the
// all-ones vector must additionally lie in the cone; a model without it is
// not a valid theory and is reported via NoDeterministicEffect.
inline EffectVector deterministic_effect(const SystemPtr& s) {
    RVector ones(s->dim, 1);
    if (s->effects.kind == EffectModel::Kind::RestrictedCone && !is_effect(s, ones).ok) {
        throw NoDeterministicEffect("system '" + s->name +
                                    "': all-ones functional missing from the effect cone");
    }
    return {s, std::move(ones)};
}

enum class StateClass {
    Null,
    PureVertex,
    DeterministicMixed,
    SubnormalizedAtomic,
    SubnormalizedMixed,
};

inline const char* to_string(StateClass c) {
    switch (c) {
        case StateClass::Null: return "null";
        case StateClass::PureVertex: return "pure_vertex";
        case StateClass::DeterministicMixed: return "deterministic_mixed";
        case StateClass::SubnormalizedAtomic: return "subnormalized_atomic";
        case StateClass::SubnormalizedMixed: return "subnormalized_mixed";
    }
    return "?";
}

struct StateClassification {
    StateClass cls = StateClass::Null;
    size_t vertex = 0;  // 1-based, set for PureVertex and SubnormalizedAtomic
};

inline StateClassification classify_state(const StateVector& rho) {
    size_t support = 0;
    size_t last = 0;
    for (size_t j = 0; j < rho.coords.size(); ++j) {
        if (rho.coords[j] != 0) {
            ++support;
            last = j + 1;
        }
    }
    if (support == 0) {
        return {StateClass::Null, 0};
    }
    Rational total = sum(rho.coords);
    if (total == 1) {
        if (support == 1) {
            return {StateClass::PureVertex, last};
        }
        return {StateClass::DeterministicMixed, 0};
    }
    if (support == 1) {
        return {StateClass::SubnormalizedAtomic, last};
    }
    return {StateClass::SubnormalizedMixed, 0};
}

inline bool is_deterministic(const StateVector& rho) {
    return sum(rho.coords) == 1;
}

}  // namespace sopt
