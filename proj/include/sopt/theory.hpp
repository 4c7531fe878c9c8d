// A theory is a registry of named systems plus the composition rules the
// user declares. Composite systems are systems themselves and may appear as
// factors of larger composites.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sopt/composition.hpp"

namespace sopt {

struct Theory {
    std::vector<SystemPtr> systems;          // base systems, declaration order
    std::vector<CompositionRule> composites;  // declaration order

    bool has_system(const std::string& name) const {
        for (const auto& s : systems) {
            if (s->name == name) {
                return true;
            }
        }
        for (const auto& c : composites) {
            if (c.composite->name == name) {
                return true;
            }
        }
        return false;
    }

    SystemPtr find_system(const std::string& name) const {
        for (const auto& s : systems) {
            if (s->name == name) {
                return s;
            }
        }
        for (const auto& c : composites) {
            if (c.composite->name == name) {
                return c.composite;
            }
        }
        throw UnknownSystem("no system named '" + name + "'");
    }

    const CompositionRule* rule_by_name(const std::string& composite_name) const {
        for (const auto& c : composites) {
            if (c.composite->name == composite_name) {
                return &c;
            }
        }
        return nullptr;
    }

    // the declared rule composing the named pair, if any
    const CompositionRule* rule_for(const std::string& left, const std::string& right) const {
        for (const auto& c : composites) {
            if (c.left->name == left && c.right->name == right) {
                return &c;
            }
        }
        return nullptr;
    }

    const CompositionRule& require_rule(const std::string& left, const std::string& right) const {
        const CompositionRule* r = rule_for(left, right);
        if (!r) {
            throw MissingRule("no composition rule declared for (" + left + ", " + right + ")");
        }
        return *r;
    }

    void add_system(SystemPtr s) {
        if (has_system(s->name)) {
            throw ValidationError("duplicate system name '" + s->name + "'");
        }
        systems.push_back(std::move(s));
    }

    void add_composite(CompositionRule rule) {
        if (has_system(rule.composite->name)) {
            throw ValidationError("duplicate system name '" + rule.composite->name + "'");
        }
        composites.push_back(std::move(rule));
    }
};

struct NFoldComposite {
    SystemPtr system;                          // the final composite (or lone factor)
    std::vector<const CompositionRule*> chain;  // rules applied, outermost last
};

// Left-associated iterated composition: ((A1 A2) A3)... Every adjacent pair
// produced by that bracketing must have a declared rule.
inline NFoldComposite compose_nfold(const Theory& t, const std::vector<std::string>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("compose_nfold: empty factor list");
    }
    NFoldComposite out{t.find_system(factors[0]), {}};
    for (size_t i = 1; i < factors.size(); ++i) {
        const CompositionRule& r = t.require_rule(out.system->name, t.find_system(factors[i])->name);
        out.chain.push_back(&r);
        out.system = r.composite;
    }
    return out;
}

}  // namespace sopt
