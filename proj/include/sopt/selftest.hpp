// Property battery over generated theories: every structural fact the
// library decides is re-checked here against independently generated
// instances at configurable trial counts. The CLI selftest subcommand and
// the acceptance harness both run exactly this battery.

#pragma once

#include <string>
#include <vector>

#include "sopt/generate.hpp"
#include "sopt/io.hpp"
#include "sopt/principles.hpp"
#include "sopt/report.hpp"

namespace sopt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string message;
};

struct SelftestOptions {
    uint64_t seed = 20240815;
    size_t systems = 200;          // causality battery
    size_t rules = 200;            // equivalence batteries
    size_t separability_rules = 100;
    size_t separability_states_per_rule = 10;
    size_t quadruples = 1000;
    size_t dists_per_dim = 50;     // superposition, full dual
    size_t restricted_systems = 20;
    size_t mixed_states = 500;     // purification battery
    size_t round_trips = 100;
};

namespace selftest_detail {

inline CheckResult causality_battery(const SelftestOptions& opt) {
    CheckResult out{"causality: unique deterministic effect", false, ""};
    Rng rng(opt.seed ^ 0x1);
    for (size_t n = 0; n < opt.systems; ++n) {
        SystemPtr s;
        bool full = n % 2 == 0;
        size_t d = 1 + rng.index(8);
        switch (full ? 0 : 1 + n % 4) {
            case 0: s = make_system("A", d); break;
            case 1: s = restricted_classical_system("A", d); break;
            case 2: s = restricted_forced_system("A", 1 + rng.index(3), 2 + rng.index(2)); break;
            case 3: s = restricted_segment_system("A", 2 + rng.index(3)); break;
            default: s = restricted_random_system(rng, "A", d, 1 + rng.index(3)); break;
        }
        auto r = check_causality(s);
        if (r.status != CausalityStatus::Unique) {
            out.message = "system " + std::to_string(n) + " lacks a deterministic effect";
            return out;
        }
        if (full && r.effect->coords != RVector(s->dim, 1)) {
            out.message = "full-dual system " + std::to_string(n) + " has e != all-ones";
            return out;
        }
    }
    out.pass = true;
    out.message = std::to_string(opt.systems) + " systems";
    return out;
}

inline CheckResult equivalence_battery(const SelftestOptions& opt) {
    CheckResult out{"entanglement <=> excess dimension <=> degree 2", false, ""};
    Rng rng(opt.seed ^ 0x2);
    size_t entangled = 0;
    for (size_t n = 0; n < opt.rules; ++n) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        bool excess = excess_dimension(r) > 0;
        bool present = entanglement_present(r).present;
        int degree = discriminability_degree(t, {"A", "B"});
        if (present != excess || present != (degree == 2)) {
            out.message = "rule " + std::to_string(n) + " breaks the equivalence";
            return out;
        }
        entangled += present ? 1 : 0;
    }
    out.pass = true;
    out.message = std::to_string(opt.rules) + " rules, " + std::to_string(entangled) +
                  " entangled";
    return out;
}

inline CheckResult atomicity_battery(const SelftestOptions& opt) {
    CheckResult out{"entanglement <=> atomicity failure", false, ""};
    Rng rng(opt.seed ^ 0x2);  // same battery as the equivalence check
    for (size_t n = 0; n < opt.rules; ++n) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        if (entanglement_present(r).present == check_atomicity(r).atomic) {
            out.message = "rule " + std::to_string(n) + " breaks the equivalence";
            return out;
        }
    }
    out.pass = true;
    out.message = std::to_string(opt.rules) + " rules";
    return out;
}

inline CheckResult separability_battery(const SelftestOptions& opt) {
    CheckResult out{"separability closed form vs LP oracle", false, ""};
    Rng rng(opt.seed ^ 0x4);
    size_t states = 0;
    for (size_t n = 0; n < opt.separability_rules; ++n) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        for (size_t m = 0; m < opt.separability_states_per_rule; ++m) {
            StateVector omega = [&] {
                switch (m % 3) {
                    case 0: return random_state(rng, r.composite, false);
                    case 1: return vertex_state(r.composite, 1 + rng.index(r.composite_dim()));
                    default:
                        return compose_states(r, random_state(rng, r.left, false),
                                              random_state(rng, r.right, false));
                }
            }();
            auto cert = is_separable(r, omega);
            if (cert.separable != is_separable_lp(r, omega)) {
                out.message = "oracle disagreement on rule " + std::to_string(n);
                return out;
            }
            if (cert.separable) {
                RVector rebuilt(r.composite_dim(), 0);
                for (const auto& [ij, lam] : cert.lambda) {
                    if (lam < 0) {
                        out.message = "negative lambda on rule " + std::to_string(n);
                        return out;
                    }
                    auto prod = compose_states(r, vertex_state(r.left, ij.first),
                                               vertex_state(r.right, ij.second));
                    for (size_t k = 0; k < rebuilt.size(); ++k) {
                        rebuilt[k] += lam * prod.coords[k];
                    }
                }
                if (rebuilt != omega.coords) {
                    out.message = "lambda fails to reconstruct the state on rule " +
                                  std::to_string(n);
                    return out;
                }
            }
            ++states;
        }
    }
    out.pass = true;
    out.message = std::to_string(states) + " states across " +
                  std::to_string(opt.separability_rules) + " rules";
    return out;
}

inline CheckResult composition_battery(const SelftestOptions& opt) {
    CheckResult out{"block partitions and pairing factorization", false, ""};
    Rng rng(opt.seed ^ 0x8);
    size_t quads = 0;
    while (quads < opt.quadruples) {
        Theory t = generate_random(rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        auto report = validate_rule(r.left, r.right, r.composite_dim(), r.blocks);
        if (!report.valid()) {
            out.message = "generated rule fails validation: " + report.to_text();
            return out;
        }
        for (size_t m = 0; m < 10 && quads < opt.quadruples; ++m, ++quads) {
            auto rho = random_state(rng, r.left, false);
            auto sigma = random_state(rng, r.right, false);
            auto a = random_box_effect(rng, r.left);
            auto b = random_box_effect(rng, r.right);
            Rational lhs = pair(compose_effects(r, a, b), compose_states(r, rho, sigma));
            Rational rhs = pair(a, rho) * pair(b, sigma);
            if (lhs != rhs) {
                out.message = "pairing does not factorize on quadruple " + std::to_string(quads);
                return out;
            }
        }
    }
    out.pass = true;
    out.message = std::to_string(quads) + " quadruples";
    return out;
}

inline CheckResult superposition_battery(const SelftestOptions& opt) {
    CheckResult out{"superposition: ultraweak and weak verdicts", false, ""};
    Rng rng(opt.seed ^ 0x10);
    size_t checked = 0;
    for (size_t d = 2; d <= 6; ++d) {
        auto s = make_system("A", d);
        std::vector<size_t> base(d);
        for (size_t v = 1; v <= d; ++v) {
            base[v - 1] = v;
        }
        for (size_t m = 0; m < opt.dists_per_dim; ++m) {
            RVector p = random_block_weights(rng, d);  // positive entries: never a point mass
            if (check_superposition(s, base, p, SuperpositionMode::Ultraweak).holds) {
                out.message = "ultraweak held on a full-dual system of dim " + std::to_string(d);
                return out;
            }
            ++checked;
        }
    }
    for (size_t n = 0; n < opt.restricted_systems; ++n) {
        SystemPtr s = n % 2 == 0 ? restricted_forced_system("A", 1 + n % 3, 2 + n % 2)
                                 : restricted_segment_system("A", 2 + n % 3);
        auto base = maximal_discriminable_set(s);
        if (base.size() == s->dim) {
            out.message = "battery system " + std::to_string(n) + " has no free vertices";
            return out;
        }
        for (int m = 0; m < 2; ++m) {
            RVector p = random_block_weights(rng, base.size());
            if (base.size() >= 2 &&
                check_superposition(s, base, p, SuperpositionMode::Weak).holds) {
                out.message = "weak held for a non-point distribution on battery system " +
                              std::to_string(n);
                return out;
            }
        }
        RVector point(base.size(), 0);
        point[rng.index(base.size())] = 1;
        auto v = check_superposition(s, base, point, SuperpositionMode::Weak);
        if (!v.holds || v.witness_vertex == 0) {  // witness re-verified inside the checker
            out.message = "weak failed for a point mass on battery system " + std::to_string(n);
            return out;
        }
        ++checked;
    }
    out.pass = true;
    out.message = std::to_string(checked) + " instances";
    return out;
}

inline CheckResult purification_battery(const SelftestOptions& opt) {
    CheckResult out{"purification: pure marginals only", false, ""};
    Rng rng(opt.seed ^ 0x20);
    size_t mixed_checked = 0, pure_checked = 0;
    while (mixed_checked < opt.mixed_states) {
        size_t d_a = 2 + rng.index(3), d_b = 2 + rng.index(3);
        Theory t = generate_toy(d_a, d_b, 1 + rng.index(3), rng.eng());
        const CompositionRule& r = *t.rule_by_name("AB");
        for (const auto& [factor, ancilla] : {std::pair{"A", "B"}, std::pair{"B", "A"}}) {
            auto s = t.find_system(factor);
            for (size_t v = 1; v <= s->dim; ++v) {
                auto res = check_purification(t, vertex_state(s, v), ancilla);
                if (!res.purifiable) {
                    out.message = std::string("pure state not purifiable on factor ") + factor;
                    return out;
                }
                Side keep = factor == std::string("A") ? Side::Left : Side::Right;
                auto marg =
                    marginalize(r, vertex_state(r.composite, res.witness_vertex), keep);
                if (marg.coords != vertex_state(s, v).coords) {
                    out.message = "purification witness marginal mismatch";
                    return out;
                }
                ++pure_checked;
            }
            for (int m = 0; m < 3; ++m) {
                RVector coords(s->dim, 0);
                RVector w = random_block_weights(rng, 2);
                size_t v1 = rng.index(s->dim), v2 = (v1 + 1 + rng.index(s->dim - 1)) % s->dim;
                coords[v1] = w[0];
                coords[v2] = w[1];
                auto rho = make_state(s, std::move(coords));
                if (classify_state(rho).cls != StateClass::DeterministicMixed) {
                    out.message = "battery produced a non-mixed probe state";
                    return out;
                }
                if (check_purification(t, rho, ancilla).purifiable) {
                    out.message = "mixed state purified on factor " + std::string(factor);
                    return out;
                }
                ++mixed_checked;
            }
        }
    }
    out.pass = true;
    out.message = std::to_string(mixed_checked) + " mixed and " + std::to_string(pure_checked) +
                  " pure states";
    return out;
}

inline CheckResult classical_regression(const SelftestOptions&) {
    CheckResult out{"classical bit pair regression", false, ""};
    Theory t = generate_ct({2, 2});
    const CompositionRule& r = *t.rule_by_name("AB");
    auto rep = analyze_composite(r);
    if (!rep.classicality.classical || rep.entanglement.present || rep.excess != 0 ||
        !rep.atomicity.atomic || rep.degree != 1) {
        out.message = "composite analysis disagrees with the textbook values";
        return out;
    }
    auto a = t.find_system("A");
    if (!check_superposition(a, {1, 2}, {1, 0}, SuperpositionMode::Weak).holds ||
        !check_superposition(a, {1, 2}, {0, 1}, SuperpositionMode::Weak).holds ||
        check_superposition(a, {1, 2}, {rat(1, 2), rat(1, 2)}, SuperpositionMode::Weak).holds) {
        out.message = "weak superposition verdicts disagree with the textbook values";
        return out;
    }
    if (check_purification(t, make_state(a, {rat(1, 2), rat(1, 2)}), "B").purifiable ||
        check_purification(t, make_state(a, {rat(1, 3), rat(2, 3)}), "B").purifiable ||
        !check_purification(t, vertex_state(a, 1), "B").purifiable) {
        out.message = "purification verdicts disagree with the textbook values";
        return out;
    }
    out.pass = true;
    out.message = "all textbook values reproduced";
    return out;
}

inline CheckResult worked_report(const SelftestOptions&) {
    CheckResult out{"worked five-vertex composite report", false, ""};
    Theory t;
    t.add_system(make_system("A", 2));
    t.add_system(make_system("B", 2));
    t.add_composite(make_rule(make_system("AB", 5), t.find_system("A"), t.find_system("B"),
                              {{1, 1, {1, 2}, {rat(1, 2), rat(1, 2)}},
                               {1, 2, {3}, {1}},
                               {2, 1, {4}, {1}},
                               {2, 2, {5}, {1}}}));
    ReportDocument doc = build_report(t);
    const auto& c = doc.composites.at(0);
    if (c.analysis.excess != 1 || !c.analysis.entanglement.present ||
        c.analysis.entanglement.witness_vertex != 1 || c.analysis.atomicity.atomic ||
        c.analysis.degree != 2 || c.marginal_left != RVector{1, 0}) {
        out.message = "report values drifted";
        return out;
    }
    if (report_json(doc) != report_json(build_report(parse_theory(serialize_theory(t))))) {
        out.message = "report JSON is not byte-stable";
        return out;
    }
    out.pass = true;
    out.message = "values and byte stability confirmed";
    return out;
}

inline CheckResult round_trip_battery(const SelftestOptions& opt) {
    CheckResult out{"canonical file round-trip", false, ""};
    Rng rng(opt.seed ^ 0x40);
    for (size_t n = 0; n < opt.round_trips; ++n) {
        Theory t = generate_random(rng.eng());
        std::string canon = serialize_theory(t);
        if (serialize_theory(parse_theory(canon)) != canon) {
            out.message = "round trip changed bytes on file " + std::to_string(n);
            return out;
        }
    }
    out.pass = true;
    out.message = std::to_string(opt.round_trips) + " files";
    return out;
}

}  // namespace selftest_detail

inline std::vector<CheckResult> run_selftest(const SelftestOptions& opt = {}) {
    using namespace selftest_detail;
    return {
        causality_battery(opt),    equivalence_battery(opt),  atomicity_battery(opt),
        separability_battery(opt), composition_battery(opt),  superposition_battery(opt),
        purification_battery(opt), classical_regression(opt), worked_report(opt),
        round_trip_battery(opt),
    };
}

}  // namespace sopt
