// Report document: per-system and per-composite verdicts assembled once,
// then rendered either as canonical JSON (sorted keys, two-space indent,
// trailing newline, byte-stable) or as human-readable text. Both renderers
// read the same assembled values.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sopt/analysis.hpp"
#include "sopt/composition.hpp"

namespace sopt {

struct SystemReport {
    std::string name;
    size_t dim = 0;
    bool restricted = false;
    CausalityResult causality;
    ClassicalityResult classicality;
};

struct CompositeReport {
    std::string name, left, right;
    size_t dim = 0;
    AnalysisReport analysis;

    // marginals of one composite vertex: the entanglement witness when
    // present, vertex 1 otherwise
    size_t sample_vertex = 1;
    RVector marginal_left, marginal_right;
};

struct ReportDocument {
    std::vector<SystemReport> systems;
    std::vector<CompositeReport> composites;
};

inline ReportDocument build_report(const Theory& t) {
    ReportDocument doc;
    for (const auto& s : t.systems) {
        SystemReport r;
        r.name = s->name;
        r.dim = s->dim;
        r.restricted = s->effects.kind == EffectModel::Kind::RestrictedCone;
        r.causality = check_causality(s);
        r.classicality = check_classicality(s);
        doc.systems.push_back(std::move(r));
    }
    for (const auto& c : t.composites) {
        CompositeReport r;
        r.name = c.composite->name;
        r.left = c.left->name;
        r.right = c.right->name;
        r.dim = c.composite_dim();
        r.analysis = analyze_composite(c);
        r.sample_vertex = r.analysis.entanglement.present ? r.analysis.entanglement.witness_vertex
                                                          : 1;
        auto v = vertex_state(c.composite, r.sample_vertex);
        r.marginal_left = marginalize(c, v, Side::Left).coords;
        r.marginal_right = marginalize(c, v, Side::Right).coords;
        doc.composites.push_back(std::move(r));
    }
    return doc;
}

namespace detail {

using Json = nlohmann::json;

inline Json rationals_json(const RVector& v) {
    Json out = Json::array();
    for (const auto& x : v) {
        out.push_back(to_string(x));
    }
    return out;
}

inline Json causality_json(const CausalityResult& c) {
    Json out;
    out["status"] =
        c.status == CausalityStatus::Unique ? "unique" : "no_deterministic_effect";
    out["effect"] = c.effect ? rationals_json(c.effect->coords) : Json();
    return out;
}

}  // namespace detail

inline std::string report_json(const ReportDocument& doc) {
    detail::Json root;
    root["systems"] = detail::Json::array();
    for (const auto& s : doc.systems) {
        detail::Json node;
        node["name"] = s.name;
        node["dim"] = s.dim;
        node["effect_model"] = s.restricted ? "restricted_cone" : "full_dual";
        node["causality"] = detail::causality_json(s.causality);
        node["classicality"] = detail::Json{{"classical", s.classicality.classical}};
        root["systems"].push_back(std::move(node));
    }
    root["composites"] = detail::Json::array();
    for (const auto& c : doc.composites) {
        detail::Json node;
        node["name"] = c.name;
        node["left"] = c.left;
        node["right"] = c.right;
        node["dim"] = c.dim;
        node["excess"] = c.analysis.excess;
        node["entanglement"] = detail::Json{
            {"present", c.analysis.entanglement.present},
            {"witness_vertex", c.analysis.entanglement.present
                                   ? detail::Json(c.analysis.entanglement.witness_vertex)
                                   : detail::Json()}};
        node["atomicity"] = detail::Json{
            {"atomic", c.analysis.atomicity.atomic},
            {"violating_pair",
             c.analysis.atomicity.atomic
                 ? detail::Json()
                 : detail::Json{c.analysis.atomicity.violating_pair.first,
                                c.analysis.atomicity.violating_pair.second}}};
        node["local_discriminability"] = c.analysis.local_discriminability;
        node["degree"] = c.analysis.degree;
        node["causality"] = detail::causality_json(c.analysis.causality);
        node["classicality"] = detail::Json{{"classical", c.analysis.classicality.classical}};
        node["sample_vertex"] = c.sample_vertex;
        node["marginal_left"] = detail::rationals_json(c.marginal_left);
        node["marginal_right"] = detail::rationals_json(c.marginal_right);
        root["composites"].push_back(std::move(node));
    }
    return root.dump(2) + "\n";
}

inline std::string report_text(const ReportDocument& doc) {
    std::string out;
    for (const auto& s : doc.systems) {
        out += "system " + s.name + " (dim " + std::to_string(s.dim) + ", " +
               (s.restricted ? "restricted cone" : "full dual") + ")\n";
        if (s.causality.status == CausalityStatus::Unique) {
            out += "  causality: unique deterministic effect " +
                   to_string(s.causality.effect->coords) + "\n";
        } else {
            out += "  causality: no deterministic effect in the model\n";
        }
        out += std::string("  classicality: ") +
               (s.classicality.classical ? "classical (perfect discrimination test exists)"
                                         : "not classical") +
               "\n";
    }
    for (const auto& c : doc.composites) {
        out += "composite " + c.name + " = " + c.left + " x " + c.right + " (dim " +
               std::to_string(c.dim) + ", excess " + std::to_string(c.analysis.excess) + ")\n";
        if (c.analysis.entanglement.present) {
            out += "  entanglement: present (witness vertex " +
                   std::to_string(c.analysis.entanglement.witness_vertex) + ")\n";
        } else {
            out += "  entanglement: none\n";
        }
        if (c.analysis.atomicity.atomic) {
            out += "  atomicity: products of pure states are pure\n";
        } else {
            out += "  atomicity: fails at block (" +
                   std::to_string(c.analysis.atomicity.violating_pair.first) + "," +
                   std::to_string(c.analysis.atomicity.violating_pair.second) + ")\n";
        }
        out += std::string("  local discriminability: ") +
               (c.analysis.local_discriminability ? "holds" : "fails") + " (degree " +
               std::to_string(c.analysis.degree) + ")\n";
        out += "  vertex " + std::to_string(c.sample_vertex) + " marginals: left " +
               to_string(c.marginal_left) + ", right " + to_string(c.marginal_right) + "\n";
    }
    return out;
}

}  // namespace sopt
