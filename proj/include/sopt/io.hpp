// Theory file format: JSON with rationals as "p/q" strings. Canonical form
// sorts object keys alphabetically, orders blocks by (i,j), indents by two
// spaces, and ends with a newline, so serialize(parse(f)) == f for canonical
// files byte for byte.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sopt/theory.hpp"

namespace sopt {

namespace detail {

using Json = nlohmann::json;

inline const Json& expect(const Json& node, const char* key, Json::value_t type,
                          const std::string& path) {
    if (!node.is_object()) {
        throw ParseError(path + ": expected an object");
    }
    auto it = node.find(key);
    if (it == node.end()) {
        throw ParseError(path + ": missing field '" + key + "'");
    }
    bool ok = it->type() == type ||
              (type == Json::value_t::number_unsigned && it->is_number_integer());
    if (!ok) {
        throw ParseError(path + "." + key + ": unexpected type");
    }
    return *it;
}

inline size_t expect_positive(const Json& node, const char* key, const std::string& path) {
    const Json& v = expect(node, key, Json::value_t::number_unsigned, path);
    long long n = v.get<long long>();
    if (n < 1) {
        throw ParseError(path + "." + key + ": must be a positive integer");
    }
    return static_cast<size_t>(n);
}

inline Rational rational_field(const Json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ParseError(path + ": rationals are written as strings like \"1/2\"");
    }
    try {
        return parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline EffectModel effect_model_field(const Json& node, const std::string& path) {
    auto it = node.find("effect_model");
    if (it == node.end()) {
        return EffectModel::full_dual();
    }
    if (it->is_string()) {
        if (it->get<std::string>() != "full_dual") {
            throw ParseError(path + ".effect_model: unknown model '" + it->get<std::string>() +
                             "'");
        }
        return EffectModel::full_dual();
    }
    if (it->is_object()) {
        const Json& cone = expect(*it, "cone", Json::value_t::array, path + ".effect_model");
        std::vector<RVector> gens;
        for (size_t g = 0; g < cone.size(); ++g) {
            std::string gpath = path + ".effect_model.cone[" + std::to_string(g) + "]";
            if (!cone[g].is_array()) {
                throw ParseError(gpath + ": expected an array of rationals");
            }
            RVector vec;
            for (size_t c = 0; c < cone[g].size(); ++c) {
                vec.push_back(rational_field(cone[g][c], gpath + "[" + std::to_string(c) + "]"));
            }
            gens.push_back(std::move(vec));
        }
        return EffectModel::restricted(std::move(gens));
    }
    throw ParseError(path + ".effect_model: expected \"full_dual\" or {\"cone\": [...]}");
}

inline Json effect_model_json(const EffectModel& m) {
    if (m.kind == EffectModel::Kind::FullDual) {
        return "full_dual";
    }
    Json cone = Json::array();
    for (const auto& g : m.generators) {
        Json row = Json::array();
        for (const auto& x : g) {
            row.push_back(to_string(x));
        }
        cone.push_back(std::move(row));
    }
    return Json{{"cone", std::move(cone)}};
}

}  // namespace detail

inline Theory parse_theory(const std::string& text) {
    detail::Json doc;
    try {
        doc = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("top level: expected an object");
    }
    const auto& version = detail::expect(doc, "format_version", detail::Json::value_t::string, "top level");
    if (version.get<std::string>() != "1") {
        throw ParseError("format_version: expected \"1\", got \"" + version.get<std::string>() +
                         "\"");
    }

    Theory t;
    const auto& systems = detail::expect(doc, "systems", detail::Json::value_t::array, "top level");
    for (size_t n = 0; n < systems.size(); ++n) {
        std::string path = "systems[" + std::to_string(n) + "]";
        const auto& node = systems[n];
        std::string name =
            detail::expect(node, "name", detail::Json::value_t::string, path).get<std::string>();
        size_t dim = detail::expect_positive(node, "dim", path);
        try {
            t.add_system(make_system(name, dim, detail::effect_model_field(node, path)));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }

    auto it = doc.find("composites");
    if (it != doc.end()) {
        if (!it->is_array()) {
            throw ParseError("composites: expected an array");
        }
        for (size_t n = 0; n < it->size(); ++n) {
            std::string path = "composites[" + std::to_string(n) + "]";
            const auto& node = (*it)[n];
            std::string name = detail::expect(node, "name", detail::Json::value_t::string, path)
                                   .get<std::string>();
            std::string left = detail::expect(node, "left", detail::Json::value_t::string, path)
                                   .get<std::string>();
            std::string right = detail::expect(node, "right", detail::Json::value_t::string, path)
                                    .get<std::string>();
            size_t dim = detail::expect_positive(node, "dim", path);
            const auto& blocks_node =
                detail::expect(node, "blocks", detail::Json::value_t::array, path);

            std::vector<BlockEntry> blocks;
            for (size_t b = 0; b < blocks_node.size(); ++b) {
                std::string bpath = path + ".blocks[" + std::to_string(b) + "]";
                const auto& bn = blocks_node[b];
                BlockEntry entry;
                entry.i = detail::expect_positive(bn, "i", bpath);
                entry.j = detail::expect_positive(bn, "j", bpath);
                const auto& verts =
                    detail::expect(bn, "vertices", detail::Json::value_t::array, bpath);
                for (size_t v = 0; v < verts.size(); ++v) {
                    if (!verts[v].is_number_integer() || verts[v].get<long long>() < 1) {
                        throw ParseError(bpath + ".vertices[" + std::to_string(v) +
                                         "]: expected a positive integer");
                    }
                    entry.vertices.push_back(verts[v].get<size_t>());
                }
                const auto& weights =
                    detail::expect(bn, "weights", detail::Json::value_t::array, bpath);
                for (size_t w = 0; w < weights.size(); ++w) {
                    entry.weights.push_back(detail::rational_field(
                        weights[w], bpath + ".weights[" + std::to_string(w) + "]"));
                }
                blocks.push_back(std::move(entry));
            }

            SystemPtr l = t.find_system(left);
            SystemPtr r = t.find_system(right);
            SystemPtr comp;
            try {
                comp = make_system(name, dim, detail::effect_model_field(node, path));
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ValidationError(path + ": " + e.what());
            }
            try {
                t.add_composite(make_rule(std::move(comp), std::move(l), std::move(r),
                                          std::move(blocks)));
            } catch (const ValidationError& e) {
                throw ValidationError(path + ": " + e.what());
            }
        }
    }
    return t;
}

inline std::string serialize_theory(const Theory& t) {
    detail::Json doc;
    doc["format_version"] = "1";
    doc["systems"] = detail::Json::array();
    for (const auto& s : t.systems) {
        detail::Json node;
        node["name"] = s->name;
        node["dim"] = s->dim;
        node["effect_model"] = detail::effect_model_json(s->effects);
        doc["systems"].push_back(std::move(node));
    }
    doc["composites"] = detail::Json::array();
    for (const auto& c : t.composites) {
        detail::Json node;
        node["name"] = c.composite->name;
        node["left"] = c.left->name;
        node["right"] = c.right->name;
        node["dim"] = c.composite_dim();
        node["effect_model"] = detail::effect_model_json(c.composite->effects);
        node["blocks"] = detail::Json::array();
        for (const auto& b : c.blocks) {  // already sorted by (i, j)
            detail::Json bn;
            bn["i"] = b.i;
            bn["j"] = b.j;
            bn["vertices"] = b.vertices;
            bn["weights"] = detail::Json::array();
            for (const auto& w : b.weights) {
                bn["weights"].push_back(to_string(w));
            }
            node["blocks"].push_back(std::move(bn));
        }
        doc["composites"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

}  // namespace sopt
