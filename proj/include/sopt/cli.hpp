// Command-line driver. Subcommands: validate, report, compose, check
// {causality | classicality | atomicity | entanglement |
// local-discriminability | associativity}, separable, superposition, purify,
// generate {ct | toy | random}, selftest.
//
// Exit codes: 0 when the command produced its answer, 1 when a checked
// property is violated (or the selftest battery fails), 2 on input or usage
// errors.

#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sopt/selftest.hpp"

namespace sopt {

namespace cli_detail {

using Json = nlohmann::json;

inline Theory load_theory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_theory(buf.str());
}

inline RVector parse_coords(const std::string& text) {
    RVector out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        out.push_back(parse_rational(item));
    }
    if (out.empty()) {
        throw ParseError("expected a comma-separated list of rationals, got '" + text + "'");
    }
    return out;
}

inline std::vector<std::string> parse_names(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

inline std::vector<size_t> parse_indices(const std::string& text) {
    std::vector<size_t> out;
    for (const auto& x : parse_coords(text)) {
        if (denominator(x) != 1 || x < 1) {
            throw ParseError("expected positive integers, got '" + text + "'");
        }
        out.push_back(static_cast<size_t>(numerator(x).convert_to<long long>()));
    }
    return out;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw ParseError("cannot write '" + out_path + "'");
    }
    f << text;
}

inline const CompositionRule& composite_rule(const Theory& t, const std::string& name) {
    const CompositionRule* r = t.rule_by_name(name);
    if (!r) {
        throw UnknownSystem("no composite named '" + name + "'");
    }
    return *r;
}

inline Json observation_json(const DiscriminatingObservation& obs) {
    Json out;
    out["base_set"] = obs.base_set;
    out["free_set"] = obs.free_set;
    Json cols = Json::array();
    for (const auto& c : obs.columns) {
        Json col = Json::array();
        for (const auto& x : c) {
            col.push_back(to_string(x));
        }
        cols.push_back(std::move(col));
    }
    out["columns"] = std::move(cols);
    return out;
}

inline std::string observation_text(const DiscriminatingObservation& obs) {
    std::string out = "base set {";
    for (size_t t = 0; t < obs.base_set.size(); ++t) {
        out += (t ? "," : "") + std::to_string(obs.base_set[t]);
    }
    out += "}";
    for (size_t k = 0; k < obs.free_set.size(); ++k) {
        out += ", q_" + std::to_string(obs.free_set[k]) + " = " + to_string(obs.columns[k]);
    }
    return out;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using cli_detail::Json;

    CLI::App app{"exact constructor and property checker for simplicial operational theories"};
    app.require_subcommand(1);

    std::string theory_path, out_path, composite, system, ancilla, mode_name = "weak";
    std::string state_text, left_text, right_text, dist_text, set_text, factors_text, dims_text;
    bool json_mode = false, as_effects = false;
    uint64_t seed = 0;
    size_t delta = 1, max_dim = 4, max_delta = 3, max_den = 16;

    auto add_theory_arg = [&](CLI::App* cmd) {
        cmd->add_option("theory", theory_path, "theory file (JSON)")->required();
        cmd->add_flag("--json", json_mode, "machine-readable output");
        cmd->add_option("-o,--output", out_path, "write output to a file");
    };

    auto* validate = app.add_subcommand("validate", "parse a theory file and run all checks");
    add_theory_arg(validate);

    auto* report = app.add_subcommand("report", "full property report for every system");
    add_theory_arg(report);

    auto* compose = app.add_subcommand("compose", "compose two states (or effects)");
    add_theory_arg(compose);
    compose->add_option("--composite", composite, "composition rule to use")->required();
    compose->add_option("--left", left_text, "left coordinates, e.g. 1/2,1/2")->required();
    compose->add_option("--right", right_text, "right coordinates")->required();
    compose->add_flag("--effects", as_effects, "treat the inputs as effects");

    auto* check = app.add_subcommand("check", "decide one structural property");
    check->require_subcommand(1);
    auto* c_causality = check->add_subcommand("causality", "unique deterministic effect");
    add_theory_arg(c_causality);
    c_causality->add_option("--system", system, "system name")->required();
    auto* c_classicality = check->add_subcommand("classicality", "perfect discrimination test");
    add_theory_arg(c_classicality);
    c_classicality->add_option("--system", system, "system name")->required();
    auto* c_atomicity = check->add_subcommand("atomicity", "products of pure states stay pure");
    add_theory_arg(c_atomicity);
    c_atomicity->add_option("--composite", composite, "composite name")->required();
    auto* c_entanglement = check->add_subcommand("entanglement", "entangled states exist");
    add_theory_arg(c_entanglement);
    c_entanglement->add_option("--composite", composite, "composite name")->required();
    auto* c_local = check->add_subcommand("local-discriminability",
                                          "product effects separate composite states");
    add_theory_arg(c_local);
    c_local->add_option("--composite", composite, "composite name")->required();
    auto* c_assoc = check->add_subcommand("associativity", "bracketings agree on a triple");
    add_theory_arg(c_assoc);
    c_assoc->add_option("--factors", factors_text, "three factor names, e.g. A,B,C")->required();

    auto* separable = app.add_subcommand("separable", "decompose a composite state");
    add_theory_arg(separable);
    separable->add_option("--composite", composite, "composite name")->required();
    separable->add_option("--state", state_text, "composite coordinates")->required();

    auto* superpos = app.add_subcommand("superposition", "ultraweak/weak/strong checks");
    add_theory_arg(superpos);
    superpos->add_option("--system", system, "system name")->required();
    superpos->add_option("--dist", dist_text, "distribution over the set")->required();
    superpos->add_option("--mode", mode_name, "ultraweak | weak | strong");
    superpos->add_option("--set", set_text, "discriminable set (default: greedy maximal)");

    auto* purify = app.add_subcommand("purify", "search for a pure dilation");
    add_theory_arg(purify);
    purify->add_option("--system", system, "system name")->required();
    purify->add_option("--state", state_text, "state coordinates")->required();
    purify->add_option("--ancilla", ancilla, "ancilla system name")->required();

    auto* generate = app.add_subcommand("generate", "emit a theory file");
    generate->require_subcommand(1);
    auto* gen_ct = generate->add_subcommand("ct", "classical product theory");
    gen_ct->add_option("--dims", dims_text, "system dimensions, e.g. 2,2")->required();
    gen_ct->add_option("-o,--output", out_path, "write output to a file");
    auto* gen_toy = generate->add_subcommand("toy", "two systems with excess dimension");
    gen_toy->add_option("--dims", dims_text, "two dimensions, e.g. 2,2")->required();
    gen_toy->add_option("--delta", delta, "excess composite dimension (>= 1)");
    gen_toy->add_option("--seed", seed, "random seed");
    gen_toy->add_option("--max-den", max_den, "largest weight denominator");
    gen_toy->add_option("-o,--output", out_path, "write output to a file");
    auto* gen_random = generate->add_subcommand("random", "seeded random bipartite theory");
    gen_random->add_option("--seed", seed, "random seed");
    gen_random->add_option("--max-dim", max_dim, "largest factor dimension");
    gen_random->add_option("--max-delta", max_delta, "largest excess dimension");
    gen_random->add_option("--max-den", max_den, "largest weight denominator");
    gen_random->add_option("-o,--output", out_path, "write output to a file");

    auto* selftest = app.add_subcommand("selftest", "run the property battery");
    selftest->add_option("--seed", seed, "battery seed")->default_val(uint64_t{20240815});
    selftest->add_flag("--json", json_mode, "machine-readable output");

    std::vector<std::string> argv_copy = args;
    try {
        std::vector<const char*> argv = {"sopt"};
        for (const auto& a : argv_copy) {
            argv.push_back(a.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (*validate) {
            Theory t = cli_detail::load_theory(theory_path);
            std::string text = "OK: " + std::to_string(t.systems.size()) + " systems, " +
                               std::to_string(t.composites.size()) + " composites\n";
            if (json_mode) {
                Json j{{"ok", true},
                       {"systems", t.systems.size()},
                       {"composites", t.composites.size()}};
                text = j.dump(2) + "\n";
            }
            cli_detail::emit(text, out_path, out);
            return 0;
        }

        if (*report) {
            Theory t = cli_detail::load_theory(theory_path);
            ReportDocument doc = build_report(t);
            cli_detail::emit(json_mode ? report_json(doc) : report_text(doc), out_path, out);
            return 0;
        }

        if (*compose) {
            Theory t = cli_detail::load_theory(theory_path);
            const CompositionRule& r = cli_detail::composite_rule(t, composite);
            RVector result;
            if (as_effects) {
                result = compose_effects(r, make_effect(r.left, cli_detail::parse_coords(left_text)),
                                         make_effect(r.right, cli_detail::parse_coords(right_text)))
                             .coords;
            } else {
                result = compose_states(r, make_state(r.left, cli_detail::parse_coords(left_text)),
                                        make_state(r.right, cli_detail::parse_coords(right_text)))
                             .coords;
            }
            if (json_mode) {
                Json j{{"composite", r.composite->name},
                       {"coords", cli_detail::Json::array()}};
                for (const auto& x : result) {
                    j["coords"].push_back(to_string(x));
                }
                cli_detail::emit(j.dump(2) + "\n", out_path, out);
            } else {
                cli_detail::emit(to_string(result) + "\n", out_path, out);
            }
            return 0;
        }

        if (*check) {
            Theory t = cli_detail::load_theory(theory_path);
            if (*c_causality) {
                auto r = check_causality(t.find_system(system));
                bool ok = r.status == CausalityStatus::Unique;
                std::string text = ok ? "causality holds: unique deterministic effect " +
                                            to_string(r.effect->coords) + "\n"
                                      : "causality FAILS: no deterministic effect in the model\n";
                if (json_mode) {
                    Json j{{"property", "causality"}, {"holds", ok}};
                    j["effect"] = ok ? Json(to_string(r.effect->coords)) : Json();
                    text = j.dump(2) + "\n";
                }
                cli_detail::emit(text, out_path, out);
                return ok ? 0 : 1;
            }
            if (*c_classicality) {
                auto r = check_classicality(t.find_system(system));
                std::string text =
                    r.classical
                        ? "classical: the dual-basis discrimination test is available\n"
                        : "not classical: no perfect discrimination test in the effect model\n";
                if (json_mode) {
                    text = Json{{"property", "classicality"}, {"holds", r.classical}}.dump(2) +
                           "\n";
                }
                cli_detail::emit(text, out_path, out);
                return r.classical ? 0 : 1;
            }
            if (*c_atomicity) {
                auto r = check_atomicity(cli_detail::composite_rule(t, composite));
                std::string text =
                    r.atomic ? "atomic: every product of pure states is pure\n"
                             : "atomicity FAILS: block (" +
                                   std::to_string(r.violating_pair.first) + "," +
                                   std::to_string(r.violating_pair.second) +
                                   ") mixes the product\n";
                if (json_mode) {
                    Json j{{"property", "atomicity"}, {"holds", r.atomic}};
                    j["violating_pair"] =
                        r.atomic ? Json()
                                 : Json{r.violating_pair.first, r.violating_pair.second};
                    text = j.dump(2) + "\n";
                }
                cli_detail::emit(text, out_path, out);
                return r.atomic ? 0 : 1;
            }
            if (*c_entanglement) {
                const CompositionRule& r = cli_detail::composite_rule(t, composite);
                auto e = entanglement_present(r);
                std::string text;
                if (e.present) {
                    auto cert = is_separable(r, vertex_state(r.composite, e.witness_vertex));
                    text = "ENTANGLED: vertex " + std::to_string(e.witness_vertex) +
                           " of block (" + std::to_string(cert.violating_block.first) + "," +
                           std::to_string(cert.violating_block.second) +
                           ") admits no product decomposition\n";
                } else {
                    text = "not entangled: every block is a singleton\n";
                }
                if (json_mode) {
                    Json j{{"property", "entanglement"}, {"present", e.present}};
                    j["witness_vertex"] = e.present ? Json(e.witness_vertex) : Json();
                    text = j.dump(2) + "\n";
                }
                cli_detail::emit(text, out_path, out);
                return 0;  // presence is a classification, not a violation
            }
            if (*c_local) {
                const CompositionRule& r = cli_detail::composite_rule(t, composite);
                auto rep = analyze_composite(r);
                std::string text =
                    rep.local_discriminability
                        ? "local discriminability holds (degree 1)\n"
                        : "local discriminability FAILS: joint effects are needed (degree " +
                              std::to_string(rep.degree) + ")\n";
                if (json_mode) {
                    text = Json{{"property", "local_discriminability"},
                                {"holds", rep.local_discriminability},
                                {"degree", rep.degree}}
                               .dump(2) +
                           "\n";
                }
                cli_detail::emit(text, out_path, out);
                return rep.local_discriminability ? 0 : 1;
            }
            if (*c_assoc) {
                auto names = cli_detail::parse_names(factors_text);
                if (names.size() != 3) {
                    throw ParseError("--factors needs exactly three names");
                }
                auto r = check_associativity(t, names[0], names[1], names[2]);
                std::string text = r.associative
                                       ? "associative: both bracketings agree\n"
                                       : "associativity FAILS: " + r.mismatch + "\n";
                if (json_mode) {
                    Json j{{"property", "associativity"}, {"holds", r.associative}};
                    j["mismatch"] = r.associative ? Json() : Json(r.mismatch);
                    j["bijection"] = r.associative ? Json(r.bijection) : Json();
                    text = j.dump(2) + "\n";
                }
                cli_detail::emit(text, out_path, out);
                return r.associative ? 0 : 1;
            }
        }

        if (*separable) {
            Theory t = cli_detail::load_theory(theory_path);
            const CompositionRule& r = cli_detail::composite_rule(t, composite);
            auto omega = make_state(r.composite, cli_detail::parse_coords(state_text));
            auto cert = is_separable(r, omega);
            std::string text;
            Json j{{"separable", cert.separable}};
            if (cert.separable) {
                text = "SEPARABLE:";
                Json lam = Json::array();
                for (const auto& [ij, l] : cert.lambda) {
                    text += " lambda(" + std::to_string(ij.first) + "," +
                            std::to_string(ij.second) + ") = " + to_string(l);
                    lam.push_back(Json{{"i", ij.first}, {"j", ij.second}, {"value", to_string(l)}});
                }
                text += "\n";
                j["lambda"] = std::move(lam);
            } else {
                text = "ENTANGLED: block (" + std::to_string(cert.violating_block.first) + "," +
                       std::to_string(cert.violating_block.second) + ") vertices " +
                       std::to_string(cert.inconsistent_indices.first) + " and " +
                       std::to_string(cert.inconsistent_indices.second) +
                       " have inconsistent ratios " + to_string(cert.ratio_a) + " vs " +
                       to_string(cert.ratio_b) + "\n";
                j["violating_block"] = {cert.violating_block.first, cert.violating_block.second};
                j["inconsistent_indices"] = {cert.inconsistent_indices.first,
                                             cert.inconsistent_indices.second};
                j["ratios"] = {to_string(cert.ratio_a), to_string(cert.ratio_b)};
            }
            cli_detail::emit(json_mode ? j.dump(2) + "\n" : text, out_path, out);
            return 0;
        }

        if (*superpos) {
            Theory t = cli_detail::load_theory(theory_path);
            SystemPtr s = t.find_system(system);
            SuperpositionMode mode;
            if (mode_name == "ultraweak") {
                mode = SuperpositionMode::Ultraweak;
            } else if (mode_name == "weak") {
                mode = SuperpositionMode::Weak;
            } else if (mode_name == "strong") {
                mode = SuperpositionMode::Strong;
            } else {
                throw ParseError("--mode must be ultraweak, weak, or strong");
            }
            std::vector<size_t> base = set_text.empty() ? maximal_discriminable_set(s)
                                                        : cli_detail::parse_indices(set_text);
            auto v = check_superposition(s, base, cli_detail::parse_coords(dist_text), mode);
            std::string text;
            if (v.vacuous) {
                text = "VACUOUS: " + v.detail + "\n";
            } else if (v.holds) {
                text = std::string("HOLDS (") + to_string(mode) + "): pure vertex " +
                       std::to_string(v.witness_vertex) + " reproduces the distribution; " +
                       v.detail + "\n";
                if (v.witness_observation) {
                    text += "  observation: " +
                            cli_detail::observation_text(*v.witness_observation) + "\n";
                }
            } else {
                text = std::string("FAILS (") + to_string(mode) + "): " + v.detail + "\n";
                if (v.counterexample) {
                    text += "  counterexample: " +
                            cli_detail::observation_text(*v.counterexample) + "\n";
                }
            }
            if (json_mode) {
                Json j{{"mode", to_string(mode)},
                       {"vacuous", v.vacuous},
                       {"holds", v.holds},
                       {"detail", v.detail}};
                j["witness_vertex"] = v.holds ? Json(v.witness_vertex) : Json();
                j["witness_observation"] = v.witness_observation
                                               ? cli_detail::observation_json(*v.witness_observation)
                                               : Json();
                j["counterexample"] =
                    v.counterexample ? cli_detail::observation_json(*v.counterexample) : Json();
                text = j.dump(2) + "\n";
            }
            cli_detail::emit(text, out_path, out);
            return 0;
        }

        if (*purify) {
            Theory t = cli_detail::load_theory(theory_path);
            SystemPtr s = t.find_system(system);
            auto rho = make_state(s, cli_detail::parse_coords(state_text));
            auto r = check_purification(t, rho, ancilla);
            std::string text =
                r.purifiable
                    ? "PURIFIABLE: vertex " + std::to_string(r.witness_vertex) + " of " +
                          r.composite_name + " marginalizes to the state\n"
                    : "NOT PURIFIABLE: no pure state of " + r.composite_name +
                          " has this marginal (" + std::to_string(r.scanned) +
                          " vertices scanned)\n";
            if (json_mode) {
                Json j{{"purifiable", r.purifiable},
                       {"composite", r.composite_name},
                       {"scanned", r.scanned}};
                j["witness_vertex"] = r.purifiable ? Json(r.witness_vertex) : Json();
                text = j.dump(2) + "\n";
            }
            cli_detail::emit(text, out_path, out);
            return 0;
        }

        if (*generate) {
            Theory t;
            if (*gen_ct) {
                std::vector<size_t> dims = cli_detail::parse_indices(dims_text);
                t = generate_ct(dims);
            } else if (*gen_toy) {
                std::vector<size_t> dims = cli_detail::parse_indices(dims_text);
                if (dims.size() != 2) {
                    throw ParseError("generate toy needs exactly two dimensions");
                }
                t = generate_toy(dims[0], dims[1], delta, seed, max_den);
            } else {
                t = generate_random(seed, max_dim, max_delta, max_den);
            }
            cli_detail::emit(serialize_theory(t), out_path, out);
            return 0;
        }

        if (*selftest) {
            SelftestOptions opt;
            opt.seed = seed;
            auto results = run_selftest(opt);
            bool all = true;
            if (json_mode) {
                Json j = Json::array();
                for (const auto& r : results) {
                    all = all && r.pass;
                    j.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"message", r.message}});
                }
                out << j.dump(2) << "\n";
            } else {
                for (const auto& r : results) {
                    all = all && r.pass;
                    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.message
                        << "\n";
                }
            }
            return all ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand handled\n";
    return 2;
}

}  // namespace sopt
