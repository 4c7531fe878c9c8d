// Superposition-principle checkers (ultraweak / weak / strong) and the
// purification scan.
//
// Fix a maximal jointly discriminable set I of vertices and let K be the
// remaining vertices. Every observation that perfectly discriminates I has
// effects a_i = b_i + Σ_{k∈K} q_k^i b_k with columns q_k in the simplex over
// I (and, under a restricted model, every a_i inside the cone). The set Q of
// admissible column families is therefore a polytope, and a pure state σ
// reproduces a distribution p at observation q exactly when σ = |v⟩ with
// p = δ_v (v ∈ I) or σ = |k⟩ with q_k = p (k ∈ K). All three superposition
// modes reduce to questions about Q answered by exact LPs.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sopt/analysis.hpp"

namespace sopt {

struct DiscriminatingObservation {
    std::vector<size_t> base_set;  // I, ascending vertex indices (1-based)
    std::vector<size_t> free_set;  // K, ascending complement
    std::vector<RVector> columns;  // per k in free_set order: q_k over base_set order
};

// Rebuilds the observation's effects a_i, aligned with base_set.
inline std::vector<EffectVector> effects_from_observation(const SystemPtr& s,
                                                          const DiscriminatingObservation& obs) {
    std::vector<EffectVector> out;
    for (size_t ii = 0; ii < obs.base_set.size(); ++ii) {
        RVector coords(s->dim, 0);
        coords[obs.base_set[ii] - 1] = 1;
        for (size_t kk = 0; kk < obs.free_set.size(); ++kk) {
            coords[obs.free_set[kk] - 1] = obs.columns[kk][ii];
        }
        out.push_back(make_effect(s, std::move(coords)));
    }
    return out;
}

// Structural + model validity of an observation: columns in the simplex over
// I, and every reconstructed effect inside the system's effect model.
inline bool observation_valid(const SystemPtr& s, const DiscriminatingObservation& obs) {
    if (obs.columns.size() != obs.free_set.size()) {
        return false;
    }
    for (const auto& col : obs.columns) {
        if (col.size() != obs.base_set.size() || sum(col) != 1) {
            return false;
        }
        for (const auto& x : col) {
            if (x < 0) {
                return false;
            }
        }
    }
    for (const auto& a : effects_from_observation(s, obs)) {
        if (!is_effect(s, a.coords).ok) {
            return false;
        }
    }
    return true;
}

struct JointDiscrimination {
    bool ok = false;
    std::vector<EffectVector> test;  // aligned with the set; sums to e
};

namespace detail {

inline void check_vertex_set(const SystemPtr& s, const std::vector<size_t>& set) {
    if (set.empty()) {
        throw std::invalid_argument("vertex set must be nonempty");
    }
    for (size_t t = 0; t < set.size(); ++t) {
        if (set[t] < 1 || set[t] > s->dim) {
            throw std::invalid_argument("vertex " + std::to_string(set[t]) + " out of range on '" +
                                        s->name + "'");
        }
        if (t > 0 && set[t] <= set[t - 1]) {
            throw std::invalid_argument("vertex set must be strictly ascending");
        }
    }
}

inline std::vector<size_t> complement_of(const SystemPtr& s, const std::vector<size_t>& set) {
    std::vector<size_t> out;
    for (size_t v = 1; v <= s->dim; ++v) {
        if (!std::binary_search(set.begin(), set.end(), v)) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace detail

// Does an observation test {a_i}_{i∈set} with pair(a_i, |j⟩) = δ_ij on the
// set and Σ_i a_i = e exist inside the effect model?
inline JointDiscrimination is_jointly_discriminable(const SystemPtr& s,
                                                    const std::vector<size_t>& set) {
    detail::check_vertex_set(s, set);
    JointDiscrimination out;

    if (s->effects.kind == EffectModel::Kind::FullDual) {
        // direct witness: a_i = b_i, with the leftover mass on the first one
        out.ok = true;
        for (size_t t = 0; t < set.size(); ++t) {
            RVector coords(s->dim, 0);
            coords[set[t] - 1] = 1;
            if (t == 0) {
                for (size_t k : detail::complement_of(s, set)) {
                    coords[k - 1] = 1;
                }
            }
            out.test.push_back(make_effect(s, std::move(coords)));
        }
        return out;
    }

    const auto& gens = s->effects.generators;
    size_t n = set.size();
    // variables c[t][g] >= 0: a_{set[t]} = Σ_g c[t][g]·gen_g
    LPProblem p(n * gens.size());
    p.set_all_nonneg();
    auto value_row = [&](size_t t, size_t vertex) {
        RVector row(p.num_vars, 0);
        for (size_t g = 0; g < gens.size(); ++g) {
            row[t * gens.size() + g] = gens[g][vertex - 1];
        }
        return row;
    };
    for (size_t t = 0; t < n; ++t) {
        for (size_t u = 0; u < n; ++u) {
            p.add_eq(value_row(t, set[u]), t == u ? 1 : 0);
        }
    }
    for (size_t k : detail::complement_of(s, set)) {
        RVector row(p.num_vars, 0);
        for (size_t t = 0; t < n; ++t) {
            for (size_t g = 0; g < gens.size(); ++g) {
                row[t * gens.size() + g] = gens[g][k - 1];
            }
        }
        p.add_eq(std::move(row), 1);  // Σ_i a_i agrees with e off the set too
    }
    auto r = lp_feasible(p);
    if (!r.feasible) {
        return out;
    }
    out.ok = true;
    for (size_t t = 0; t < n; ++t) {
        RVector coords(s->dim, 0);
        for (size_t j = 0; j < s->dim; ++j) {
            for (size_t g = 0; g < gens.size(); ++g) {
                coords[j] += r.witness[t * gens.size() + g] * gens[g][j];
            }
        }
        out.test.push_back(make_effect(s, std::move(coords)));
    }
    return out;
}

// Greedy lexicographic extension starting from vertex 1. Joint
// discriminability is preserved under taking subsets (fold the dropped
// effects into a kept one), so a set the greedy loop cannot extend is
// genuinely maximal.
inline std::vector<size_t> maximal_discriminable_set(const SystemPtr& s) {
    if (s->effects.kind == EffectModel::Kind::FullDual) {
        std::vector<size_t> all(s->dim);
        for (size_t v = 1; v <= s->dim; ++v) {
            all[v - 1] = v;
        }
        return all;
    }
    std::vector<size_t> set = {1};
    for (size_t v = 2; v <= s->dim; ++v) {
        std::vector<size_t> candidate = set;
        candidate.push_back(v);
        if (is_jointly_discriminable(s, candidate).ok) {
            set = std::move(candidate);
        }
    }
    return set;
}

enum class SuperpositionMode { Ultraweak, Weak, Strong };

inline const char* to_string(SuperpositionMode m) {
    switch (m) {
        case SuperpositionMode::Ultraweak: return "ultraweak";
        case SuperpositionMode::Weak: return "weak";
        case SuperpositionMode::Strong: return "strong";
    }
    return "?";
}

struct SuperpositionVerdict {
    SuperpositionMode mode = SuperpositionMode::Ultraweak;
    bool vacuous = false;  // |I| = 1: a single-outcome observation says nothing
    bool holds = false;

    // when holds: a pure state reproducing p, plus one observation it was
    // checked against (for Weak/Strong the vertex works for all of them)
    std::optional<DiscriminatingObservation> witness_observation;
    size_t witness_vertex = 0;

    // when failing Weak/Strong: an observation at which no pure state
    // reproduces p (it defeats every vertex at once)
    std::optional<DiscriminatingObservation> counterexample;

    std::string detail;
};

namespace detail {

// The polytope Q of admissible column families, as an LP over variables
// q[kk*nI + ii] (plus cone coefficients for restricted models).
struct QPolytope {
    SystemPtr s;
    std::vector<size_t> I, K;
    size_t nI = 0, nK = 0;
    LPProblem lp{0};

    size_t qvar(size_t kk, size_t ii) const {
        return kk * nI + ii;
    }

    QPolytope(SystemPtr sys, std::vector<size_t> base, std::vector<size_t> free)
        : s(std::move(sys)), I(std::move(base)), K(std::move(free)) {
        nI = I.size();
        nK = K.size();
        size_t gcount =
            s->effects.kind == EffectModel::Kind::RestrictedCone ? s->effects.generators.size() : 0;
        lp = LPProblem(nK * nI + nI * gcount);
        lp.set_all_nonneg();
        for (size_t kk = 0; kk < nK; ++kk) {
            RVector row(lp.num_vars, 0);
            for (size_t ii = 0; ii < nI; ++ii) {
                row[qvar(kk, ii)] = 1;
            }
            lp.add_eq(std::move(row), 1);
        }
        if (gcount > 0) {
            const auto& gens = s->effects.generators;
            // per i: Σ_g c[i][g]·gen_g reproduces a_i, whose K-coordinates
            // are the q-variables and whose I-coordinates are δ
            for (size_t ii = 0; ii < nI; ++ii) {
                size_t cbase = nK * nI + ii * gcount;
                for (size_t j = 1; j <= s->dim; ++j) {
                    RVector row(lp.num_vars, 0);
                    for (size_t g = 0; g < gcount; ++g) {
                        row[cbase + g] = gens[g][j - 1];
                    }
                    auto kt = std::find(K.begin(), K.end(), j);
                    Rational rhs = 0;
                    if (kt != K.end()) {
                        row[qvar(static_cast<size_t>(kt - K.begin()), ii)] = -1;
                    } else {
                        size_t pos = static_cast<size_t>(
                            std::find(I.begin(), I.end(), j) - I.begin());
                        rhs = pos == ii ? 1 : 0;
                    }
                    lp.add_eq(std::move(row), rhs);
                }
            }
        }
    }

    DiscriminatingObservation observation_from(const RVector& point) const {
        DiscriminatingObservation obs;
        obs.base_set = I;
        obs.free_set = K;
        for (size_t kk = 0; kk < nK; ++kk) {
            RVector col(nI);
            for (size_t ii = 0; ii < nI; ++ii) {
                col[ii] = point[qvar(kk, ii)];
            }
            obs.columns.push_back(std::move(col));
        }
        return obs;
    }
};

inline bool column_equals(const DiscriminatingObservation& obs, size_t kk, const RVector& p) {
    return obs.columns[kk] == p;
}

// exact re-evaluation: does some pure vertex reproduce p at this observation?
inline std::optional<size_t> satisfying_vertex(const SystemPtr& s,
                                               const DiscriminatingObservation& obs,
                                               const RVector& p) {
    auto effects = effects_from_observation(s, obs);
    for (size_t v = 1; v <= s->dim; ++v) {
        bool all = true;
        for (size_t ii = 0; ii < obs.base_set.size() && all; ++ii) {
            all = effects[ii].coords[v - 1] == p[ii];
        }
        if (all) {
            return v;
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Decides one superposition mode for distribution p over the maximal
// discriminable set base (both re-verified). See the header comment for the
// reduction to the polytope Q.
inline SuperpositionVerdict check_superposition(const SystemPtr& s, std::vector<size_t> base,
                                                RVector p, SuperpositionMode mode) {
    detail::check_vertex_set(s, base);
    if (p.size() != base.size()) {
        throw InvalidDistribution("distribution has " + std::to_string(p.size()) +
                                  " entries for a set of " + std::to_string(base.size()));
    }
    for (const auto& x : p) {
        if (x < 0) {
            throw InvalidDistribution("negative probability " + to_string(x));
        }
    }
    if (sum(p) != 1) {
        throw InvalidDistribution("probabilities sum to " + to_string(sum(p)) + ", not 1");
    }

    auto disc = is_jointly_discriminable(s, base);
    if (!disc.ok) {
        throw NotMaximal("the supplied set is not jointly discriminable");
    }
    for (size_t v : detail::complement_of(s, base)) {
        std::vector<size_t> bigger = base;
        bigger.insert(std::lower_bound(bigger.begin(), bigger.end(), v), v);
        if (is_jointly_discriminable(s, bigger).ok) {
            throw NotMaximal("vertex " + std::to_string(v) +
                             " can be added to the discriminable set");
        }
    }

    SuperpositionVerdict verdict;
    verdict.mode = mode;

    std::vector<size_t> K = detail::complement_of(s, base);
    detail::QPolytope Q(s, base, K);

    // a concrete admissible observation, from the discrimination test
    DiscriminatingObservation sample;
    sample.base_set = base;
    sample.free_set = K;
    for (size_t kk = 0; kk < K.size(); ++kk) {
        RVector col(base.size());
        for (size_t ii = 0; ii < base.size(); ++ii) {
            col[ii] = disc.test[ii].coords[K[kk] - 1];
        }
        sample.columns.push_back(std::move(col));
    }

    if (base.size() == 1) {
        // single-outcome observations: a_1 = e and p = (1); every
        // deterministic pure state trivially reproduces p
        verdict.vacuous = true;
        verdict.holds = true;
        verdict.witness_observation = sample;
        verdict.witness_vertex = base[0];
        verdict.detail = "single-element set: the one observation is the deterministic effect";
        return verdict;
    }

    long point_mass = -1;
    for (size_t ii = 0; ii < p.size(); ++ii) {
        if (p[ii] == 1) {
            point_mass = static_cast<long>(ii);
        }
    }

    auto verify_witness = [&](const DiscriminatingObservation& obs, size_t vertex) {
        if (!observation_valid(s, obs)) {
            throw std::logic_error("superposition witness observation is not admissible");
        }
        auto effects = effects_from_observation(s, obs);
        for (size_t ii = 0; ii < base.size(); ++ii) {
            if (effects[ii].coords[vertex - 1] != p[ii]) {
                throw std::logic_error("superposition witness failed re-evaluation");
            }
        }
    };
    auto verify_counterexample = [&](const DiscriminatingObservation& obs) {
        if (!observation_valid(s, obs) || detail::satisfying_vertex(s, obs, p)) {
            throw std::logic_error("superposition counterexample failed re-evaluation");
        }
    };

    if (mode == SuperpositionMode::Ultraweak) {
        if (point_mass >= 0) {
            verdict.holds = true;
            verdict.witness_observation = sample;
            verdict.witness_vertex = base[static_cast<size_t>(point_mass)];
            verify_witness(sample, verdict.witness_vertex);
            verdict.detail = "point mass: the discriminating vertex itself reproduces p";
            return verdict;
        }
        for (size_t kk = 0; kk < Q.nK; ++kk) {
            LPProblem probe = Q.lp;
            for (size_t ii = 0; ii < Q.nI; ++ii) {
                RVector row(probe.num_vars, 0);
                row[Q.qvar(kk, ii)] = 1;
                probe.add_eq(std::move(row), p[ii]);
            }
            auto r = lp_feasible(probe);
            if (r.feasible) {
                verdict.holds = true;
                verdict.witness_observation = Q.observation_from(r.witness);
                verdict.witness_vertex = K[kk];
                verify_witness(*verdict.witness_observation, verdict.witness_vertex);
                verdict.detail = "an observation assigns column q_k = p to a free vertex";
                return verdict;
            }
        }
        verdict.holds = false;
        verdict.detail = "no admissible observation lets any pure state reproduce p";
        return verdict;
    }

    // Weak and Strong. Point masses first: the base vertex works for every
    // observation, settling both modes at once.
    if (point_mass >= 0) {
        verdict.holds = true;
        verdict.witness_observation = sample;
        verdict.witness_vertex = base[static_cast<size_t>(point_mass)];
        verify_witness(sample, verdict.witness_vertex);
        verdict.detail = "point mass: the discriminating vertex reproduces p at every observation";
        return verdict;
    }

    // Non-point p: a vertex in I never works, so everything hinges on the
    // free columns. A single forced column q_k ≡ p over Q makes both Weak and
    // Strong hold at |k⟩; otherwise one observation defeats every vertex.
    if (s->effects.kind == EffectModel::Kind::FullDual) {
        // Q is the free product of simplices: columns are unconstrained, so
        // nothing is forced; all-columns-on-vertex-1 beats any non-point p
        DiscriminatingObservation adversarial;
        adversarial.base_set = base;
        adversarial.free_set = K;
        for (size_t kk = 0; kk < K.size(); ++kk) {
            RVector col(base.size(), 0);
            col[0] = 1;
            adversarial.columns.push_back(std::move(col));
        }
        verify_counterexample(adversarial);
        verdict.holds = false;
        verdict.counterexample = std::move(adversarial);
        verdict.detail = "the observation concentrating every free column on the first "
                         "discriminable vertex defeats every pure state";
        return verdict;
    }

    // Restricted model. Probe with the sample observation first.
    bool sample_has_match = false;
    for (size_t kk = 0; kk < Q.nK && !sample_has_match; ++kk) {
        sample_has_match = detail::column_equals(sample, kk, p);
    }
    if (!sample_has_match && mode == SuperpositionMode::Weak) {
        verify_counterexample(sample);
        verdict.holds = false;
        verdict.counterexample = sample;
        verdict.detail = "the discrimination test itself already defeats every pure state";
        return verdict;
    }

    // Forced-column analysis: for each free vertex and coordinate, the exact
    // range of q_k^i over Q.
    std::vector<RVector> deviating;  // one point of Q per free vertex, column != p
    long forced_column = -1;
    for (size_t kk = 0; kk < Q.nK; ++kk) {
        bool forced = true;
        for (size_t ii = 0; ii < Q.nI && forced; ++ii) {
            RVector obj(Q.lp.num_vars, 0);
            obj[Q.qvar(kk, ii)] = 1;
            auto mx = lp_maximize(Q.lp, obj);
            if (mx.status != LPStatus::Optimal) {
                throw std::logic_error("superposition: Q polytope probe not optimal");
            }
            if (mx.value != p[ii]) {
                forced = false;
                deviating.push_back(mx.arg);
                break;
            }
            auto mn = lp_minimize(Q.lp, obj);
            if (mn.value != p[ii]) {
                forced = false;
                deviating.push_back(mn.arg);
                break;
            }
        }
        if (forced) {
            forced_column = static_cast<long>(kk);
            break;
        }
    }

    if (forced_column >= 0) {
        size_t k = K[static_cast<size_t>(forced_column)];
        verdict.holds = true;
        verdict.witness_observation = sample;
        verdict.witness_vertex = k;
        // the column is pinned to p in every admissible observation,
        // including the sample
        verify_witness(sample, k);
        verdict.detail = "column of free vertex " + std::to_string(k) +
                         " is forced to p across all admissible observations";
        return verdict;
    }

    // No forced column: combine the deviating points into one observation
    // whose every column differs from p. A generic convex combination works;
    // each failing weight is a root of a nonzero polynomial, so scanning
    // small parameters terminates.
    for (long long denom = 2;; ++denom) {
        RVector lam(deviating.size());
        Rational t = rat(1, denom), acc = 1, total = 0;
        for (size_t m = 0; m < deviating.size(); ++m) {
            lam[m] = acc;
            total += acc;
            acc *= t;
        }
        RVector point(Q.lp.num_vars, 0);
        for (size_t m = 0; m < deviating.size(); ++m) {
            Rational w = lam[m] / total;
            for (size_t j = 0; j < point.size(); ++j) {
                point[j] += w * deviating[m][j];
            }
        }
        auto obs = Q.observation_from(point);
        bool clean = true;
        for (size_t kk = 0; kk < Q.nK && clean; ++kk) {
            clean = !detail::column_equals(obs, kk, p);
        }
        if (clean) {
            verify_counterexample(obs);
            verdict.holds = false;
            verdict.counterexample = std::move(obs);
            verdict.detail = "a combined observation moves every free column away from p";
            return verdict;
        }
    }
}

struct PurificationResult {
    bool purifiable = false;
    size_t witness_vertex = 0;   // composite vertex whose marginal equals ρ
    std::string composite_name;
    Side kept = Side::Left;
    size_t scanned = 0;  // composite vertices examined
};

// Scans every pure vertex of the (system, ancilla) composite and compares
// its marginal on the system side with ρ, exactly. Marginals of pure states
// are pure, so mixed deterministic states always come back NotPurifiable.
inline PurificationResult check_purification(const Theory& t, const StateVector& rho,
                                             const std::string& ancilla) {
    if (!is_deterministic(rho)) {
        throw NotDeterministic("purification asks for deterministic states; coordinates sum to " +
                               to_string(sum(rho.coords)));
    }
    const std::string& system = rho.system->name;
    t.find_system(ancilla);

    const CompositionRule* rule = t.rule_for(system, ancilla);
    Side keep = Side::Left;
    if (!rule) {
        rule = t.rule_for(ancilla, system);
        keep = Side::Right;
    }
    if (!rule) {
        throw MissingRule("no composition rule declared for (" + system + ", " + ancilla + ")");
    }

    PurificationResult out;
    out.composite_name = rule->composite->name;
    out.kept = keep;
    for (size_t k = 1; k <= rule->composite_dim(); ++k) {
        ++out.scanned;
        StateVector marg = marginalize(*rule, vertex_state(rule->composite, k), keep);
        if (marg.coords == rho.coords) {
            out.purifiable = true;
            out.witness_vertex = k;
            return out;
        }
    }
    return out;
}

}  // namespace sopt
