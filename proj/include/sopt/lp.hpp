// Exact linear-program feasibility and optimization over the rationals.
// Textbook two-phase simplex with Bland's rule: terminates on every input,
// returns an exact witness when feasible and a Farkas-type infeasibility
// certificate otherwise. Both are re-verified before they are returned.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sopt/rational.hpp"

namespace sopt {

enum class Sense {
    LessEq,
    GreaterEq,
};

struct LPProblem {
    struct Equality {
        RVector coeffs;
        Rational rhs;
    };
    struct Inequality {
        RVector coeffs;
        Rational rhs;
        Sense sense;
    };

    size_t num_vars = 0;
    std::vector<Equality> equalities;
    std::vector<Inequality> inequalities;
    std::vector<bool> nonneg;  // per variable; true constrains x_i >= 0

    explicit LPProblem(size_t n = 0) : num_vars(n), nonneg(n, false) {}

    void add_eq(RVector coeffs, Rational rhs) {
        equalities.push_back({std::move(coeffs), std::move(rhs)});
    }
    void add_le(RVector coeffs, Rational rhs) {
        inequalities.push_back({std::move(coeffs), std::move(rhs), Sense::LessEq});
    }
    void add_ge(RVector coeffs, Rational rhs) {
        inequalities.push_back({std::move(coeffs), std::move(rhs), Sense::GreaterEq});
    }
    void set_all_nonneg() {
        nonneg.assign(num_vars, true);
    }
};

// Multipliers proving that no x satisfies the constraints. With every
// constraint rewritten in ">=" orientation (equalities kept two-sided via a
// free multiplier, "<="-rows negated), the combination of constraint rows by
// these multipliers cancels every variable exactly while the combined
// right-hand side stays strictly positive: 0 >= (positive), a contradiction.
struct FarkasCertificate {
    RVector eq_mult;      // free, one per equality
    RVector ineq_mult;    // >= 0, one per inequality
    RVector nonneg_mult;  // >= 0, one per variable (zero on free variables)
};

struct Feasibility {
    bool feasible = false;
    RVector witness;                // set when feasible
    FarkasCertificate certificate;  // set when infeasible
};

namespace detail {

inline void check_shape(const LPProblem& p) {
    if (p.nonneg.size() != p.num_vars) {
        throw DimensionMismatch("lp: nonneg mask length != num_vars");
    }
    for (const auto& e : p.equalities) {
        if (e.coeffs.size() != p.num_vars) {
            throw DimensionMismatch("lp: equality coefficient length != num_vars");
        }
    }
    for (const auto& e : p.inequalities) {
        if (e.coeffs.size() != p.num_vars) {
            throw DimensionMismatch("lp: inequality coefficient length != num_vars");
        }
    }
}

}  // namespace detail

// Exact re-evaluation of all constraints at x.
inline bool satisfies(const LPProblem& p, const RVector& x) {
    detail::check_shape(p);
    if (x.size() != p.num_vars) {
        return false;
    }
    for (size_t j = 0; j < p.num_vars; ++j) {
        if (p.nonneg[j] && x[j] < 0) {
            return false;
        }
    }
    for (const auto& e : p.equalities) {
        if (dot(e.coeffs, x) != e.rhs) {
            return false;
        }
    }
    for (const auto& e : p.inequalities) {
        Rational v = dot(e.coeffs, x);
        if (e.sense == Sense::LessEq ? v > e.rhs : v < e.rhs) {
            return false;
        }
    }
    return true;
}

// Exact check of the Farkas contradiction described on FarkasCertificate.
inline bool verify_certificate(const LPProblem& p, const FarkasCertificate& c) {
    detail::check_shape(p);
    if (c.eq_mult.size() != p.equalities.size() || c.ineq_mult.size() != p.inequalities.size() ||
        c.nonneg_mult.size() != p.num_vars) {
        return false;
    }
    RVector combo(p.num_vars, 0);
    Rational rhs = 0;
    for (size_t i = 0; i < p.equalities.size(); ++i) {
        for (size_t j = 0; j < p.num_vars; ++j) {
            combo[j] += c.eq_mult[i] * p.equalities[i].coeffs[j];
        }
        rhs += c.eq_mult[i] * p.equalities[i].rhs;
    }
    for (size_t i = 0; i < p.inequalities.size(); ++i) {
        if (c.ineq_mult[i] < 0) {
            return false;
        }
        Rational sign = p.inequalities[i].sense == Sense::GreaterEq ? 1 : -1;
        for (size_t j = 0; j < p.num_vars; ++j) {
            combo[j] += sign * c.ineq_mult[i] * p.inequalities[i].coeffs[j];
        }
        rhs += sign * c.ineq_mult[i] * p.inequalities[i].rhs;
    }
    for (size_t j = 0; j < p.num_vars; ++j) {
        if (c.nonneg_mult[j] < 0) {
            return false;
        }
        if (!p.nonneg[j] && c.nonneg_mult[j] != 0) {
            return false;
        }
        combo[j] += c.nonneg_mult[j];
    }
    return is_zero(combo) && rhs > 0;
}

namespace detail {

// Standard-form tableau shared by feasibility and optimization.
struct Simplex {
    const LPProblem& p;
    size_t num_rows;
    size_t num_struct;             // structural columns (split free variables)
    size_t num_slack;
    size_t num_cols;               // struct + slack + artificial
    std::vector<std::pair<size_t, long>> var_cols;  // (pos_col, neg_col or -1) per original var
    std::vector<int> row_sign;     // +1/-1 applied to make rhs nonnegative
    std::vector<RVector> tab;      // num_rows x (num_cols + 1), last column = rhs
    std::vector<size_t> basis;     // basic column per row

    explicit Simplex(const LPProblem& prob) : p(prob) {
        check_shape(p);
        num_rows = p.equalities.size() + p.inequalities.size();

        num_struct = 0;
        var_cols.reserve(p.num_vars);
        for (size_t j = 0; j < p.num_vars; ++j) {
            if (p.nonneg[j]) {
                var_cols.emplace_back(num_struct++, -1);
            } else {
                size_t pos = num_struct++;
                var_cols.emplace_back(pos, static_cast<long>(num_struct++));
            }
        }
        num_slack = p.inequalities.size();
        num_cols = num_struct + num_slack + num_rows;

        tab.assign(num_rows, RVector(num_cols + 1, 0));
        row_sign.assign(num_rows, 1);
        basis.assign(num_rows, 0);

        auto fill_row = [&](size_t r, const RVector& coeffs, const Rational& rhs) {
            for (size_t j = 0; j < p.num_vars; ++j) {
                tab[r][var_cols[j].first] = coeffs[j];
                if (var_cols[j].second >= 0) {
                    tab[r][static_cast<size_t>(var_cols[j].second)] = -coeffs[j];
                }
            }
            tab[r][num_cols] = rhs;
        };

        size_t r = 0;
        for (const auto& e : p.equalities) {
            fill_row(r, e.coeffs, e.rhs);
            ++r;
        }
        for (size_t i = 0; i < p.inequalities.size(); ++i, ++r) {
            const auto& e = p.inequalities[i];
            fill_row(r, e.coeffs, e.rhs);
            tab[r][num_struct + i] = e.sense == Sense::LessEq ? 1 : -1;
        }
        for (size_t row = 0; row < num_rows; ++row) {
            if (tab[row][num_cols] < 0) {
                row_sign[row] = -1;
                for (auto& x : tab[row]) {
                    x = -x;
                }
            }
            size_t art = num_struct + num_slack + row;
            tab[row][art] = 1;
            basis[row] = art;
        }
    }

    bool is_artificial(size_t col) const {
        return col >= num_struct + num_slack;
    }

    void pivot(size_t row, size_t col) {
        Rational inv = tab[row][col];
        for (auto& x : tab[row]) {
            x /= inv;
        }
        for (size_t i = 0; i < num_rows; ++i) {
            if (i == row || tab[i][col] == 0) {
                continue;
            }
            Rational f = tab[i][col];
            for (size_t j = 0; j <= num_cols; ++j) {
                tab[i][j] -= f * tab[row][j];
            }
        }
        basis[row] = col;
    }

    // Minimizes cost over the current basic feasible solution with Bland's
    // rule. Columns with allow(col) == false never enter. Returns false when
    // the objective is unbounded below.
    template <typename Allow>
    bool run(const RVector& cost, Allow allow) {
        for (;;) {
            // reduced costs: c_j - y^T A_j with y from the current basis
            long entering = -1;
            for (size_t j = 0; j < num_cols; ++j) {
                if (!allow(j)) {
                    continue;
                }
                Rational rc = cost[j];
                for (size_t r = 0; r < num_rows; ++r) {
                    if (cost[basis[r]] != 0 && tab[r][j] != 0) {
                        rc -= cost[basis[r]] * tab[r][j];
                    }
                }
                if (rc < 0) {
                    entering = static_cast<long>(j);
                    break;  // Bland: lowest index
                }
            }
            if (entering < 0) {
                return true;
            }
            size_t col = static_cast<size_t>(entering);
            long leave = -1;
            Rational best;
            for (size_t r = 0; r < num_rows; ++r) {
                if (tab[r][col] <= 0) {
                    continue;
                }
                Rational ratio = tab[r][num_cols] / tab[r][col];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[r] < basis[static_cast<size_t>(leave)])) {
                    leave = static_cast<long>(r);
                    best = ratio;
                }
            }
            if (leave < 0) {
                return false;
            }
            pivot(static_cast<size_t>(leave), col);
        }
    }

    Rational objective(const RVector& cost) const {
        Rational v = 0;
        for (size_t r = 0; r < num_rows; ++r) {
            v += cost[basis[r]] * tab[r][num_cols];
        }
        return v;
    }

    RVector extract_witness() const {
        RVector std_vals(num_cols, 0);
        for (size_t r = 0; r < num_rows; ++r) {
            std_vals[basis[r]] = tab[r][num_cols];
        }
        RVector x(p.num_vars, 0);
        for (size_t j = 0; j < p.num_vars; ++j) {
            x[j] = std_vals[var_cols[j].first];
            if (var_cols[j].second >= 0) {
                x[j] -= std_vals[static_cast<size_t>(var_cols[j].second)];
            }
        }
        return x;
    }

    // Runs phase 1. Returns nullopt when feasible, else the verified
    // infeasibility certificate.
    std::optional<FarkasCertificate> phase1() {
        RVector cost(num_cols, 0);
        for (size_t j = num_struct + num_slack; j < num_cols; ++j) {
            cost[j] = 1;
        }
        run(cost, [](size_t) { return true; });
        if (objective(cost) == 0) {
            return std::nullopt;
        }

        // y^T = c_B^T B^{-1}; B^{-1} sits under the artificial columns.
        RVector y(num_rows, 0);
        for (size_t r = 0; r < num_rows; ++r) {
            size_t art = num_struct + num_slack + r;
            for (size_t row = 0; row < num_rows; ++row) {
                if (cost[basis[row]] != 0) {
                    y[r] += cost[basis[row]] * tab[row][art];
                }
            }
            y[r] *= row_sign[r];  // back to the original row orientation
        }

        FarkasCertificate cert;
        cert.eq_mult.assign(p.equalities.size(), 0);
        cert.ineq_mult.assign(p.inequalities.size(), 0);
        cert.nonneg_mult.assign(p.num_vars, 0);
        for (size_t i = 0; i < p.equalities.size(); ++i) {
            cert.eq_mult[i] = y[i];
        }
        for (size_t i = 0; i < p.inequalities.size(); ++i) {
            const Rational& m = y[p.equalities.size() + i];
            cert.ineq_mult[i] = p.inequalities[i].sense == Sense::GreaterEq ? m : -m;
        }
        for (size_t j = 0; j < p.num_vars; ++j) {
            if (!p.nonneg[j]) {
                continue;
            }
            Rational v = 0;
            for (size_t i = 0; i < p.equalities.size(); ++i) {
                v += y[i] * p.equalities[i].coeffs[j];
            }
            for (size_t i = 0; i < p.inequalities.size(); ++i) {
                v += y[p.equalities.size() + i] * p.inequalities[i].coeffs[j];
            }
            cert.nonneg_mult[j] = -v;
        }
        return cert;
    }

    // After a successful phase 1, pivots basic artificials out where the row
    // has support on a real column; fully zero rows are redundant and inert.
    void drive_out_artificials() {
        for (size_t r = 0; r < num_rows; ++r) {
            if (!is_artificial(basis[r])) {
                continue;
            }
            for (size_t j = 0; j < num_struct + num_slack; ++j) {
                if (tab[r][j] != 0) {
                    pivot(r, j);
                    break;
                }
            }
        }
    }
};

}  // namespace detail

// Exact feasibility decision. The returned witness satisfies every
// constraint exactly; the returned certificate passes verify_certificate.
inline Feasibility lp_feasible(const LPProblem& p) {
    detail::Simplex s(p);
    auto cert = s.phase1();
    Feasibility out;
    if (!cert) {
        out.feasible = true;
        out.witness = s.extract_witness();
        if (!satisfies(p, out.witness)) {
            throw std::logic_error("lp_feasible: witness failed re-evaluation");
        }
    } else {
        out.feasible = false;
        out.certificate = std::move(*cert);
        if (!verify_certificate(p, out.certificate)) {
            throw std::logic_error("lp_feasible: certificate failed re-evaluation");
        }
    }
    return out;
}

enum class LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
};

struct Optimum {
    LPStatus status = LPStatus::Infeasible;
    Rational value;                 // objective at the optimum
    RVector arg;                    // an optimal point
    FarkasCertificate certificate;  // set when infeasible
};

// Exact maximization of objective^T x subject to p.
inline Optimum lp_maximize(const LPProblem& p, const RVector& objective) {
    if (objective.size() != p.num_vars) {
        throw DimensionMismatch("lp_maximize: objective length != num_vars");
    }
    detail::Simplex s(p);
    Optimum out;
    if (auto cert = s.phase1()) {
        out.status = LPStatus::Infeasible;
        out.certificate = std::move(*cert);
        return out;
    }
    s.drive_out_artificials();

    // minimize -objective over structural columns; artificials stay out
    RVector cost(s.num_cols, 0);
    for (size_t j = 0; j < p.num_vars; ++j) {
        cost[s.var_cols[j].first] = -objective[j];
        if (s.var_cols[j].second >= 0) {
            cost[static_cast<size_t>(s.var_cols[j].second)] = objective[j];
        }
    }
    bool bounded = s.run(cost, [&](size_t col) { return !s.is_artificial(col); });
    if (!bounded) {
        out.status = LPStatus::Unbounded;
        return out;
    }
    out.status = LPStatus::Optimal;
    out.arg = s.extract_witness();
    out.value = dot(objective, out.arg);
    if (!satisfies(p, out.arg)) {
        throw std::logic_error("lp_maximize: optimum failed re-evaluation");
    }
    return out;
}

inline Optimum lp_minimize(const LPProblem& p, const RVector& objective) {
    RVector neg(objective.size());
    for (size_t i = 0; i < objective.size(); ++i) {
        neg[i] = -objective[i];
    }
    Optimum out = lp_maximize(p, neg);
    out.value = -out.value;
    return out;
}

}  // namespace sopt
