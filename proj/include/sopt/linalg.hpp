// Exact dense linear algebra over the rationals: rank and linear solve.
// Sizes here are desk scale (dozens of rows), so plain Gaussian elimination
// with exact arithmetic is the whole story.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sopt/rational.hpp"

namespace sopt {

struct RMatrix {
    std::vector<RVector> rows;

    RMatrix() = default;
    RMatrix(std::vector<RVector> r) : rows(std::move(r)) {
        for (const auto& row : rows) {
            if (row.size() != rows.front().size()) {
                throw DimensionMismatch("RMatrix: ragged rows");
            }
        }
    }

    size_t num_rows() const {
        return rows.size();
    }
    size_t num_cols() const {
        return rows.empty() ? 0 : rows.front().size();
    }

    static RMatrix identity(size_t n) {
        std::vector<RVector> rows(n, RVector(n, 0));
        for (size_t i = 0; i < n; ++i) {
            rows[i][i] = 1;
        }
        return RMatrix(std::move(rows));
    }
};

// Exact rank via row reduction.
inline size_t rank(RMatrix m) {
    size_t r = 0;
    size_t cols = m.num_cols();
    for (size_t col = 0; col < cols && r < m.num_rows(); ++col) {
        size_t pivot = r;
        while (pivot < m.num_rows() && m.rows[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == m.num_rows()) {
            continue;
        }
        std::swap(m.rows[r], m.rows[pivot]);
        for (size_t i = r + 1; i < m.num_rows(); ++i) {
            if (m.rows[i][col] == 0) {
                continue;
            }
            Rational f = m.rows[i][col] / m.rows[r][col];
            for (size_t j = col; j < cols; ++j) {
                m.rows[i][j] -= f * m.rows[r][j];
            }
        }
        ++r;
    }
    return r;
}

enum class SolveKind {
    None,          // inconsistent system
    Unique,        // exactly one solution
    Underdetermined,  // solution space of positive dimension
};

struct SolveResult {
    SolveKind kind = SolveKind::None;
    RVector solution;  // one solution when kind != None
};

// Solves A x = b exactly by Gauss-Jordan elimination.
inline SolveResult solve(const RMatrix& a, const RVector& b) {
    if (a.num_rows() != b.size()) {
        throw DimensionMismatch("solve: rhs length mismatch");
    }
    size_t n = a.num_cols();
    std::vector<RVector> aug = a.rows;
    for (size_t i = 0; i < aug.size(); ++i) {
        aug[i].push_back(b[i]);
    }

    std::vector<std::optional<size_t>> pivot_of_col(n);
    size_t r = 0;
    for (size_t col = 0; col < n && r < aug.size(); ++col) {
        size_t pivot = r;
        while (pivot < aug.size() && aug[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == aug.size()) {
            continue;
        }
        std::swap(aug[r], aug[pivot]);
        Rational inv = aug[r][col];
        for (size_t j = col; j <= n; ++j) {
            aug[r][j] /= inv;
        }
        for (size_t i = 0; i < aug.size(); ++i) {
            if (i == r || aug[i][col] == 0) {
                continue;
            }
            Rational f = aug[i][col];
            for (size_t j = col; j <= n; ++j) {
                aug[i][j] -= f * aug[r][j];
            }
        }
        pivot_of_col[col] = r;
        ++r;
    }

    for (size_t i = r; i < aug.size(); ++i) {
        if (aug[i][n] != 0) {
            return {SolveKind::None, {}};
        }
    }

    RVector x(n, 0);
    bool free_vars = false;
    for (size_t col = 0; col < n; ++col) {
        if (pivot_of_col[col]) {
            x[col] = aug[*pivot_of_col[col]][n];
        } else {
            free_vars = true;  // free variable pinned to 0 in the returned point
        }
    }
    return {free_vars ? SolveKind::Underdetermined : SolveKind::Unique, std::move(x)};
}

}  // namespace sopt
