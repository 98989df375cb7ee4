#pragma once

#include "equiloc/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace equiloc {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

/// Outcome of an exact linear solve.  kind == unique iff the kernel is
/// trivial and a particular solution exists; affine carries a particular
/// solution plus a basis of the full null space; none has neither.
struct LinearSolution {
    enum class Kind { unique, none, affine };
    Kind kind = Kind::none;
    RatVector particular;
    std::vector<RatVector> kernel_basis;
};

namespace detail {

inline std::size_t column_count(const RatMatrix& m) {
    if (m.empty()) return 0;
    std::size_t c = m.front().size();
    for (const auto& row : m)
        if (row.size() != c)
            throw std::invalid_argument("linalg: ragged matrix");
    return c;
}

/// In-place reduced row echelon form.  Pivot = first row with a nonzero
/// entry in the current column, so the result is deterministic.
/// Returns the pivot column indices in order.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = Rational(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

/// Exact Gauss-Jordan solve of matrix * x = rhs.  The matrix may be any
/// rectangular shape; rhs length must equal the row count.
inline LinearSolution solve_exact(const RatMatrix& matrix, const RatVector& rhs) {
    const std::size_t rows = matrix.size();
    const std::size_t cols = detail::column_count(matrix);
    if (rhs.size() != rows)
        throw std::invalid_argument("solve_exact: rhs length does not match row count");

    RatMatrix aug(rows, RatVector(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = matrix[i][j];
        aug[i][cols] = rhs[i];
    }
    std::vector<std::size_t> pivots = detail::rref(aug);

    LinearSolution out;
    if (!pivots.empty() && pivots.back() == cols) {
        out.kind = LinearSolution::Kind::none;
        return out;
    }

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    out.particular.assign(cols, Rational(0));
    for (std::size_t k = 0; k < pivots.size(); ++k)
        out.particular[pivots[k]] = aug[k][cols];

    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        RatVector v(cols, Rational(0));
        v[c] = Rational(1);
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = -aug[k][c];
        out.kernel_basis.push_back(std::move(v));
    }
    out.kind = out.kernel_basis.empty() ? LinearSolution::Kind::unique
                                        : LinearSolution::Kind::affine;
    return out;
}

/// Basis of {x : matrix * x = 0}.
inline std::vector<RatVector> kernel_basis(const RatMatrix& matrix) {
    const std::size_t rows = matrix.size();
    return solve_exact(matrix, RatVector(rows, Rational(0))).kernel_basis;
}

inline std::size_t rank(RatMatrix m) {
    detail::column_count(m);
    return detail::rref(m).size();
}

inline RatMatrix transpose(const RatMatrix& m) {
    const std::size_t cols = detail::column_count(m);
    RatMatrix t(cols, RatVector(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

/// Exact determinant of a square matrix by Gaussian elimination.
inline Rational det(RatMatrix m) {
    const std::size_t n = m.size();
    if (detail::column_count(m) != n)
        throw std::invalid_argument("det: matrix not square");
    Rational d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            d = -d;
        }
        d *= m[c][c];
        Rational inv = Rational(1) / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            Rational f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return d;
}

/// matrix * x, exact.
inline RatVector mat_vec(const RatMatrix& m, const RatVector& x) {
    const std::size_t cols = detail::column_count(m);
    if (x.size() != cols)
        throw std::invalid_argument("mat_vec: dimension mismatch");
    RatVector y(m.size(), Rational(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) y[i] += m[i][j] * x[j];
    return y;
}

} // namespace equiloc
