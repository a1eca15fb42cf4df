#pragma once

// Shared helpers for the unit tests. The determinant oracle is deliberately
// a plain cofactor expansion so rank/inverse checks do not depend on the
// elimination code path they are checking.

#include <cstdint>
#include <vector>

#include "qecsa/gf.hpp"
#include "qecsa/linalg.hpp"
#include "qecsa/rng.hpp"

namespace qecsa::testing {

inline Fe det_oracle(const Mat& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("det_oracle: not square");
    if (n == 0) return m.field().one();
    if (n == 1) return m(0, 0);
    Fe acc = m.field().zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        std::vector<std::size_t> keep_rows, keep_cols;
        for (std::size_t r = 1; r < n; ++r) keep_rows.push_back(r);
        for (std::size_t c = 0; c < n; ++c)
            if (c != j) keep_cols.push_back(c);
        const Fe minor = det_oracle(submatrix(m, keep_rows, keep_cols));
        const Fe term = m(0, j) * minor;
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

inline Mat random_matrix(const FieldSpec& field, std::size_t rows,
                         std::size_t cols, Rng& rng) {
    Mat m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.element(field);
    return m;
}

/// Random invertible matrix: random elementary row operations applied to I.
inline Mat random_invertible(const FieldSpec& field, std::size_t n,
                             Rng& rng) {
    Mat m = Mat::identity(field, n);
    const std::size_t ops = 4 * n + 4;
    for (std::size_t step = 0; step < ops; ++step) {
        switch (rng.below(3)) {
            case 0: { // scale a row by a nonzero factor
                const std::size_t r = rng.below(n);
                const Fe c = rng.nonzero_element(field);
                for (std::size_t j = 0; j < n; ++j) m(r, j) *= c;
                break;
            }
            case 1: { // add a multiple of one row to another
                if (n < 2) break;
                const std::size_t src = rng.below(n);
                std::size_t dst = rng.below(n - 1);
                if (dst >= src) ++dst;
                const Fe c = rng.element(field);
                for (std::size_t j = 0; j < n; ++j)
                    m(dst, j) += c * m(src, j);
                break;
            }
            default: { // swap two rows
                if (n < 2) break;
                const std::size_t a = rng.below(n);
                std::size_t b = rng.below(n - 1);
                if (b >= a) ++b;
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(m(a, j), m(b, j));
                break;
            }
        }
    }
    return m;
}

} // namespace qecsa::testing
