#pragma once

// Dense matrices over F_q with exact Gaussian elimination. Pivoting takes the
// first nonzero entry in the column; over an exact field any nonzero pivot is
// as good as any other, and this keeps elimination deterministic.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf.hpp"

namespace qecsa {

/// Thrown when a matrix expected to be invertible is not. Carries the rank
/// the elimination reached before stalling.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::size_t rank_attained, std::size_t dim)
        : std::runtime_error("singular matrix: rank " +
                             std::to_string(rank_attained) + " of " +
                             std::to_string(dim)),
          rank_attained_(rank_attained) {}

    std::size_t rank_attained() const noexcept { return rank_attained_; }

private:
    std::size_t rank_attained_;
};

/// Row-major dense matrix; all entries share one field.
class Mat {
public:
    Mat(const FieldSpec& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols),
          entries_(rows * cols, field.zero()) {}

    /// Build from unsigned integer literals, reduced mod q.
    static Mat from_rows(
        const FieldSpec& field,
        std::initializer_list<std::initializer_list<std::uint64_t>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Mat m(field, r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c)
                throw std::invalid_argument("Mat::from_rows: ragged rows");
            std::size_t j = 0;
            for (std::uint64_t v : row) m(i, j++) = field.element(v);
            ++i;
        }
        return m;
    }

    static Mat identity(const FieldSpec& field, std::size_t n) {
        Mat m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const FieldSpec& field() const noexcept { return field_; }

    Fe& operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Fe& operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    Fe at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("Mat::at: index out of range");
        return entries_[r * cols_ + c];
    }

    bool is_zero() const {
        for (const Fe& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    std::vector<Fe> row(std::size_t r) const {
        std::vector<Fe> out;
        out.reserve(cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.push_back((*this)(r, j));
        return out;
    }

    std::vector<Fe> col(std::size_t c) const {
        std::vector<Fe> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, c));
        return out;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               a.field_ == b.field_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

private:
    FieldSpec field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Fe> entries_;
};

namespace detail {

inline void check_same_field(const Mat& a, const Mat& b, const char* op) {
    if (a.field() != b.field())
        throw std::invalid_argument(std::string(op) + ": mixed field moduli");
}

// In-place reduction to row echelon form (unit pivots, eliminated below and
// above). Returns the pivot columns in order.
inline std::vector<std::size_t> echelonize(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t found = pivot_row;
        while (found < m.rows() && m(found, col).is_zero()) ++found;
        if (found == m.rows()) continue;
        if (found != pivot_row)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(pivot_row, j), m(found, j));
        const Fe scale = m(pivot_row, col).inv();
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(pivot_row, j) *= scale;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == pivot_row || m(i, col).is_zero()) continue;
            const Fe factor = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) -= factor * m(pivot_row, j);
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return pivots;
}

} // namespace detail

inline Mat operator*(const Mat& a, const Mat& b) {
    detail::check_same_field(a, b, "Mat::operator*");
    if (a.cols() != b.rows())
        throw std::invalid_argument("Mat::operator*: " +
                                    std::to_string(a.cols()) + " cols vs " +
                                    std::to_string(b.rows()) + " rows");
    Mat out(a.field(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Fe aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    return out;
}

inline Mat operator+(const Mat& a, const Mat& b) {
    detail::check_same_field(a, b, "Mat::operator+");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Mat::operator+: dimension mismatch");
    Mat out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
    return out;
}

inline Mat operator-(const Mat& a, const Mat& b) {
    detail::check_same_field(a, b, "Mat::operator-");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("Mat::operator-: dimension mismatch");
    Mat out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
    return out;
}

inline Mat transpose(const Mat& a) {
    Mat out(a.field(), a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline std::size_t rank(Mat a) {
    return detail::echelonize(a).size();
}

/// Inverse via elimination on [a | I]; nullopt when singular.
inline std::optional<Mat> try_inverse(const Mat& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("try_inverse: matrix not square");
    const std::size_t n = a.rows();
    Mat aug(a.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = a.field().one();
    }
    const auto pivots = detail::echelonize(aug);
    std::size_t r = 0;
    for (std::size_t p : pivots)
        if (p < n) ++r;
    if (r < n) return std::nullopt;
    Mat out(a.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

inline Mat inverse(const Mat& a) {
    auto inv = try_inverse(a);
    if (!inv) throw SingularMatrixError(rank(a), a.rows());
    return *inv;
}

/// Solves a x = b exactly for square invertible a.
inline Mat solve(const Mat& a, const Mat& b) {
    detail::check_same_field(a, b, "solve");
    if (a.rows() != a.cols())
        throw std::invalid_argument("solve: coefficient matrix not square");
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve: incompatible right-hand side");
    const std::size_t n = a.rows();
    Mat aug(a.field(), n, n + b.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
    }
    const auto pivots = detail::echelonize(aug);
    std::size_t r = 0;
    for (std::size_t p : pivots)
        if (p < n) ++r;
    if (r < n) throw SingularMatrixError(r, n);
    Mat out(a.field(), n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = aug(i, n + j);
    return out;
}

inline Mat submatrix(const Mat& a, const std::vector<std::size_t>& row_idx,
                     const std::vector<std::size_t>& col_idx) {
    Mat out(a.field(), row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        if (row_idx[i] >= a.rows())
            throw std::out_of_range("submatrix: row index out of range");
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            if (col_idx[j] >= a.cols())
                throw std::out_of_range("submatrix: column index out of range");
            out(i, j) = a(row_idx[i], col_idx[j]);
        }
    }
    return out;
}

inline Mat take_rows(const Mat& a, const std::vector<std::size_t>& row_idx) {
    std::vector<std::size_t> all_cols(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) all_cols[j] = j;
    return submatrix(a, row_idx, all_cols);
}

inline Mat take_cols(const Mat& a, const std::vector<std::size_t>& col_idx) {
    std::vector<std::size_t> all_rows(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) all_rows[i] = i;
    return submatrix(a, all_rows, col_idx);
}

inline Mat hstack(const std::vector<Mat>& parts) {
    if (parts.empty()) throw std::invalid_argument("hstack: no parts");
    std::size_t cols = 0;
    for (const Mat& p : parts) {
        detail::check_same_field(parts.front(), p, "hstack");
        if (p.rows() != parts.front().rows())
            throw std::invalid_argument("hstack: row count mismatch");
        cols += p.cols();
    }
    Mat out(parts.front().field(), parts.front().rows(), cols);
    std::size_t offset = 0;
    for (const Mat& p : parts) {
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j)
                out(i, offset + j) = p(i, j);
        offset += p.cols();
    }
    return out;
}

inline Mat vstack(const std::vector<Mat>& parts) {
    if (parts.empty()) throw std::invalid_argument("vstack: no parts");
    std::size_t rows = 0;
    for (const Mat& p : parts) {
        detail::check_same_field(parts.front(), p, "vstack");
        if (p.cols() != parts.front().cols())
            throw std::invalid_argument("vstack: column count mismatch");
        rows += p.rows();
    }
    Mat out(parts.front().field(), rows, parts.front().cols());
    std::size_t offset = 0;
    for (const Mat& p : parts) {
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j)
                out(offset + i, j) = p(i, j);
        offset += p.rows();
    }
    return out;
}

inline Mat block_diag(const std::vector<Mat>& parts) {
    if (parts.empty()) throw std::invalid_argument("block_diag: no parts");
    std::size_t rows = 0, cols = 0;
    for (const Mat& p : parts) {
        detail::check_same_field(parts.front(), p, "block_diag");
        rows += p.rows();
        cols += p.cols();
    }
    Mat out(parts.front().field(), rows, cols);
    std::size_t ro = 0, co = 0;
    for (const Mat& p : parts) {
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j)
                out(ro + i, co + j) = p(i, j);
        ro += p.rows();
        co += p.cols();
    }
    return out;
}

inline Mat diag(const std::vector<Fe>& values) {
    if (values.empty()) throw std::invalid_argument("diag: empty diagonal");
    Mat out(values.front().field(), values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out(i, i) = values[i];
    return out;
}

inline Mat col_vector(const std::vector<Fe>& values) {
    if (values.empty()) throw std::invalid_argument("col_vector: empty");
    Mat out(values.front().field(), values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) out(i, 0) = values[i];
    return out;
}

/// Matrix-vector product returning a plain vector.
inline std::vector<Fe> matvec(const Mat& a, const std::vector<Fe>& x) {
    if (a.cols() != x.size())
        throw std::invalid_argument("matvec: length mismatch");
    return (a * col_vector(x)).col(0);
}

} // namespace qecsa
