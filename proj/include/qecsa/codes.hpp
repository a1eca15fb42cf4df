#pragma once

// Structured code matrices over F_q: Cauchy-Vandermonde (CSA) blocks, their
// row-scaled variants (QCSA), generalized Reed-Solomon blocks, and the dual
// multiplier construction that makes a GRS prefix orthogonal to the dual GRS
// prefix. Also the erasure/MDS validator used throughout the test suites.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "gf.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace qecsa {

/// Evaluation points alpha_1..alpha_N and Cauchy poles f_1..f_L. All N+L
/// values must be pairwise distinct, which requires q >= N+L.
struct CodePoints {
    std::vector<Fe> alpha;
    std::vector<Fe> f;

    CodePoints(std::vector<Fe> alpha_in, std::vector<Fe> f_in)
        : alpha(std::move(alpha_in)), f(std::move(f_in)) {
        if (alpha.empty())
            throw std::invalid_argument("CodePoints: no evaluation points");
        std::vector<Fe> all = alpha;
        all.insert(all.end(), f.begin(), f.end());
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (all[i].field() != all[0].field())
                throw std::invalid_argument("CodePoints: mixed field moduli");
            for (std::size_t j = i + 1; j < all.size(); ++j)
                if (all[i] == all[j])
                    throw std::invalid_argument(
                        "CodePoints: points not pairwise distinct (need q >= "
                        "N+L)");
        }
    }

    std::size_t n() const noexcept { return alpha.size(); }
    std::size_t l() const noexcept { return f.size(); }
    FieldSpec field() const noexcept { return alpha.front().field(); }

    /// Points with the first `l_use` poles only.
    CodePoints truncated(std::size_t l_use) const {
        if (l_use > f.size())
            throw std::invalid_argument("CodePoints::truncated: not enough poles");
        return CodePoints(alpha,
                          std::vector<Fe>(f.begin(), f.begin() + l_use));
    }
};

/// Default layout: alpha_n = n-1 and f_l = N+l-1 as field elements.
inline CodePoints default_code_points(const FieldSpec& field, std::size_t n,
                                      std::size_t l) {
    if (n + l > field.modulus())
        throw std::invalid_argument(
            "default_code_points: need q >= N+L, got q=" +
            std::to_string(field.modulus()) + ", N+L=" + std::to_string(n + l));
    std::vector<Fe> alpha, f;
    for (std::size_t i = 0; i < n; ++i) alpha.push_back(field.element(i));
    for (std::size_t i = 0; i < l; ++i) f.push_back(field.element(n + i));
    return CodePoints(std::move(alpha), std::move(f));
}

/// v_n = (u_n * prod_{i != n} (alpha_n - alpha_i))^{-1}. With these
/// multipliers, sum_n u_n v_n alpha_n^m vanishes for m <= N-2, which is the
/// identity behind the GRS prefix orthogonality used by the stabilizer block.
inline std::vector<Fe> dual_multipliers(const std::vector<Fe>& alpha,
                                        const std::vector<Fe>& u) {
    if (alpha.size() != u.size())
        throw std::invalid_argument("dual_multipliers: length mismatch");
    std::vector<Fe> v;
    v.reserve(alpha.size());
    for (std::size_t n = 0; n < alpha.size(); ++n) {
        if (u[n].is_zero())
            throw std::invalid_argument("dual_multipliers: zero multiplier");
        Fe prod = u[n];
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (i == n) continue;
            prod *= alpha[n] - alpha[i];
        }
        v.push_back(prod.inv());
    }
    return v;
}

/// A pair (u, v) of nonzero row multipliers where v is dual to u.
struct Multipliers {
    std::vector<Fe> u;
    std::vector<Fe> v;

    static Multipliers dual_of(const std::vector<Fe>& alpha,
                               std::vector<Fe> u) {
        Multipliers m{std::move(u), {}};
        m.v = dual_multipliers(alpha, m.u);
        return m;
    }

    static Multipliers all_ones(const FieldSpec& field,
                                const std::vector<Fe>& alpha) {
        return dual_of(alpha, std::vector<Fe>(alpha.size(), field.one()));
    }
};

/// N x (L + vdm_cols) Cauchy-Vandermonde matrix: entry (n, l) = 1/(f_l -
/// alpha_n) on the Cauchy block, then 1, alpha_n, ..., alpha_n^(vdm_cols-1).
inline Mat csa_matrix(const CodePoints& points, std::size_t vdm_cols) {
    const std::size_t n = points.n();
    const std::size_t l = points.l();
    Mat out(points.field(), n, l + vdm_cols);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < l; ++j)
            out(i, j) = (points.f[j] - points.alpha[i]).inv();
        for (std::size_t j = 0; j < vdm_cols; ++j)
            out(i, l + j) = points.alpha[i].pow(j);
    }
    return out;
}

/// N x k generalized Reed-Solomon block: entry (n, j) = beta_n * alpha_n^j.
inline Mat grs_matrix(const std::vector<Fe>& alpha,
                      const std::vector<Fe>& beta, std::size_t k) {
    if (alpha.size() != beta.size())
        throw std::invalid_argument("grs_matrix: length mismatch");
    if (k > alpha.size())
        throw std::invalid_argument("grs_matrix: more columns than rows");
    for (const Fe& b : beta)
        if (b.is_zero())
            throw std::invalid_argument("grs_matrix: zero multiplier");
    Mat out(alpha.front().field(), alpha.size(), k);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
            out(i, j) = beta[i] * alpha[i].pow(j);
    return out;
}

/// Diag(beta) * CSA — the row-scaled Cauchy-Vandermonde matrix whose left
/// block is the scaled Cauchy part and whose right block is a GRS matrix.
inline Mat qcsa_matrix(const CodePoints& points, const std::vector<Fe>& beta,
                       std::size_t vdm_cols) {
    if (beta.size() != points.n())
        throw std::invalid_argument("qcsa_matrix: beta length mismatch");
    for (const Fe& b : beta)
        if (b.is_zero())
            throw std::invalid_argument("qcsa_matrix: zero multiplier");
    return diag(beta) * csa_matrix(points, vdm_cols);
}

enum class CheckMode { exhaustive, sampled };

/// Result of an every-submatrix invertibility sweep.
struct MdsReport {
    bool ok = true;
    CheckMode mode = CheckMode::exhaustive;
    std::uint64_t checked = 0;
    std::vector<std::size_t> witness_rows; // offending row set, empty when ok
};

struct MdsOptions {
    std::size_t max_exhaustive_n = 16; // above this, sample subsets instead
    std::uint64_t sample_trials = 2000;
    std::uint64_t sample_seed = 1;
};

/// Checks that every (N-e)-row submatrix of m (which must have N-e columns)
/// is invertible, i.e. that the column span tolerates any e erased rows.
inline MdsReport check_mds_erasure(const Mat& m, std::size_t e,
                                   const MdsOptions& opts = {}) {
    const std::size_t n = m.rows();
    if (e > n || m.cols() != n - e)
        throw std::invalid_argument(
            "check_mds_erasure: matrix must have N-e columns");
    const std::size_t k = n - e;
    MdsReport report;
    if (k == 0) return report;

    auto test_subset = [&](const std::vector<std::size_t>& rows_sel) {
        ++report.checked;
        if (!try_inverse(take_rows(m, rows_sel))) {
            report.ok = false;
            report.witness_rows = rows_sel;
            return false;
        }
        return true;
    };

    if (n <= opts.max_exhaustive_n) {
        report.mode = CheckMode::exhaustive;
        for_each_combination(n, k, test_subset);
    } else {
        report.mode = CheckMode::sampled;
        Rng rng(opts.sample_seed);
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        for (std::uint64_t t = 0; t < opts.sample_trials; ++t) {
            // partial Fisher-Yates draw of k distinct rows
            for (std::size_t i = 0; i < k; ++i)
                std::swap(all[i], all[i + rng.below(n - i)]);
            std::vector<std::size_t> pick(all.begin(), all.begin() + k);
            std::sort(pick.begin(), pick.end());
            if (!test_subset(pick)) break;
        }
    }
    return report;
}

} // namespace qecsa
