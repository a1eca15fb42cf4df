#pragma once

// The N-sum box abstraction: an entanglement-assisted MAC with N transmitters
// modeled purely as the linear map y = M x over F_q, where
// M = [0 I_N] [G H]^{-1}. G must be strongly self-orthogonal under the
// symplectic form and [G H] must have full rank 2N. Nothing here touches
// quantum states; the transfer function is the whole interface.

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

/// 2N x 2N symplectic form J = [[0, I], [-I, 0]].
inline Mat symplectic_form(std::size_t n, const FieldSpec& field) {
    Mat j(field, 2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, n + i) = field.one();
        j(n + i, i) = -field.one();
    }
    return j;
}

/// First violation of g^T J g = 0, as (row, col, value); nullopt when g is
/// strongly self-orthogonal.
struct SsoViolation {
    std::size_t row;
    std::size_t col;
    Fe value;
};

inline std::optional<SsoViolation> sso_violation(const Mat& g) {
    if (g.rows() % 2 != 0)
        throw std::invalid_argument("sso_violation: row count must be 2N");
    const Mat gram =
        transpose(g) * symplectic_form(g.rows() / 2, g.field()) * g;
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j)
            if (!gram(i, j).is_zero())
                return SsoViolation{i, j, gram(i, j)};
    return std::nullopt;
}

inline bool is_sso(const Mat& g) { return !sso_violation(g).has_value(); }

/// Thrown when a (G, H) pair does not define a valid box. Carries the
/// violated condition and a numeric witness.
class BoxValidationError : public std::runtime_error {
public:
    BoxValidationError(std::string condition, std::string witness)
        : std::runtime_error("invalid N-sum box: " + condition + " (" +
                             witness + ")"),
          condition_(std::move(condition)), witness_(std::move(witness)) {}

    const std::string& condition() const noexcept { return condition_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string condition_;
    std::string witness_;
};

/// A validated (G, H) pair with the cached transfer matrix
/// M = [0 I_N] [G H]^{-1}. Satisfies M G = 0 and M H = I_N, so the output
/// depends on the input only through its H-coordinates.
class NSumBoxSpec {
public:
    std::size_t n() const noexcept { return n_; }
    const Mat& g() const noexcept { return g_; }
    const Mat& h() const noexcept { return h_; }
    const Mat& transfer() const noexcept { return m_; }

    /// y = M x for a length-2N input.
    std::vector<Fe> apply(const std::vector<Fe>& x) const {
        if (x.size() != 2 * n_)
            throw std::invalid_argument(
                "NSumBoxSpec::apply: input must have length 2N");
        return matvec(m_, x);
    }

    friend NSumBoxSpec build_box(const Mat& g, const Mat& h);

private:
    NSumBoxSpec(std::size_t n, Mat g, Mat h, Mat m)
        : n_(n), g_(std::move(g)), h_(std::move(h)), m_(std::move(m)) {}

    std::size_t n_;
    Mat g_;
    Mat h_;
    Mat m_;
};

inline NSumBoxSpec build_box(const Mat& g, const Mat& h) {
    if (g.rows() == 0 || g.rows() % 2 != 0 || g.cols() != g.rows() / 2)
        throw std::invalid_argument("build_box: G must be 2N x N");
    if (h.rows() != g.rows() || h.cols() != g.cols())
        throw std::invalid_argument("build_box: H must be 2N x N");
    detail::check_same_field(g, h, "build_box");
    const std::size_t n = g.cols();

    if (auto bad = sso_violation(g))
        throw BoxValidationError(
            "stabilizer side not strongly self-orthogonal",
            "G^T J G entry (" + std::to_string(bad->row) + "," +
                std::to_string(bad->col) + ") = " +
                std::to_string(bad->value.value()));

    const Mat gh = hstack({g, h});
    auto gh_inv = try_inverse(gh);
    if (!gh_inv)
        throw BoxValidationError(
            "G/H not complementary",
            "rank([G H]) = " + std::to_string(rank(gh)) + " < " +
                std::to_string(2 * n));

    // transfer matrix: bottom N rows of [G H]^{-1}
    std::vector<std::size_t> bottom(n);
    for (std::size_t i = 0; i < n; ++i) bottom[i] = n + i;
    Mat m = take_rows(*gh_inv, bottom);
    return NSumBoxSpec(n, g, h, std::move(m));
}

/// Symplectic weight: number of transmitter slots n with
/// (c_n, c_{n+N}) != (0, 0).
inline std::size_t swt(const std::vector<Fe>& c) {
    if (c.size() % 2 != 0)
        throw std::invalid_argument("swt: vector length must be even");
    const std::size_t n = c.size() / 2;
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!c[i].is_zero() || !c[i + n].is_zero()) ++w;
    return w;
}

/// Thrown when an exhaustive enumeration would exceed its state cap.
class EnumerationCapExceeded : public std::runtime_error {
public:
    EnumerationCapExceeded(std::uint64_t cap, const std::string& what_space)
        : std::runtime_error("enumeration over " + what_space +
                             " exceeds cap " + std::to_string(cap) +
                             "; use the sampled variant for a "
                             "lower-confidence estimate") {}
};

constexpr std::uint64_t kDefaultEnumCap = 10'000'000;

/// Minimum symplectic weight over all nonzero F_q-combinations of the
/// columns of m, by exhaustive enumeration of the q^cols coefficient
/// vectors. Throws EnumerationCapExceeded when q^cols > cap.
inline std::size_t min_swt_colspan(const Mat& m,
                                   std::uint64_t cap = kDefaultEnumCap) {
    if (m.rows() % 2 != 0)
        throw std::invalid_argument("min_swt_colspan: row count must be even");
    const std::uint64_t q = m.field().modulus();
    if (!checked_pow(q, m.cols(), cap))
        throw EnumerationCapExceeded(
            cap, std::to_string(q) + "^" + std::to_string(m.cols()));

    std::size_t best = m.rows() / 2 + 1;
    std::vector<Fe> combo(m.rows(), m.field().zero());
    // each odometer bump adds its column once: the rolled digit goes from
    // q-1 back to 0, and (q-1)c + c = qc = 0 closes the cycle
    for_each_digit_vector(q, m.cols(), [&](const std::vector<std::uint64_t>& d,
                                           const std::vector<std::size_t>& bumped) {
        for (std::size_t colidx : bumped)
            for (std::size_t i = 0; i < m.rows(); ++i)
                combo[i] += m(i, colidx);
        if (bumped.empty()) return; // all-zero coefficients
        bool nonzero_coeff = false;
        for (std::uint64_t digit : d)
            if (digit != 0) {
                nonzero_coeff = true;
                break;
            }
        if (!nonzero_coeff) return;
        const std::size_t w = swt(combo);
        if (w < best) best = w;
    });
    return best;
}

/// Sampled variant: an upper bound on the true minimum from `trials` random
/// nonzero combinations. Advisory only.
inline std::size_t min_swt_colspan_sampled(const Mat& m, std::uint64_t trials,
                                           Rng& rng) {
    if (m.rows() % 2 != 0)
        throw std::invalid_argument(
            "min_swt_colspan_sampled: row count must be even");
    std::size_t best = m.rows() / 2 + 1;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<Fe> coeffs;
        bool any = false;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            coeffs.push_back(rng.element(m.field()));
            any = any || !coeffs.back().is_zero();
        }
        if (!any) {
            if (m.cols() == 0) break;
            coeffs[rng.below(m.cols())] = m.field().one();
        }
        best = std::min(best, swt(matvec(m, coeffs)));
    }
    return best;
}

/// Maximum symplectic weight over the nonzero column span, exhaustively.
inline std::size_t max_swt_colspan(const Mat& m,
                                   std::uint64_t cap = kDefaultEnumCap) {
    if (m.rows() % 2 != 0)
        throw std::invalid_argument("max_swt_colspan: row count must be even");
    const std::uint64_t q = m.field().modulus();
    if (!checked_pow(q, m.cols(), cap))
        throw EnumerationCapExceeded(
            cap, std::to_string(q) + "^" + std::to_string(m.cols()));
    std::size_t best = 0;
    std::vector<Fe> combo(m.rows(), m.field().zero());
    for_each_digit_vector(q, m.cols(), [&](const std::vector<std::uint64_t>& d,
                                           const std::vector<std::size_t>& bumped) {
        for (std::size_t colidx : bumped)
            for (std::size_t i = 0; i < m.rows(); ++i)
                combo[i] += m(i, colidx);
        bool nonzero_coeff = false;
        for (std::uint64_t digit : d)
            if (digit != 0) {
                nonzero_coeff = true;
                break;
            }
        if (!nonzero_coeff) return;
        best = std::max(best, swt(combo));
    });
    return best;
}

} // namespace qecsa
