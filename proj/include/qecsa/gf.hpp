#pragma once

// Exact arithmetic in prime fields F_q. FieldSpec validates the modulus once
// at construction; Fe values are canonical residues in [0, q) and carry their
// modulus, so mixing elements of different fields is caught at runtime.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qecsa {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % q);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
    std::uint64_t result = 1 % q;
    std::uint64_t base = a % q;
    while (e > 0) {
        if (e & 1) result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin; the witness set below is sufficient for all
// n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    constexpr std::uint64_t witnesses[] = {2,  3,  5,  7,  11, 13,
                                           17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (std::uint64_t p : witnesses) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : witnesses) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace detail

class Fe;

/// A validated prime modulus. Anything holding a FieldSpec may assume q is
/// prime without re-checking.
class FieldSpec {
public:
    explicit FieldSpec(std::uint64_t q) : q_(q) {
        if (!detail::is_prime_u64(q))
            throw std::invalid_argument("FieldSpec: modulus " +
                                        std::to_string(q) + " is not prime");
    }

    std::uint64_t modulus() const noexcept { return q_; }

    Fe element(std::uint64_t value) const;      // canonical residue of value
    Fe element_signed(std::int64_t value) const;
    Fe zero() const;
    Fe one() const;

    bool operator==(const FieldSpec& o) const noexcept { return q_ == o.q_; }
    bool operator!=(const FieldSpec& o) const noexcept { return q_ != o.q_; }

private:
    friend class Fe;
    struct trusted_tag {};
    FieldSpec(std::uint64_t q, trusted_tag) noexcept : q_(q) {}

    std::uint64_t q_;
};

/// Field element: canonical residue in [0, q). Immutable value type.
class Fe {
public:
    std::uint64_t value() const noexcept { return v_; }
    std::uint64_t modulus() const noexcept { return q_; }
    FieldSpec field() const noexcept {
        return FieldSpec(q_, FieldSpec::trusted_tag{});
    }
    bool is_zero() const noexcept { return v_ == 0; }

    friend Fe operator+(Fe a, Fe b) {
        check_same_field(a, b);
        // overflow-safe: both operands are < q
        std::uint64_t r = (a.v_ >= a.q_ - b.v_ && b.v_ != 0)
                              ? a.v_ - (a.q_ - b.v_)
                              : a.v_ + b.v_;
        return Fe(r, a.q_);
    }

    friend Fe operator-(Fe a, Fe b) {
        check_same_field(a, b);
        return Fe(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + (a.q_ - b.v_), a.q_);
    }

    Fe operator-() const { return Fe(v_ == 0 ? 0 : q_ - v_, q_); }

    friend Fe operator*(Fe a, Fe b) {
        check_same_field(a, b);
        return Fe(detail::mul_mod(a.v_, b.v_, a.q_), a.q_);
    }

    Fe& operator+=(Fe b) { return *this = *this + b; }
    Fe& operator-=(Fe b) { return *this = *this - b; }
    Fe& operator*=(Fe b) { return *this = *this * b; }

    /// a^e by square-and-multiply; pow(x, 0) == 1 for all x, including 0.
    Fe pow(std::uint64_t e) const { return Fe(detail::pow_mod(v_, e, q_), q_); }

    /// Multiplicative inverse via extended Euclid. (Kept independent of
    /// pow(q-2) so the two routes can cross-check each other.)
    Fe inv() const {
        if (v_ == 0) throw std::domain_error("Fe::inv: inverse of zero");
        __int128 t = 0, new_t = 1;
        __int128 r = static_cast<__int128>(q_), new_r = static_cast<__int128>(v_);
        while (new_r != 0) {
            __int128 quot = r / new_r;
            __int128 tmp = t - quot * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - quot * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0) t += static_cast<__int128>(q_);
        return Fe(static_cast<std::uint64_t>(t), q_);
    }

    friend Fe operator/(Fe a, Fe b) { return a * b.inv(); }

    friend bool operator==(Fe a, Fe b) noexcept {
        return a.v_ == b.v_ && a.q_ == b.q_;
    }
    friend bool operator!=(Fe a, Fe b) noexcept { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, Fe a) {
        return os << a.v_;
    }

private:
    friend class FieldSpec;
    Fe(std::uint64_t v, std::uint64_t q) noexcept : v_(v), q_(q) {}

    static void check_same_field(Fe a, Fe b) {
        if (a.q_ != b.q_)
            throw std::invalid_argument(
                "Fe: mixed moduli " + std::to_string(a.q_) + " and " +
                std::to_string(b.q_));
    }

    std::uint64_t v_;
    std::uint64_t q_;
};

inline Fe FieldSpec::element(std::uint64_t value) const {
    return Fe(value % q_, q_);
}

inline Fe FieldSpec::element_signed(std::int64_t value) const {
    std::int64_t r = value % static_cast<std::int64_t>(q_);
    if (r < 0) r += static_cast<std::int64_t>(q_);
    return Fe(static_cast<std::uint64_t>(r), q_);
}

inline Fe FieldSpec::zero() const { return Fe(0, q_); }
inline Fe FieldSpec::one() const { return Fe(1 % q_, q_); }

inline Fe inv(Fe a) { return a.inv(); }
inline Fe pow(Fe a, std::uint64_t e) { return a.pow(e); }

} // namespace qecsa
