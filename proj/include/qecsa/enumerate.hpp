#pragma once

// Small enumeration helpers shared by the code validators and the
// verification suites: k-subsets of [0, n), mixed-radix odometers, and
// overflow-checked powers for sizing enumerations before running them.

#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace qecsa {

/// q^k if it fits in uint64 and does not exceed `cap`, otherwise nullopt.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t q, std::size_t k,
                                                std::uint64_t cap) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (q != 0 && result > cap / q) return std::nullopt;
        result *= q;
        if (result > cap) return std::nullopt;
    }
    return result;
}

/// Calls fn(indices) for every size-k subset of {0, ..., n-1} in
/// lexicographic order. fn may return void, or bool where `false` stops the
/// enumeration early.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if constexpr (std::is_convertible_v<decltype(fn(idx)), bool>) {
            if (!fn(idx)) return;
        } else {
            fn(idx);
        }
        // advance to the next combination
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
        if (k == 0) return;
    }
}

/// Iterates all base-q digit vectors of length `digits`, starting from all
/// zeros. For each step after the first, reports which digit positions
/// changed (rolled over to 0 or incremented) via the `bumped` list so callers
/// can update incremental state. Returns after q^digits visits.
///
/// fn(digitvec, bumped) is called once per state including the initial
/// all-zero state (with an empty bumped list).
template <typename Fn>
void for_each_digit_vector(std::uint64_t q, std::size_t digits, Fn&& fn) {
    std::vector<std::uint64_t> d(digits, 0);
    std::vector<std::size_t> bumped;
    fn(std::as_const(d), std::as_const(bumped));
    if (digits == 0 || q < 2) return;
    for (;;) {
        bumped.clear();
        std::size_t pos = 0;
        for (;;) {
            ++d[pos];
            bumped.push_back(pos);
            if (d[pos] == q) {
                d[pos] = 0;
                ++pos;
                if (pos == digits) return; // wrapped all the way around
            } else {
                break;
            }
        }
        fn(std::as_const(d), std::as_const(bumped));
    }
}

} // namespace qecsa
