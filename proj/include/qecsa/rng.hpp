#pragma once

// Seedable deterministic randomness. Draws go through rejection sampling on
// raw mt19937_64 output rather than std::uniform_int_distribution, so a seed
// reproduces the same stream on every platform.

#include <cstdint>
#include <random>
#include <stdexcept>

#include "gf.hpp"

namespace qecsa {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform draw from [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound is 0");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold) return (r - threshold) % bound;
        }
    }

    Fe element(const FieldSpec& field) {
        return field.element(below(field.modulus()));
    }

    Fe nonzero_element(const FieldSpec& field) {
        return field.element(1 + below(field.modulus() - 1));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace qecsa
