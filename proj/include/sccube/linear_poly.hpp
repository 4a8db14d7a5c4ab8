#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "sccube/simeck.hpp"

namespace sccube {

/// Affine polynomial over GF(2) in the 64 key bits. `coeffs` uses the key
/// layout: key bit i is (coeffs >> (63 - i)) & 1, so evaluation is a masked
/// parity against the key value.
struct LinearPoly {
    bool constant = false;
    std::uint64_t coeffs = 0;

    static LinearPoly from_vars(const std::vector<int>& key_bits, bool constant = false);

    bool eval(std::uint64_t key) const { return constant ^ (std::popcount(coeffs & key) & 1); }
    bool is_constant() const { return coeffs == 0; }
    bool has_var(int i) const { return (coeffs & key_bit_mask(i)) != 0; }
    /// Key-bit indexes with nonzero coefficient, ascending.
    std::vector<int> variables() const;
    /// e.g. "1 + k3 + k11", "0"
    std::string to_string() const;

    friend bool operator==(const LinearPoly&, const LinearPoly&) = default;
};

}  // namespace sccube
