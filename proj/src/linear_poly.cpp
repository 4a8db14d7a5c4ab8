#include "sccube/linear_poly.hpp"

#include <stdexcept>

namespace sccube {

LinearPoly LinearPoly::from_vars(const std::vector<int>& key_bits, bool constant) {
    LinearPoly p{constant, 0};
    for (int i : key_bits) {
        if (i < 0 || i >= kKeyBits) throw std::out_of_range("key bit index out of range");
        p.coeffs ^= key_bit_mask(i);
    }
    return p;
}

std::vector<int> LinearPoly::variables() const {
    std::vector<int> out;
    for (int i = 0; i < kKeyBits; ++i)
        if (has_var(i)) out.push_back(i);
    return out;
}

std::string LinearPoly::to_string() const {
    std::string s = constant ? "1" : "";
    for (int i : variables()) {
        if (!s.empty()) s += " + ";
        s += "k" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

}  // namespace sccube
