#include "sccube/anf.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sccube {

AnfPoly::AnfPoly(int nvars, std::vector<std::uint32_t> monomials) : nvars_(nvars), monos_(std::move(monomials)) {
    if (nvars < 0 || nvars > 32) throw std::invalid_argument("AnfPoly: at most 32 variables");
    const std::uint32_t limit = nvars == 32 ? ~0u : ((1u << nvars) - 1);
    for (auto m : monos_)
        if (m & ~limit) throw std::invalid_argument("AnfPoly: monomial uses an undeclared variable");
    normalize();
}

void AnfPoly::normalize() {
    // XOR semantics: pairs cancel
    std::sort(monos_.begin(), monos_.end());
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < monos_.size();) {
        std::size_t j = i;
        while (j < monos_.size() && monos_[j] == monos_[i]) ++j;
        if ((j - i) % 2) out.push_back(monos_[i]);
        i = j;
    }
    monos_ = std::move(out);
}

AnfPoly AnfPoly::random(int nvars, int max_degree, int terms, std::mt19937_64& rng) {
    std::vector<std::uint32_t> monos;
    std::uniform_int_distribution<int> deg(0, max_degree), var(0, nvars - 1);
    for (int t = 0; t < terms; ++t) {
        const int d = deg(rng);
        std::uint32_t m = 0;
        while (std::popcount(m) < std::min(d, nvars)) m |= 1u << var(rng);
        monos.push_back(m);
    }
    return AnfPoly(nvars, std::move(monos));
}

bool AnfPoly::eval(std::uint32_t assignment) const {
    bool acc = false;
    for (auto m : monos_) acc ^= (assignment & m) == m;
    return acc;
}

AnfPoly AnfPoly::superpoly(std::uint32_t cube_mask) const {
    std::vector<std::uint32_t> out;
    for (auto m : monos_)
        if ((m & cube_mask) == cube_mask) out.push_back(m & ~cube_mask);
    return AnfPoly(nvars_, std::move(out));
}

std::string AnfPoly::to_string() const {
    if (monos_.empty()) return "0";
    std::string s;
    // highest degree first reads closer to hand-written polynomials
    auto sorted = monos_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
    for (auto m : sorted) {
        if (!s.empty()) s += " + ";
        if (m == 0) {
            s += "1";
            continue;
        }
        for (int v = 0; v < nvars_; ++v)
            if (m & (1u << v)) s += "x" + std::to_string(v + 1);
    }
    return s;
}

}  // namespace sccube
