#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sccube {

/// Boolean polynomial in algebraic normal form over at most 32 variables.
/// A monomial is the mask of its variables; mask 0 is the constant 1.
class AnfPoly {
public:
    AnfPoly() = default;
    AnfPoly(int nvars, std::vector<std::uint32_t> monomials);

    /// Up to `terms` random monomials of degree <= max_degree (duplicates cancel).
    static AnfPoly random(int nvars, int max_degree, int terms, std::mt19937_64& rng);

    int nvars() const { return nvars_; }
    const std::vector<std::uint32_t>& monomials() const { return monos_; }

    /// Bit v of `assignment` is variable v.
    bool eval(std::uint32_t assignment) const;
    /// Coefficient of the cube monomial: every monomial divisible by the
    /// cube, with the cube variables removed.
    AnfPoly superpoly(std::uint32_t cube_mask) const;

    /// 1-based names, "x1x2x3 + x4 + 1"
    std::string to_string() const;

    friend bool operator==(const AnfPoly&, const AnfPoly&) = default;

private:
    void normalize();

    int nvars_ = 0;
    std::vector<std::uint32_t> monos_;  // sorted, unique
};

}  // namespace sccube
