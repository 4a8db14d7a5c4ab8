#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sccube/linear_poly.hpp"

namespace sccube {

/// Dense row-major GF(2) matrix; each row is packed into 64-bit words with
/// column c at bit (c % 64) of word (c / 64).
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols);

    /// One row per polynomial over 64 columns; column c is key bit c.
    static Gf2Matrix from_polys(std::span<const LinearPoly> polys);
    static Gf2Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * stride_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v);
    void flip(std::size_t r, std::size_t c) { bits_[r * stride_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

    /// row dst ^= row src
    void add_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);
    bool row_is_zero(std::size_t r) const;

    friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct RowReduction {
    Gf2Matrix reduced;  // reduced row-echelon form, zero rows last
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;  // strictly increasing
};

RowReduction row_reduce(Gf2Matrix m);

/// Greedy in-order maximal independent subset of the coefficient vectors.
std::vector<std::size_t> select_independent(std::span<const LinearPoly> equations);

/// Rank of the coefficient vectors (constants ignored).
std::size_t rank_of(std::span<const LinearPoly> equations);

struct Gf2System {
    Gf2Matrix matrix;
    std::vector<std::uint8_t> rhs;
};

class InconsistentSystem : public std::runtime_error {
public:
    explicit InconsistentSystem(std::size_t row)
        : std::runtime_error("inconsistent GF(2) system: reduced row " + std::to_string(row) + " reads 0 = 1"),
          row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Solution set of a consistent system in reduced form: each pivot variable
/// equals its rhs plus a combination of free variables.
struct Gf2Solution {
    std::size_t cols = 0;
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> free_cols;
    std::vector<std::uint8_t> pivot_values;  // value of each pivot with all free variables zero
    Gf2Matrix pivot_rows;                    // reduced rows (rank x cols)

    std::size_t rank() const { return pivot_cols.size(); }
    /// True when pivot i's row has no free-variable terms.
    bool pivot_is_exact(std::size_t i) const;
    /// Full assignment given values for free_cols (same order).
    std::vector<std::uint8_t> assign(std::span<const std::uint8_t> free_values) const;
};

/// Throws InconsistentSystem on a 0 = 1 row; std::invalid_argument on a
/// size mismatch.
Gf2Solution solve(const Gf2System& system);

/// Incremental basis of 64-bit vectors with rank tracking.
class Gf2Basis {
public:
    /// Returns true if v was independent of the basis so far.
    bool insert(std::uint64_t v);
    bool contains(std::uint64_t v) const { return reduce(v) == 0; }
    std::uint64_t reduce(std::uint64_t v) const;
    std::size_t rank() const { return rank_; }

private:
    std::uint64_t rows_[64]{};  // rows_[b] has leading bit b, or 0
    std::size_t rank_ = 0;
};

}  // namespace sccube
