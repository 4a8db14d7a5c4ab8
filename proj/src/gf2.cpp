#include "sccube/gf2.hpp"

#include <algorithm>
#include <bit>

namespace sccube {

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), bits_(rows * stride_, 0) {}

Gf2Matrix Gf2Matrix::from_polys(std::span<const LinearPoly> polys) {
    Gf2Matrix m(polys.size(), kKeyBits);
    for (std::size_t r = 0; r < polys.size(); ++r)
        for (int c : polys[r].variables()) m.set(r, static_cast<std::size_t>(c), true);
    return m;
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool v) {
    auto& w = bits_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
}

void Gf2Matrix::add_row(std::size_t dst, std::size_t src) {
    for (std::size_t w = 0; w < stride_; ++w) bits_[dst * stride_ + w] ^= bits_[src * stride_ + w];
}

void Gf2Matrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     bits_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

bool Gf2Matrix::row_is_zero(std::size_t r) const {
    for (std::size_t w = 0; w < stride_; ++w)
        if (bits_[r * stride_ + w]) return false;
    return true;
}

RowReduction row_reduce(Gf2Matrix m) {
    RowReduction out;
    std::size_t next = 0;
    for (std::size_t c = 0; c < m.cols() && next < m.rows(); ++c) {
        std::size_t p = next;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, next);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next && m.get(r, c)) m.add_row(r, next);
        out.pivot_cols.push_back(c);
        ++next;
    }
    out.rank = next;
    out.reduced = std::move(m);
    return out;
}

std::vector<std::size_t> select_independent(std::span<const LinearPoly> equations) {
    std::vector<std::size_t> picked;
    Gf2Basis basis;
    for (std::size_t i = 0; i < equations.size(); ++i)
        if (basis.insert(equations[i].coeffs)) picked.push_back(i);
    return picked;
}

std::size_t rank_of(std::span<const LinearPoly> equations) {
    Gf2Basis basis;
    for (const auto& e : equations) basis.insert(e.coeffs);
    return basis.rank();
}

bool Gf2Solution::pivot_is_exact(std::size_t i) const {
    for (std::size_t f : free_cols)
        if (pivot_rows.get(i, f)) return false;
    return true;
}

std::vector<std::uint8_t> Gf2Solution::assign(std::span<const std::uint8_t> free_values) const {
    if (free_values.size() != free_cols.size())
        throw std::invalid_argument("Gf2Solution::assign: wrong number of free values");
    std::vector<std::uint8_t> x(cols, 0);
    for (std::size_t j = 0; j < free_cols.size(); ++j) x[free_cols[j]] = free_values[j] & 1u;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        std::uint8_t v = pivot_values[i];
        for (std::size_t f : free_cols)
            if (pivot_rows.get(i, f)) v ^= x[f];
        x[pivot_cols[i]] = v;
    }
    return x;
}

Gf2Solution solve(const Gf2System& system) {
    const Gf2Matrix& a = system.matrix;
    if (system.rhs.size() != a.rows()) throw std::invalid_argument("solve: rhs length does not match rows");

    Gf2Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) aug.set(r, c, true);
        aug.set(r, a.cols(), system.rhs[r] & 1u);
    }
    RowReduction red = row_reduce(std::move(aug));

    Gf2Solution sol;
    sol.cols = a.cols();
    for (std::size_t i = 0; i < red.rank; ++i) {
        if (red.pivot_cols[i] == a.cols()) throw InconsistentSystem(i);
    }
    sol.pivot_cols = red.pivot_cols;
    sol.pivot_rows = Gf2Matrix(red.rank, a.cols());
    for (std::size_t i = 0; i < red.rank; ++i) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (red.reduced.get(i, c)) sol.pivot_rows.set(i, c, true);
        sol.pivot_values.push_back(red.reduced.get(i, a.cols()));
    }
    std::size_t p = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        if (p < sol.pivot_cols.size() && sol.pivot_cols[p] == c) {
            ++p;
            continue;
        }
        sol.free_cols.push_back(c);
    }
    return sol;
}

std::uint64_t Gf2Basis::reduce(std::uint64_t v) const {
    while (v) {
        const int b = 63 - std::countl_zero(v);
        if (!rows_[b]) break;
        v ^= rows_[b];
    }
    return v;
}

bool Gf2Basis::insert(std::uint64_t v) {
    v = reduce(v);
    if (!v) return false;
    rows_[63 - std::countl_zero(v)] = v;
    ++rank_;
    return true;
}

}  // namespace sccube
