#pragma once

// Cube summation, BLR linearity testing, linear superpoly reconstruction and
// randomized maxterm search over a keyed one-bit oracle.
//
// An oracle is any callable `bool(Block32 pt, std::uint64_t key)` that is
// safe to call concurrently. The engine only ever varies plaintext bits on
// the cube; the key is the polynomial's secret input.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sccube/gf2.hpp"
#include "sccube/leakage.hpp"
#include "sccube/linear_poly.hpp"
#include "sccube/simeck.hpp"

namespace sccube {

template <class F>
concept KeyedBitOracle = std::predicate<const F&, Block32, std::uint64_t>;

using KeyedOracle = std::function<bool(Block32, std::uint64_t)>;

/// Sorted set of distinct plaintext bit indexes (MSB = 0).
class Cube {
public:
    Cube() = default;
    /// Throws std::invalid_argument for an empty set, duplicates or indexes
    /// outside [0, 32).
    explicit Cube(std::vector<int> indexes);

    const std::vector<int>& indexes() const { return indexes_; }
    std::size_t size() const { return indexes_.size(); }
    Block32 mask() const { return mask_; }
    bool contains(int i) const { return (mask_ & block_bit_mask(i)) != 0; }
    /// "0,1,2,5"
    std::string to_string() const;

    friend bool operator==(const Cube& a, const Cube& b) { return a.mask_ == b.mask_; }
    friend auto operator<=>(const Cube& a, const Cube& b) { return a.indexes_ <=> b.indexes_; }

private:
    std::vector<int> indexes_;
    Block32 mask_ = 0;
};

/// Plaintext template with every non-cube position set to `value`.
inline Block32 fixed_pattern(const Cube& cube, bool value) { return value ? ~cube.mask() : Block32{0}; }

struct Maxterm {
    Cube cube;
    LinearPoly superpoly;
    Block32 fixed_bits = 0;  // values at non-cube positions; cube positions ignored

    friend bool operator==(const Maxterm&, const Maxterm&) = default;
};

enum class Linearity : std::uint8_t { Linear, Nonlinear, Constant };

const char* to_string(Linearity l);

struct BlrVerdict {
    Linearity kind = Linearity::Linear;
    int trial_count = 0;
};

struct SearchConfig {
    std::vector<int> cube_sizes{6, 8};
    LeakageSpec leak{};
    int blr_trials = 300;
    std::uint64_t candidate_budget = 10000;
    std::uint64_t rng_seed = 0;
    std::size_t target_rank = 32;
    bool fixed_bit_value = false;
    int constant_probes = 8;
    int verify_probes = 100;
    unsigned threads = 1;

    /// Throws std::invalid_argument if the configuration is unusable.
    void validate() const;
};

struct SearchStats {
    std::uint64_t candidates_tried = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t constant_screened = 0;
    std::uint64_t blr_nonlinear = 0;
    std::uint64_t blr_constant = 0;
    std::uint64_t reconstruct_rejected = 0;
    std::uint64_t verify_rejected = 0;
    std::uint64_t cube_sums = 0;
};

struct SearchResult {
    std::vector<Maxterm> maxterms;
    std::size_t rank = 0;
    bool reached_target = false;
    SearchStats stats;
    std::string diagnostic;  // empty unless the search stopped short of target_rank
};

/// XOR of the oracle over all 2^|cube| assignments of the cube bits, with
/// the non-cube bits taken from `fixed`.
template <KeyedBitOracle Oracle>
bool cube_sum(const Oracle& oracle, const Cube& cube, Block32 fixed, std::uint64_t key) {
    const Block32 m = cube.mask();
    const Block32 base = fixed & ~m;
    bool acc = false;
    Block32 sub = 0;
    do {
        acc ^= static_cast<bool>(oracle(base | sub, key));
        sub = (sub - m) & m;
    } while (sub != 0);
    return acc;
}

/// BLR test f(0) ^ f(x) ^ f(y) == f(x ^ y) on the cube sum as a function of
/// the key, for `trials` random pairs. Stops at the first violated pair.
template <KeyedBitOracle Oracle, class Rng>
BlrVerdict blr_test(const Oracle& oracle, const Cube& cube, Block32 fixed, int trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("blr_test: trials must be >= 1");
    const bool f0 = cube_sum(oracle, cube, fixed, 0);
    bool all_equal = true;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t x = rng(), y = rng();
        const bool fx = cube_sum(oracle, cube, fixed, x);
        const bool fy = cube_sum(oracle, cube, fixed, y);
        const bool fxy = cube_sum(oracle, cube, fixed, x ^ y);
        if ((f0 ^ fx ^ fy) != fxy) return {Linearity::Nonlinear, t + 1};
        all_equal = all_equal && fx == f0 && fy == f0 && fxy == f0;
    }
    if (all_equal) {
        for (int i = 0; i < kKeyBits; ++i)
            if (cube_sum(oracle, cube, fixed, key_bit_mask(i)) != f0) return {Linearity::Linear, trials};
        return {Linearity::Constant, trials};
    }
    return {Linearity::Linear, trials};
}

/// Affine interpolation from the zero key and the 64 unit keys.
template <KeyedBitOracle Oracle>
LinearPoly interpolate_superpoly(const Oracle& oracle, const Cube& cube, Block32 fixed) {
    LinearPoly p;
    p.constant = cube_sum(oracle, cube, fixed, 0);
    for (int i = 0; i < kKeyBits; ++i)
        if (cube_sum(oracle, cube, fixed, key_bit_mask(i)) != p.constant) p.coeffs |= key_bit_mask(i);
    return p;
}

/// True if the polynomial predicts the cube sum on `probes` random keys.
template <KeyedBitOracle Oracle, class Rng>
bool verify_superpoly(const Oracle& oracle, const Cube& cube, Block32 fixed, const LinearPoly& p, int probes,
                      Rng& rng) {
    for (int i = 0; i < probes; ++i) {
        const std::uint64_t k = rng();
        if (cube_sum(oracle, cube, fixed, k) != p.eval(k)) return false;
    }
    return true;
}

/// Interpolates the superpoly and checks it on `post_check_probes` random
/// keys. Constant superpolys and failed post-checks yield nullopt.
template <KeyedBitOracle Oracle, class Rng>
std::optional<LinearPoly> superpoly_reconstruct(const Oracle& oracle, const Cube& cube, Block32 fixed, Rng& rng,
                                                int post_check_probes = 1) {
    LinearPoly p = interpolate_superpoly(oracle, cube, fixed);
    if (p.is_constant()) return std::nullopt;
    if (!verify_superpoly(oracle, cube, fixed, p, post_check_probes, rng)) return std::nullopt;
    return p;
}

namespace detail {

std::uint64_t candidate_seed(std::uint64_t seed, std::uint64_t index);
Cube sample_cube(const std::vector<int>& sizes, std::mt19937_64& rng);

enum class Outcome : std::uint8_t { Accepted, ConstantScreen, Nonlinear, Constant, ReconstructRejected, VerifyRejected };

struct CandidateResult {
    Cube cube;
    Outcome outcome = Outcome::ConstantScreen;
    LinearPoly superpoly;
    std::uint64_t cube_sums = 0;
};

template <KeyedBitOracle Oracle>
CandidateResult evaluate_candidate(const Oracle& oracle, const SearchConfig& cfg, std::uint64_t index) {
    std::mt19937_64 rng(candidate_seed(cfg.rng_seed, index));
    CandidateResult res;
    res.cube = sample_cube(cfg.cube_sizes, rng);
    const Block32 fixed = fixed_pattern(res.cube, cfg.fixed_bit_value);
    std::uint64_t sums = 0;
    auto sum = [&](std::uint64_t key) {
        ++sums;
        return cube_sum(oracle, res.cube, fixed, key);
    };

    const bool first = sum(rng());
    bool varies = false;
    for (int i = 1; i < cfg.constant_probes && !varies; ++i) varies = sum(rng()) != first;
    if (!varies) {
        res.outcome = Outcome::ConstantScreen;
        res.cube_sums = sums;
        return res;
    }

    const BlrVerdict v = blr_test(oracle, res.cube, fixed, cfg.blr_trials, rng);
    sums += 1 + 3 * static_cast<std::uint64_t>(v.trial_count);
    if (v.kind != Linearity::Linear) {
        res.outcome = v.kind == Linearity::Nonlinear ? Outcome::Nonlinear : Outcome::Constant;
        if (v.kind == Linearity::Constant) sums += kKeyBits;
        res.cube_sums = sums;
        return res;
    }

    const LinearPoly p = interpolate_superpoly(oracle, res.cube, fixed);
    sums += 1 + kKeyBits;
    if (p.is_constant()) {
        res.outcome = Outcome::ReconstructRejected;
    } else if (!verify_superpoly(oracle, res.cube, fixed, p, cfg.verify_probes, rng)) {
        sums += static_cast<std::uint64_t>(cfg.verify_probes);
        res.outcome = Outcome::VerifyRejected;
    } else {
        sums += static_cast<std::uint64_t>(cfg.verify_probes);
        res.outcome = Outcome::Accepted;
        res.superpoly = p;
    }
    res.cube_sums = sums;
    return res;
}

}  // namespace detail

/// Seeded randomized maxterm search. Candidate i is derived from
/// (rng_seed, i) alone, so batches are evaluated concurrently and merged in
/// candidate order; the result does not depend on `cfg.threads`.
template <KeyedBitOracle Oracle>
SearchResult maxterm_search(const Oracle& oracle, const SearchConfig& cfg) {
    cfg.validate();
    SearchResult out;
    Gf2Basis basis;
    std::vector<Block32> seen_masks;

    const unsigned threads = std::max(1u, cfg.threads);
    const std::uint64_t batch = threads == 1 ? 1 : std::uint64_t{threads} * 4;
    std::vector<detail::CandidateResult> results;

    std::uint64_t next = 0;
    while (next < cfg.candidate_budget && !(cfg.target_rank > 0 && basis.rank() >= cfg.target_rank)) {
        const std::uint64_t n = std::min(batch, cfg.candidate_budget - next);
        results.assign(n, {});
        if (threads == 1) {
            for (std::uint64_t j = 0; j < n; ++j) results[j] = detail::evaluate_candidate(oracle, cfg, next + j);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back([&, w] {
                    for (std::uint64_t j = w; j < n; j += threads)
                        results[j] = detail::evaluate_candidate(oracle, cfg, next + j);
                });
            }
        }

        for (std::uint64_t j = 0; j < n; ++j) {
            if (cfg.target_rank > 0 && basis.rank() >= cfg.target_rank) break;
            auto& r = results[j];
            ++out.stats.candidates_tried;
            out.stats.cube_sums += r.cube_sums;
            switch (r.outcome) {
                case detail::Outcome::ConstantScreen: ++out.stats.constant_screened; continue;
                case detail::Outcome::Nonlinear: ++out.stats.blr_nonlinear; continue;
                case detail::Outcome::Constant: ++out.stats.blr_constant; continue;
                case detail::Outcome::ReconstructRejected: ++out.stats.reconstruct_rejected; continue;
                case detail::Outcome::VerifyRejected: ++out.stats.verify_rejected; continue;
                case detail::Outcome::Accepted: break;
            }
            if (std::find(seen_masks.begin(), seen_masks.end(), r.cube.mask()) != seen_masks.end()) {
                ++out.stats.duplicates;
                continue;
            }
            seen_masks.push_back(r.cube.mask());
            basis.insert(r.superpoly.coeffs);
            out.maxterms.push_back({r.cube, r.superpoly, fixed_pattern(r.cube, cfg.fixed_bit_value)});
        }
        next += n;
    }

    out.rank = basis.rank();
    out.reached_target = cfg.target_rank == 0 || out.rank >= cfg.target_rank;
    if (!out.reached_target) {
        out.diagnostic = "candidate budget exhausted at rank " + std::to_string(out.rank) + " of target " +
                         std::to_string(cfg.target_rank) + " after " + std::to_string(out.stats.candidates_tried) +
                         " candidates";
    }
    return out;
}

}  // namespace sccube
