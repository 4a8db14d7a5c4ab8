#include "sccube/cube_engine.hpp"

#include <stdexcept>

namespace sccube {

Cube::Cube(std::vector<int> indexes) : indexes_(std::move(indexes)) {
    if (indexes_.empty()) throw std::invalid_argument("cube must be nonempty");
    std::sort(indexes_.begin(), indexes_.end());
    for (std::size_t i = 0; i < indexes_.size(); ++i) {
        const int v = indexes_[i];
        if (v < 0 || v >= kBlockBits) throw std::invalid_argument("cube index out of range: " + std::to_string(v));
        if (i > 0 && indexes_[i - 1] == v) throw std::invalid_argument("duplicate cube index: " + std::to_string(v));
        mask_ |= block_bit_mask(v);
    }
}

std::string Cube::to_string() const {
    std::string s;
    for (int i : indexes_) {
        if (!s.empty()) s += ',';
        s += std::to_string(i);
    }
    return s;
}

const char* to_string(Linearity l) {
    switch (l) {
        case Linearity::Linear: return "linear";
        case Linearity::Nonlinear: return "nonlinear";
        case Linearity::Constant: return "constant";
    }
    return "?";
}

void SearchConfig::validate() const {
    if (cube_sizes.empty()) throw std::invalid_argument("search config: no cube sizes");
    for (int s : cube_sizes)
        if (s < 1 || s > kBlockBits) throw std::invalid_argument("search config: cube size out of range");
    if (blr_trials < 1) throw std::invalid_argument("search config: blr_trials must be >= 1");
    if (constant_probes < 1) throw std::invalid_argument("search config: constant_probes must be >= 1");
    if (verify_probes < 0) throw std::invalid_argument("search config: verify_probes must be >= 0");
    if (target_rank > static_cast<std::size_t>(kKeyBits))
        throw std::invalid_argument("search config: target_rank exceeds key size");
    leak.validate();
}

namespace detail {

std::uint64_t candidate_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over (seed, index)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Cube sample_cube(const std::vector<int>& sizes, std::mt19937_64& rng) {
    const int size = sizes[std::uniform_int_distribution<std::size_t>(0, sizes.size() - 1)(rng)];
    std::vector<int> pool(kBlockBits);
    for (int i = 0; i < kBlockBits; ++i) pool[i] = i;
    for (int i = 0; i < size; ++i) {
        const int j = std::uniform_int_distribution<int>(i, kBlockBits - 1)(rng);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(size));
    return Cube(std::move(pool));
}

}  // namespace detail

}  // namespace sccube
