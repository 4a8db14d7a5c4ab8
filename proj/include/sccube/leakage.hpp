#pragma once

#include <cstdint>

#include "sccube/simeck.hpp"

namespace sccube {

/// Which part of the state the Hamming weight is taken over.
enum class LeakScope : std::uint8_t {
    FullState,  // left || right, 32 bits
    LeftHalf,   // left word only, 16 bits
};

/// One bit of the binary Hamming weight of the state after `round` rounds.
/// hw_bit 0 is the least significant bit of the weight.
struct LeakageSpec {
    int round = 4;
    int hw_bit = 1;
    LeakScope scope = LeakScope::FullState;

    bool valid() const { return round >= 1 && round <= kRounds && hw_bit >= 0 && hw_bit <= 7; }
    /// Throws std::invalid_argument if !valid().
    void validate() const;

    friend bool operator==(const LeakageSpec&, const LeakageSpec&) = default;
};

int hamming_weight(const CipherState& state);
int hamming_weight(const CipherState& state, LeakScope scope);

bool leak_bit(Block32 pt, MasterKey key, const LeakageSpec& spec);

/// Leak function with the key schedule prefix computed once per call; this
/// is the hot path of every cube sum.
class SimeckLeak {
public:
    explicit SimeckLeak(LeakageSpec spec);

    const LeakageSpec& spec() const { return spec_; }
    bool operator()(Block32 pt, std::uint64_t key) const;

private:
    LeakageSpec spec_;
};

}  // namespace sccube
