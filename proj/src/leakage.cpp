#include "sccube/leakage.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace sccube {

void LeakageSpec::validate() const {
    if (!valid())
        throw std::invalid_argument("invalid leakage spec: round=" + std::to_string(round) +
                                    " hw_bit=" + std::to_string(hw_bit));
}

int hamming_weight(const CipherState& state) { return std::popcount(state.block()); }

int hamming_weight(const CipherState& state, LeakScope scope) {
    return scope == LeakScope::LeftHalf ? std::popcount(state.left) : hamming_weight(state);
}

bool leak_bit(Block32 pt, MasterKey key, const LeakageSpec& spec) {
    return SimeckLeak(spec)(pt, key.bits);
}

SimeckLeak::SimeckLeak(LeakageSpec spec) : spec_(spec) { spec_.validate(); }

bool SimeckLeak::operator()(Block32 pt, std::uint64_t key) const {
    // Only the first `round` round keys are needed; expand them inline.
    MasterKey mk{key};
    Word16 t2 = mk.word(0), t1 = mk.word(1), t0 = mk.word(2), k = mk.word(3);
    const ZSequence& z = default_z_sequence();
    Word16 l = static_cast<Word16>(pt >> 16), r = static_cast<Word16>(pt);
    for (int i = 0; i < spec_.round; ++i) {
        const Word16 prev = l;
        l = static_cast<Word16>(round_f(l) ^ r ^ k);
        r = prev;
        const auto next_t2 = static_cast<Word16>(round_f(t0) ^ k ^ 0xFFFC ^ z[i]);
        k = t0;
        t0 = t1;
        t1 = t2;
        t2 = next_t2;
    }
    const int hw = spec_.scope == LeakScope::LeftHalf ? std::popcount(l)
                                                      : std::popcount((std::uint32_t{l} << 16) | r);
    return (hw >> spec_.hw_bit) & 1;
}

}  // namespace sccube
