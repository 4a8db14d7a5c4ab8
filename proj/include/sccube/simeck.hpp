#pragma once

// Simeck32/64: 16-bit words, 32-bit block, 64-bit key, 32 rounds.
//
// Bit numbering used throughout the library: index 0 is the most significant
// bit. Block bit i is (block >> (31 - i)) & 1, key bit i is
// (key >> (63 - i)) & 1.

#include <array>
#include <cstddef>
#include <cstdint>

namespace sccube {

using Word16 = std::uint16_t;
using Block32 = std::uint32_t;

inline constexpr int kRounds = 32;
inline constexpr int kBlockBits = 32;
inline constexpr int kKeyBits = 64;

/// Round-constant bits z_i, one per round.
using ZSequence = std::array<std::uint8_t, kRounds>;

struct MasterKey {
    std::uint64_t bits = 0;

    /// Key words in (t2, t1, t0, k0) order, k0 the least significant word.
    constexpr Word16 word(int i) const { return static_cast<Word16>(bits >> (16 * (3 - i))); }
    constexpr bool bit(int i) const { return (bits >> (63 - i)) & 1u; }

    friend constexpr bool operator==(MasterKey, MasterKey) = default;
};

struct CipherState {
    Word16 left = 0;
    Word16 right = 0;
    int round = 0;

    static constexpr CipherState from_block(Block32 b) {
        return {static_cast<Word16>(b >> 16), static_cast<Word16>(b), 0};
    }
    constexpr Block32 block() const { return (Block32{left} << 16) | right; }

    friend constexpr bool operator==(const CipherState&, const CipherState&) = default;
};

using RoundKeys = std::array<Word16, kRounds>;

constexpr Block32 block_bit_mask(int i) { return Block32{1} << (31 - i); }
constexpr std::uint64_t key_bit_mask(int i) { return std::uint64_t{1} << (63 - i); }

/// Circular left rotation; throws std::invalid_argument unless 0 <= s < 16.
Word16 rotl16(Word16 x, int s);

/// f(x) = (x & (x <<< 5)) ^ (x <<< 1)
constexpr Word16 round_f(Word16 x) {
    const auto r5 = static_cast<Word16>((x << 5) | (x >> 11));
    const auto r1 = static_cast<Word16>((x << 1) | (x >> 15));
    return static_cast<Word16>((x & r5) ^ r1);
}

/// One Feistel round: (l, r) -> (f(l) ^ r ^ rk, l). Throws std::out_of_range
/// when the state has already completed all rounds.
CipherState round_step(CipherState state, Word16 rk);

/// The m-sequence of X^5 + X^2 + 1 from the all-ones state.
const ZSequence& default_z_sequence();

RoundKeys key_schedule(MasterKey key);
/// Key schedule with an explicit round-constant sequence (self-test hook).
RoundKeys key_schedule(MasterKey key, const ZSequence& z);

/// State after exactly `rounds` rounds; throws std::out_of_range unless
/// 0 <= rounds <= 32.
CipherState encrypt_partial(Block32 pt, MasterKey key, int rounds);
CipherState encrypt_partial(Block32 pt, const RoundKeys& keys, int rounds);

Block32 encrypt(Block32 pt, MasterKey key);
Block32 encrypt(Block32 pt, const RoundKeys& keys);
Block32 decrypt(Block32 ct, MasterKey key);
Block32 decrypt(Block32 ct, const RoundKeys& keys);

}  // namespace sccube
