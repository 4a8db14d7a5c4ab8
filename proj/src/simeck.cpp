#include "sccube/simeck.hpp"

#include <stdexcept>

namespace sccube {

namespace {

constexpr Word16 kKeyConstant = 0xFFFC;

constexpr ZSequence make_z_sequence() {
    // s[i+5] = s[i+2] ^ s[i]
    ZSequence z{};
    std::uint8_t s[kRounds + 5]{1, 1, 1, 1, 1};
    for (int i = 0; i < kRounds; ++i) {
        s[i + 5] = s[i + 2] ^ s[i];
        z[i] = s[i];
    }
    return z;
}

constexpr ZSequence kZ = make_z_sequence();

// low bits of the reference implementation's packed sequence constant
static_assert(kZ[0] == 1 && kZ[4] == 1 && kZ[5] == 0 && kZ[8] == 1 && kZ[31] == 1);

}  // namespace

Word16 rotl16(Word16 x, int s) {
    if (s < 0 || s >= 16) throw std::invalid_argument("rotl16: rotation amount out of range");
    if (s == 0) return x;
    return static_cast<Word16>((x << s) | (x >> (16 - s)));
}

CipherState round_step(CipherState state, Word16 rk) {
    if (state.round < 0 || state.round >= kRounds)
        throw std::out_of_range("round_step: state already completed all rounds");
    const Word16 l = state.left;
    state.left = static_cast<Word16>(round_f(l) ^ state.right ^ rk);
    state.right = l;
    ++state.round;
    return state;
}

const ZSequence& default_z_sequence() { return kZ; }

RoundKeys key_schedule(MasterKey key) { return key_schedule(key, kZ); }

RoundKeys key_schedule(MasterKey key, const ZSequence& z) {
    Word16 t2 = key.word(0), t1 = key.word(1), t0 = key.word(2), k = key.word(3);
    RoundKeys out{};
    for (int i = 0; i < kRounds; ++i) {
        out[i] = k;
        const auto next_t2 = static_cast<Word16>(round_f(t0) ^ k ^ kKeyConstant ^ (z[i] & 1u));
        k = t0;
        t0 = t1;
        t1 = t2;
        t2 = next_t2;
    }
    return out;
}

CipherState encrypt_partial(Block32 pt, const RoundKeys& keys, int rounds) {
    if (rounds < 0 || rounds > kRounds) throw std::out_of_range("encrypt_partial: rounds out of range");
    CipherState s = CipherState::from_block(pt);
    for (int i = 0; i < rounds; ++i) s = round_step(s, keys[i]);
    return s;
}

CipherState encrypt_partial(Block32 pt, MasterKey key, int rounds) {
    return encrypt_partial(pt, key_schedule(key), rounds);
}

Block32 encrypt(Block32 pt, const RoundKeys& keys) { return encrypt_partial(pt, keys, kRounds).block(); }

Block32 encrypt(Block32 pt, MasterKey key) { return encrypt(pt, key_schedule(key)); }

Block32 decrypt(Block32 ct, const RoundKeys& keys) {
    // inverse round: (l', r') = (f(r) ^ l ^ rk, r) undone as l = r', r = l' ^ f(r') ^ rk
    Word16 l = static_cast<Word16>(ct >> 16), r = static_cast<Word16>(ct);
    for (int i = kRounds - 1; i >= 0; --i) {
        const Word16 prev_left = r;
        const auto prev_right = static_cast<Word16>(l ^ round_f(r) ^ keys[i]);
        l = prev_left;
        r = prev_right;
    }
    return (Block32{l} << 16) | r;
}

Block32 decrypt(Block32 ct, MasterKey key) { return decrypt(ct, key_schedule(key)); }

}  // namespace sccube
