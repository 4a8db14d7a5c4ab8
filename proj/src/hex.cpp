#include "sccube/hex.hpp"

#include <charconv>
#include <cstdio>

namespace sccube {

namespace {

std::uint64_t parse_fixed_hex(std::string_view s, std::size_t digits, const char* what) {
    if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
    if (s.size() != digits)
        throw HexFormatError(std::string(what) + " must be exactly " + std::to_string(digits) + " hex digits");
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw HexFormatError(std::string("malformed ") + what + " '" + std::string(s) + "'");
    return v;
}

}  // namespace

Block32 parse_block_hex(std::string_view s) { return static_cast<Block32>(parse_fixed_hex(s, 8, "block")); }

MasterKey parse_key_hex(std::string_view s) { return MasterKey{parse_fixed_hex(s, 16, "key")}; }

std::string format_block_hex(Block32 b) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08X", static_cast<unsigned>(b));
    return buf;
}

std::string format_key_hex(MasterKey k) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llX", static_cast<unsigned long long>(k.bits));
    return buf;
}

}  // namespace sccube
