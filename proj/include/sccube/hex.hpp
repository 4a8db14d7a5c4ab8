#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sccube/simeck.hpp"

namespace sccube {

class HexFormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exactly 8 (block) or 16 (key) hex digits, either case, optional "0x".
Block32 parse_block_hex(std::string_view s);
MasterKey parse_key_hex(std::string_view s);

/// Uppercase, zero padded, MSB first.
std::string format_block_hex(Block32 b);
std::string format_key_hex(MasterKey k);

}  // namespace sccube
