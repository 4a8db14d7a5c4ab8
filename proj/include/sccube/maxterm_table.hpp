#pragma once

// Re-validation of printed maxterm tables (cube indexes plus a linear key
// equation per row) against the simulated leak.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sccube/cube_engine.hpp"
#include "sccube/maxterm_db.hpp"

namespace sccube {

/// One printed row. Key indexes are kept exactly as printed, repeats included.
struct PrintedMaxterm {
    std::vector<int> cube;
    std::vector<int> keys;
};

/// The published 32-row Simeck32/64 table (round 4, hw bit 1). Its cube
/// indexes run over 0..63 although the block has 32 bits.
const std::vector<PrintedMaxterm>& published_simeck_table();

std::vector<PrintedMaxterm> rows_from_db(const MaxtermDb& db);

/// How printed cube indexes map onto plaintext positions.
enum class IndexMapping : std::uint8_t {
    Identity,  // indexes >= 32 are untestable
    Mod32,
};

/// How printed k_i map onto key bits.
enum class KeyNumbering : std::uint8_t {
    MsbFirst,  // k_i is key bit i (0 = MSB)
    LsbFirst,  // k_i is key bit 63 - i
};

const char* to_string(IndexMapping m);
const char* to_string(KeyNumbering k);

enum class RowStatus : std::uint8_t { Untestable, NotLinear, Constant, Match, Mismatch };
const char* to_string(RowStatus s);

struct RowCheck {
    std::size_t row = 0;
    RowStatus status = RowStatus::Untestable;
    std::optional<Cube> cube;
    LinearPoly reconstructed;
    LinearPoly printed_xor;  // repeated terms cancel
    LinearPoly printed_set;  // repeated terms collapse
    bool match_xor = false;
    bool match_set = false;
    std::string reason;
};

struct TableReport {
    IndexMapping mapping = IndexMapping::Identity;
    KeyNumbering numbering = KeyNumbering::MsbFirst;
    std::vector<RowCheck> rows;

    std::size_t count(RowStatus s) const;
    std::string to_text() const;
};

struct TableCheckConfig {
    LeakageSpec leak{};
    bool fixed_bit_value = false;
    int blr_trials = 300;
    int verify_probes = 100;
    std::uint64_t seed = 0;
};

TableReport verify_table(const std::vector<PrintedMaxterm>& rows, IndexMapping mapping, KeyNumbering numbering,
                         const TableCheckConfig& cfg);

}  // namespace sccube
