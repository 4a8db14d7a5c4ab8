#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sccube/simeck.hpp"

namespace sccube {

struct SelftestOptions {
    ZSequence round_constants = default_z_sequence();
    std::uint64_t seed = 1;
};

struct StageResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<StageResult> stages;

    bool passed() const;
    std::string to_text() const;
};

/// Embedded checks: cipher vectors, cube-sum/superpoly equivalence, BLR
/// sanity and GF(2) solver oracles. Deterministic for a given seed.
SelftestReport run_selftest(const SelftestOptions& opts = {});

}  // namespace sccube
