#pragma once

// Preprocessing, online phase, linear key recovery, residual brute force and
// complexity accounting.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sccube/cube_engine.hpp"
#include "sccube/gf2.hpp"
#include "sccube/maxterm_db.hpp"

namespace sccube {

/// Device under attack. The hidden key is only reachable through the two
/// query functions; every call is counted.
class VictimOracle {
public:
    using LeakFn = std::function<bool(Block32)>;
    using EncryptFn = std::function<Block32(Block32)>;

    VictimOracle(LeakFn leak, EncryptFn encrypt = {});
    /// Simulated Simeck32/64 device with the given hidden key.
    static VictimOracle simeck(MasterKey hidden, const LeakageSpec& spec);

    bool leak(Block32 pt);
    /// Known-plaintext access (ciphertext only); throws std::logic_error if
    /// the victim was built without an encryption function.
    Block32 ciphertext(Block32 pt);

    std::uint64_t leak_queries() const { return leak_queries_; }
    std::uint64_t encrypt_queries() const { return encrypt_queries_; }

private:
    LeakFn leak_;
    EncryptFn encrypt_;
    std::uint64_t leak_queries_ = 0;
    std::uint64_t encrypt_queries_ = 0;
};

struct PreprocessResult {
    MaxtermDb db;
    SearchResult search;
};

/// Runs the maxterm search against the simulated leak with attacker-chosen
/// keys. Does not touch the filesystem.
PreprocessResult preprocess(const SearchConfig& config);

/// Only the rows that grow the rank, in DB order.
MaxtermDb prune_to_independent(const MaxtermDb& db);

struct OnlineData {
    std::vector<std::uint8_t> sums;    // one cube sum per maxterm, DB order
    std::uint64_t queries = 0;         // leak queries issued
    std::uint64_t distinct_cubes = 0;  // cube sums actually evaluated
};

class OnlineAbort : public std::runtime_error {
public:
    OnlineAbort(const std::string& what, OnlineData partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const OnlineData& partial() const { return partial_; }

private:
    OnlineData partial_;
};

/// Cube sums over the victim for every maxterm. Repeated cubes are queried
/// once. A throwing victim aborts with OnlineAbort carrying what was done.
OnlineData online_collect(const MaxtermDb& db, VictimOracle& victim);

class OracleMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Partial key knowledge: every key bit is either a pivot (fixed by the
/// equations given the free bits) or free.
struct LinearRecovery {
    Gf2Solution solution;
    std::size_t equations = 0;
    std::map<int, bool> determined;  // pivots whose row has no free terms
    std::vector<int> free_bits;

    std::size_t rank() const { return solution.rank(); }
    /// Each reduced row as "k3 + k40 = 1".
    std::vector<std::string> relations() const;
    /// True if every reduced row holds for `key`.
    bool consistent_with(MasterKey key) const;
    /// Key with the given free-bit values (free_bits order).
    MasterKey key_for(std::span<const std::uint8_t> free_values) const;
};

/// rhs[i] = observed[i] ^ constant[i]; throws OracleMismatch when the
/// equations contradict each other and std::invalid_argument on a length
/// mismatch.
LinearRecovery recover_linear(const MaxtermDb& db, std::span<const std::uint8_t> observed);

struct KnownPair {
    Block32 pt = 0;
    Block32 ct = 0;
};

struct BruteForceResult {
    std::optional<MasterKey> key;
    std::uint64_t tried = 0;
    bool exhausted = false;
    int unknown_bits = 0;
};

/// Enumerates the free bits lexicographically from all-zeros (first free bit
/// most significant), back-substitutes the pivots and tests every known
/// pair. `revealed` pins selected free bits (test aid). The hit with the
/// smallest enumeration index is returned regardless of `threads`.
BruteForceResult brute_force_remaining(const LinearRecovery& partial, std::span<const KnownPair> pairs,
                                       std::uint64_t budget, const std::map<int, bool>& revealed = {},
                                       unsigned threads = 1);

inline constexpr double kPrintedDataLog2 = 11.2855;

struct ComplexityReport {
    std::uint64_t chosen_plaintexts = 0;  // sum of 2^|cube| over distinct cubes
    double log2_plaintexts = 0.0;
    std::map<std::size_t, std::size_t> cubes_by_size;
    bool published_composition = false;  // exactly 31 size-6 cubes and 1 size-8 cube
    std::string note;
};

ComplexityReport complexity_report(const MaxtermDb& db);

/// log2 rounded to 4 decimals, as printed in reports.
std::string format_log2(double v);

struct AttackReport {
    std::size_t maxterms = 0;
    std::size_t rank = 0;
    std::map<int, bool> determined_bits;
    std::vector<std::string> relations;
    std::vector<int> free_bits;
    std::uint64_t chosen_plaintext_count = 0;
    std::uint64_t victim_queries = 0;
    std::uint64_t cube_evaluations = 0;
    std::uint64_t brute_force_tried = 0;
    int brute_force_unknown_bits = 0;
    std::size_t revealed_bits = 0;
    bool brute_force_run = false;
    bool brute_force_exhausted = false;
    std::optional<MasterKey> recovered_key;
    bool success = false;
    ComplexityReport complexity;

    std::string to_text() const;
    std::string to_kv() const;
};

}  // namespace sccube
