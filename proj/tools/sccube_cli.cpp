// sccube: Simeck32/64 side-channel cube attack workbench.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sccube/attack.hpp"
#include "sccube/hex.hpp"
#include "sccube/maxterm_table.hpp"
#include "sccube/selftest.hpp"

using namespace sccube;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LeakScope parse_scope(const std::string& s) {
    if (s == "full") return LeakScope::FullState;
    if (s == "left") return LeakScope::LeftHalf;
    throw UsageError("--scope must be 'full' or 'left'");
}

std::vector<int> parse_sizes(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--sizes expects comma-separated integers");
        }
    }
    if (out.empty()) throw UsageError("--sizes is empty");
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

unsigned resolve_threads(unsigned t) { return t ? t : std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simeck32/64 side-channel cube attack workbench"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    unsigned threads = 1;
    app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

    // encrypt / decrypt
    std::string pt_hex, key_hex, ct_hex;
    int rounds = -1;
    auto* enc = app.add_subcommand("encrypt", "Encrypt one block, or print the state after --rounds rounds");
    enc->add_option("--pt", pt_hex, "Plaintext, 8 hex digits")->required();
    enc->add_option("--key", key_hex, "Key, 16 hex digits")->required();
    enc->add_option("--rounds", rounds, "Stop after this many rounds (0..32)");

    auto* dec = app.add_subcommand("decrypt", "Decrypt one block");
    dec->add_option("--ct", ct_hex, "Ciphertext, 8 hex digits")->required();
    dec->add_option("--key", key_hex, "Key, 16 hex digits")->required();

    // leak
    int leak_round = 4, hw_bit = 1;
    std::string scope = "full";
    auto* leak = app.add_subcommand("leak", "Print one Hamming-weight bit of the round state");
    leak->add_option("--pt", pt_hex, "Plaintext, 8 hex digits")->required();
    leak->add_option("--key", key_hex, "Key, 16 hex digits")->required();
    leak->add_option("--round", leak_round, "Rounds before measurement (1..32)")->capture_default_str();
    leak->add_option("--hwbit", hw_bit, "Hamming-weight bit, 0 = LSB (0..7)")->capture_default_str();
    leak->add_option("--scope", scope, "Weight over the 'full' state or the 'left' word")->capture_default_str();

    // preprocess
    std::string out_path, sizes = "6,8";
    SearchConfig cfg;
    int fixed = 0;
    bool prune = false;
    auto* pre = app.add_subcommand("preprocess", "Search maxterms and write a maxterm database");
    pre->add_option("--out", out_path, "Output database path")->required();
    pre->add_option("--budget", cfg.candidate_budget, "Candidate cubes to try")->capture_default_str();
    pre->add_option("--sizes", sizes, "Comma-separated cube sizes")->capture_default_str();
    pre->add_option("--round", leak_round, "Leak round")->capture_default_str();
    pre->add_option("--hwbit", hw_bit, "Leaked Hamming-weight bit")->capture_default_str();
    pre->add_option("--scope", scope, "'full' or 'left'")->capture_default_str();
    pre->add_option("--blr-trials", cfg.blr_trials, "BLR pairs per candidate")->capture_default_str();
    pre->add_option("--target-rank", cfg.target_rank, "Stop once the equations reach this rank (0 = never)")
        ->capture_default_str();
    pre->add_option("--fixed", fixed, "Value of non-cube plaintext bits (0 or 1)")->capture_default_str();
    pre->add_flag("--prune", prune, "Keep only rank-increasing maxterms");

    // attack
    std::string db_path, victim_hex, format = "both";
    bool full_recover = false, verify = false;
    int reveal_free = 0, pairs_n = 2;
    std::uint64_t brute_budget = std::uint64_t{1} << 34;
    auto* atk = app.add_subcommand("attack", "Online phase against a simulated victim");
    atk->add_option("--db", db_path, "Maxterm database")->required();
    atk->add_option("--key", victim_hex, "Victim key (sealed inside the victim oracle)")->required();
    atk->add_flag("--full-recover", full_recover, "Brute-force the free key bits");
    atk->add_option("--brute-budget", brute_budget, "Maximum brute-force trials")->capture_default_str();
    atk->add_option("--reveal-free", reveal_free,
                    "TEST AID: disclose this many free key bits from the victim key before brute force");
    atk->add_option("--pairs", pairs_n, "Known plaintext/ciphertext pairs for brute force")->capture_default_str();
    atk->add_option("--format", format, "text, kv or both")->capture_default_str();
    atk->add_flag("--verify", verify, "Ground-truth check of the recovered relations against the victim key");

    // complexity
    auto* cx = app.add_subcommand("complexity", "Data-complexity accounting for a maxterm database");
    cx->add_option("--db", db_path, "Maxterm database")->required();

    // selftest
    auto* st = app.add_subcommand("selftest", "Run the embedded invariant suite");

    // verify-table3
    std::string mapping = "all", numbering = "all";
    auto* vt = app.add_subcommand("verify-table3", "Re-test a printed maxterm table under index mappings");
    vt->add_option("--mapping", mapping, "identity, mod32 or all")->capture_default_str();
    vt->add_option("--keys", numbering, "msb, lsb or all")->capture_default_str();
    vt->add_option("--db", db_path, "Validate this database's own rows instead of the published table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*enc) {
            const Block32 pt = parse_block_hex(pt_hex);
            const MasterKey key = parse_key_hex(key_hex);
            if (rounds > kRounds) throw UsageError("--rounds must be in 0..32");
            if (rounds >= 0) std::cout << format_block_hex(encrypt_partial(pt, key, rounds).block()) << "\n";
            else std::cout << format_block_hex(encrypt(pt, key)) << "\n";
            return 0;
        }
        if (*dec) {
            std::cout << format_block_hex(decrypt(parse_block_hex(ct_hex), parse_key_hex(key_hex))) << "\n";
            return 0;
        }
        if (*leak) {
            LeakageSpec spec{leak_round, hw_bit, parse_scope(scope)};
            if (!spec.valid()) throw UsageError("--round must be in 1..32 and --hwbit in 0..7");
            std::cout << (leak_bit(parse_block_hex(pt_hex), parse_key_hex(key_hex), spec) ? 1 : 0) << "\n";
            return 0;
        }
        if (*pre) {
            cfg.cube_sizes = parse_sizes(sizes);
            cfg.leak = {leak_round, hw_bit, parse_scope(scope)};
            if (fixed != 0 && fixed != 1) throw UsageError("--fixed must be 0 or 1");
            cfg.fixed_bit_value = fixed == 1;
            cfg.rng_seed = seed;
            cfg.threads = resolve_threads(threads);
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            PreprocessResult res = preprocess(cfg);
            if (prune) res.db = prune_to_independent(res.db);
            res.db.created = utc_timestamp();
            save_db(out_path, res.db);
            const auto& s = res.search.stats;
            std::cout << "candidates=" << s.candidates_tried << "\n"
                      << "maxterms_found=" << res.search.maxterms.size() << "\n"
                      << "maxterms_written=" << res.db.maxterms.size() << "\n"
                      << "rank=" << res.db.rank() << "\n"
                      << "constant_screened=" << s.constant_screened << "\n"
                      << "blr_nonlinear=" << s.blr_nonlinear << "\n"
                      << "verify_rejected=" << s.verify_rejected << "\n"
                      << "cube_sums=" << s.cube_sums << "\n"
                      << "out=" << out_path << "\n";
            if (!res.search.reached_target) std::cerr << "warning: " << res.search.diagnostic << "\n";
            return 0;
        }
        if (*atk) {
            if (format != "text" && format != "kv" && format != "both") throw UsageError("--format must be text, kv or both");
            if (reveal_free < 0) throw UsageError("--reveal-free must be >= 0");
            if (pairs_n < 1) throw UsageError("--pairs must be >= 1");
            const MasterKey victim_key = parse_key_hex(victim_hex);
            const MaxtermDb db = load_db(db_path);
            VictimOracle victim = VictimOracle::simeck(victim_key, db.leak);

            AttackReport rep;
            rep.maxterms = db.maxterms.size();
            rep.complexity = complexity_report(db);
            rep.chosen_plaintext_count = rep.complexity.chosen_plaintexts;

            const OnlineData online = online_collect(db, victim);
            rep.victim_queries = online.queries;
            rep.cube_evaluations = online.distinct_cubes;

            LinearRecovery rec;
            try {
                rec = recover_linear(db, online.sums);
            } catch (const OracleMismatch& e) {
                std::cerr << "inconsistent: " << e.what() << "\n";
                return kExitDomain;
            }
            rep.rank = rec.rank();
            rep.determined_bits = rec.determined;
            rep.relations = rec.relations();
            rep.free_bits = rec.free_bits;
            rep.success = true;

            if (full_recover) {
                std::mt19937_64 rng(seed);
                std::vector<KnownPair> pairs;
                for (int i = 0; i < pairs_n; ++i) {
                    const auto pt = static_cast<Block32>(rng());
                    pairs.push_back({pt, victim.ciphertext(pt)});
                }
                std::map<int, bool> revealed;
                for (int i = 0; i < reveal_free && i < static_cast<int>(rec.free_bits.size()); ++i)
                    revealed[rec.free_bits[i]] = victim_key.bit(rec.free_bits[i]);
                rep.revealed_bits = revealed.size();
                const BruteForceResult bf =
                    brute_force_remaining(rec, pairs, brute_budget, revealed, resolve_threads(threads));
                rep.brute_force_run = true;
                rep.brute_force_tried = bf.tried;
                rep.brute_force_unknown_bits = bf.unknown_bits;
                rep.brute_force_exhausted = bf.exhausted;
                rep.recovered_key = bf.key;
                rep.success = bf.key.has_value();
            }

            if (format != "kv") std::cout << rep.to_text();
            if (format == "both") std::cout << "--\n";
            if (format != "text") std::cout << rep.to_kv();
            if (verify) std::cout << "relations_hold=" << (rec.consistent_with(victim_key) ? 1 : 0) << "\n";
            return rep.success ? 0 : kExitDomain;
        }
        if (*cx) {
            const MaxtermDb db = load_db(db_path);
            const ComplexityReport r = complexity_report(db);
            std::cout << "maxterms=" << db.maxterms.size() << "\n"
                      << "rank=" << db.rank() << "\n"
                      << "chosen_plaintexts=" << r.chosen_plaintexts << "\n"
                      << "chosen_plaintexts_log2=" << format_log2(r.log2_plaintexts) << "\n";
            for (const auto& [size, n] : r.cubes_by_size) std::cout << "cubes_size_" << size << "=" << n << "\n";
            std::cout << "data_complexity_divergence=" << (r.published_composition ? 1 : 0) << "\n";
            if (!r.note.empty()) std::cerr << "note: " << r.note << "\n";
            return 0;
        }
        if (*st) {
            const SelftestReport r = run_selftest();
            std::cout << r.to_text();
            return r.passed() ? 0 : kExitDomain;
        }
        if (*vt) {
            std::vector<IndexMapping> maps;
            if (mapping == "identity" || mapping == "all") maps.push_back(IndexMapping::Identity);
            if (mapping == "mod32" || mapping == "all") maps.push_back(IndexMapping::Mod32);
            std::vector<KeyNumbering> nums;
            if (numbering == "msb" || numbering == "all") nums.push_back(KeyNumbering::MsbFirst);
            if (numbering == "lsb" || numbering == "all") nums.push_back(KeyNumbering::LsbFirst);
            if (maps.empty() || nums.empty()) throw UsageError("bad --mapping or --keys value");

            TableCheckConfig tc;
            tc.seed = seed;
            std::vector<PrintedMaxterm> rows = published_simeck_table();
            if (!db_path.empty()) {
                const MaxtermDb db = load_db(db_path);
                rows = rows_from_db(db);
                tc.leak = db.leak;
                tc.fixed_bit_value = db.fixed_value;
            }
            for (auto m : maps)
                for (auto n : nums) std::cout << verify_table(rows, m, n, tc).to_text();
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const HexFormatError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DbParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
