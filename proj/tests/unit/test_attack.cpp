#include <algorithm>
#include <random>

#include "doctest.h"
#include "sccube/attack.hpp"
#include "sccube/maxterm_table.hpp"

using namespace sccube;

namespace {

const PreprocessResult& default_preprocess() {
    static const PreprocessResult r = preprocess(SearchConfig{});
    return r;
}

// DB of unit superpolys k_i over distinct dummy cubes.
MaxtermDb unit_db(const std::vector<int>& bits) {
    MaxtermDb db;
    int n = 0;
    for (int b : bits) {
        Maxterm m;
        m.cube = Cube({n % 32, (n % 32 + 1 + n / 32) % 32});
        m.superpoly = LinearPoly::from_vars({b});
        db.maxterms.push_back(m);
        ++n;
    }
    return db;
}

std::vector<std::uint8_t> true_sums(const MaxtermDb& db, std::uint64_t key) {
    std::vector<std::uint8_t> out;
    for (const auto& m : db.maxterms) out.push_back(m.superpoly.eval(key));
    return out;
}

std::vector<KnownPair> pairs_for(MasterKey key, int n, std::mt19937_64& rng) {
    std::vector<KnownPair> out;
    for (int i = 0; i < n; ++i) {
        const auto pt = Block32(rng());
        out.push_back({pt, encrypt(pt, key)});
    }
    return out;
}

// Reveal the true value of every free bit except the last `keep_unknown`.
std::map<int, bool> reveal_all_but(const LinearRecovery& rec, MasterKey key, std::size_t keep_unknown) {
    std::map<int, bool> out;
    const std::size_t n = rec.free_bits.size() - std::min(keep_unknown, rec.free_bits.size());
    for (std::size_t i = 0; i < n; ++i) out[rec.free_bits[i]] = key.bit(rec.free_bits[i]);
    return out;
}

}  // namespace

TEST_CASE("preprocess") {
    SUBCASE("budget 0 gives an empty DB") {
        SearchConfig cfg;
        cfg.candidate_budget = 0;
        const PreprocessResult r = preprocess(cfg);
        CHECK(r.db.empty());
        CHECK_FALSE(r.search.reached_target);
    }
    SUBCASE("default run") {
        const PreprocessResult& r = default_preprocess();
        CHECK(r.search.reached_target);
        CHECK(r.db.rank() == 32);
        CHECK(r.db.leak.round == 4);
        CHECK(r.db.leak.hw_bit == 1);
        CHECK(r.db.candidates_used == r.search.stats.candidates_tried);
        CHECK(db_body(db_to_string(r.db)) == db_body(db_to_string(preprocess(SearchConfig{}).db)));
    }
    SUBCASE("prune keeps a basis") {
        const MaxtermDb pruned = prune_to_independent(default_preprocess().db);
        CHECK(pruned.maxterms.size() == 32);
        CHECK(pruned.rank() == 32);
    }
}

TEST_CASE("VictimOracle counts queries") {
    VictimOracle v = VictimOracle::simeck(MasterKey{42}, {});
    v.leak(0);
    v.leak(1);
    CHECK(v.ciphertext(0x65656877u) == encrypt(0x65656877u, MasterKey{42}));
    CHECK(v.leak_queries() == 2);
    CHECK(v.encrypt_queries() == 1);

    VictimOracle leak_only([](Block32) { return false; });
    CHECK_THROWS_AS(leak_only.ciphertext(0), std::logic_error);
    CHECK_THROWS_AS(VictimOracle(VictimOracle::LeakFn{}), std::invalid_argument);
}

TEST_CASE("online_collect") {
    const MaxtermDb& db = default_preprocess().db;
    std::mt19937_64 rng(3);

    SUBCASE("sums equal the superpolys at the hidden key") {
        for (int t = 0; t < 5; ++t) {
            const MasterKey k{rng()};
            VictimOracle v = VictimOracle::simeck(k, db.leak);
            const OnlineData d = online_collect(db, v);
            CHECK(d.sums == true_sums(db, k.bits));
            CHECK(d.queries == v.leak_queries());
            CHECK(d.queries == complexity_report(db).chosen_plaintexts);
        }
    }
    SUBCASE("empty DB issues no queries") {
        MaxtermDb empty;
        VictimOracle v = VictimOracle::simeck(MasterKey{1}, {});
        const OnlineData d = online_collect(empty, v);
        CHECK(d.sums.empty());
        CHECK(v.leak_queries() == 0);
    }
    SUBCASE("one size-6 cube costs 64 queries; repeats are free") {
        MaxtermDb small;
        const Maxterm m{Cube({0, 1, 2, 3, 4, 5}), LinearPoly::from_vars({7}), 0};
        small.maxterms = {m, m};
        VictimOracle v = VictimOracle::simeck(MasterKey{1}, {});
        const OnlineData d = online_collect(small, v);
        CHECK(d.queries == 64);
        CHECK(d.distinct_cubes == 1);
        CHECK(d.sums.size() == 2);
    }
    SUBCASE("a failing victim aborts with partial data") {
        MaxtermDb two;
        two.maxterms.push_back({Cube({0, 1, 2, 3, 4, 5, 6, 7}), LinearPoly::from_vars({1}), 0});
        two.maxterms.push_back({Cube({8, 9, 10, 11, 12, 13, 14, 15}), LinearPoly::from_vars({2}), 0});
        int calls = 0;
        VictimOracle v([&calls](Block32) -> bool {
            if (++calls > 300) throw std::runtime_error("device unplugged");
            return false;
        });
        try {
            online_collect(two, v);
            FAIL("expected OnlineAbort");
        } catch (const OnlineAbort& e) {
            CHECK(e.partial().queries == 301);
            CHECK(e.partial().sums.size() == 1);
            CHECK(std::string(e.what()).find("device unplugged") != std::string::npos);
        }
    }
}

TEST_CASE("recover_linear") {
    std::mt19937_64 rng(11);

    SUBCASE("64 unit equations give the whole key") {
        std::vector<int> all(64);
        for (int i = 0; i < 64; ++i) all[i] = i;
        const MaxtermDb db = unit_db(all);
        const MasterKey k{rng()};
        const LinearRecovery rec = recover_linear(db, true_sums(db, k.bits));
        CHECK(rec.rank() == 64);
        CHECK(rec.free_bits.empty());
        CHECK(rec.determined.size() == 64);
        CHECK(rec.key_for({}) == k);
    }
    SUBCASE("rank-32 DB from the search") {
        const MaxtermDb& db = default_preprocess().db;
        for (int t = 0; t < 10; ++t) {
            const MasterKey k{rng()};
            const LinearRecovery rec = recover_linear(db, true_sums(db, k.bits));
            CHECK(rec.rank() == 32);
            CHECK(rec.free_bits.size() == 32);
            CHECK(rec.consistent_with(k));
            for (const auto& [bit, v] : rec.determined) CHECK(k.bit(bit) == v);
            CHECK(rec.relations().size() == 32);
            std::vector<std::uint8_t> fv;
            for (int f : rec.free_bits) fv.push_back(k.bit(f));
            CHECK(rec.key_for(fv) == k);
        }
    }
    SUBCASE("a flipped observation with redundancy is detected") {
        const MaxtermDb& db = default_preprocess().db;
        REQUIRE(db.maxterms.size() > db.rank());
        const MasterKey k{rng()};
        auto obs = true_sums(db, k.bits);
        // some single flip lands in a dependent combination
        bool caught = false;
        for (std::size_t i = 0; i < obs.size() && !caught; ++i) {
            auto bad = obs;
            bad[i] ^= 1;
            try {
                recover_linear(db, bad);
            } catch (const OracleMismatch&) {
                caught = true;
            }
        }
        CHECK(caught);
    }
    SUBCASE("length mismatch") {
        const MaxtermDb db = unit_db({1, 2});
        CHECK_THROWS_AS(recover_linear(db, std::vector<std::uint8_t>{1}), std::invalid_argument);
    }
    SUBCASE("relation text") {
        MaxtermDb db;
        db.maxterms.push_back({Cube({0}), LinearPoly::from_vars({3, 40}, true), 0});
        const LinearRecovery rec = recover_linear(db, std::vector<std::uint8_t>{0});
        CHECK(rec.relations() == std::vector<std::string>{"k3 + k40 = 1"});
        CHECK(rec.determined.empty());
    }
}

TEST_CASE("brute_force_remaining") {
    std::mt19937_64 rng(13);
    const MaxtermDb& db = default_preprocess().db;

    SUBCASE("no free bits: one trial") {
        std::vector<int> all(64);
        for (int i = 0; i < 64; ++i) all[i] = i;
        const MaxtermDb full = unit_db(all);
        const MasterKey k{rng()};
        const LinearRecovery rec = recover_linear(full, true_sums(full, k.bits));
        const auto pairs = pairs_for(k, 2, rng);
        const BruteForceResult r = brute_force_remaining(rec, pairs, 1000);
        REQUIRE(r.key);
        CHECK(*r.key == k);
        CHECK(r.tried == 1);
        CHECK(r.unknown_bits == 0);
    }
    SUBCASE("8 unknown bits") {
        for (int t = 0; t < 5; ++t) {
            const MasterKey k{rng()};
            const LinearRecovery rec = recover_linear(db, true_sums(db, k.bits));
            const auto pairs = pairs_for(k, 2, rng);
            const BruteForceResult r = brute_force_remaining(rec, pairs, 1u << 20, reveal_all_but(rec, k, 8));
            REQUIRE(r.key);
            CHECK(*r.key == k);
            CHECK(r.tried <= 256);
            CHECK(r.unknown_bits == 8);
            CHECK_FALSE(r.exhausted);
        }
    }
    SUBCASE("budget and space exhaustion") {
        const MasterKey k{rng()};
        const LinearRecovery rec = recover_linear(db, true_sums(db, k.bits));
        const auto wrong = pairs_for(MasterKey{k.bits ^ 1}, 2, rng);
        const BruteForceResult r = brute_force_remaining(rec, wrong, 1u << 20, reveal_all_but(rec, k, 8));
        CHECK_FALSE(r.key);
        CHECK(r.exhausted);
        CHECK(r.tried == 256);

        const BruteForceResult b = brute_force_remaining(rec, wrong, 10, reveal_all_but(rec, k, 8));
        CHECK(b.exhausted);
        CHECK(b.tried == 10);
    }
    SUBCASE("thread count does not change the result") {
        const MasterKey k{rng()};
        const LinearRecovery rec = recover_linear(db, true_sums(db, k.bits));
        const auto pairs = pairs_for(k, 2, rng);
        const auto reveal = reveal_all_but(rec, k, 17);
        const BruteForceResult a = brute_force_remaining(rec, pairs, 1u << 20, reveal, 1);
        const BruteForceResult b = brute_force_remaining(rec, pairs, 1u << 20, reveal, 4);
        REQUIRE(a.key);
        REQUIRE(b.key);
        CHECK(*a.key == k);
        CHECK(*b.key == k);
        CHECK(a.tried == b.tried);
    }
    SUBCASE("no pairs") {
        const LinearRecovery rec = recover_linear(db, true_sums(db, 0));
        CHECK_THROWS_AS(brute_force_remaining(rec, {}, 10), std::invalid_argument);
    }
}

TEST_CASE("complexity_report") {
    SUBCASE("31 cubes of size 6 and one of size 8") {
        MaxtermDb db;
        for (int i = 0; i < 31; ++i) {
            std::vector<int> idx;
            for (int j = 0; j < 6; ++j) idx.push_back((i + j) % 32);
            db.maxterms.push_back({Cube(idx), LinearPoly::from_vars({i}), 0});
        }
        db.maxterms.push_back({Cube({0, 1, 2, 3, 4, 5, 6, 7}), LinearPoly::from_vars({40}), 0});
        const ComplexityReport r = complexity_report(db);
        CHECK(r.chosen_plaintexts == 2240);
        CHECK(format_log2(r.log2_plaintexts) == "11.1293");
        CHECK(r.published_composition);
        CHECK(r.note.find("2240") != std::string::npos);
        CHECK(r.note.find("11.2855") != std::string::npos);
        CHECK(format_log2(r.log2_plaintexts) != format_log2(kPrintedDataLog2));
    }
    SUBCASE("empty") {
        const ComplexityReport r = complexity_report(MaxtermDb{});
        CHECK(r.chosen_plaintexts == 0);
        CHECK(r.log2_plaintexts == 0.0);
        CHECK_FALSE(r.published_composition);
    }
    SUBCASE("single size-6 cube, repeated") {
        MaxtermDb db;
        const Maxterm m{Cube({0, 1, 2, 3, 4, 5}), LinearPoly::from_vars({1}), 0};
        db.maxterms = {m, m};
        const ComplexityReport r = complexity_report(db);
        CHECK(r.chosen_plaintexts == 64);
        CHECK(r.cubes_by_size.at(6) == 1);
        CHECK(r.note.empty());
    }
}

TEST_CASE("AttackReport key=value output") {
    AttackReport rep;
    rep.maxterms = 3;
    rep.rank = 2;
    rep.determined_bits = {{5, true}, {9, false}};
    rep.free_bits = {1, 2};
    rep.brute_force_run = true;
    rep.recovered_key = MasterKey{0x0123456789ABCDEFull};
    rep.success = true;
    const std::string kv = rep.to_kv();
    CHECK(kv.find("rank=2\n") != std::string::npos);
    CHECK(kv.find("determined=5:1,9:0\n") != std::string::npos);
    CHECK(kv.find("free=1,2\n") != std::string::npos);
    CHECK(kv.find("recovered_key=0123456789ABCDEF\n") != std::string::npos);
    CHECK(kv.find("success=1\n") != std::string::npos);
    CHECK(rep.to_text().find("0123456789ABCDEF") != std::string::npos);
}

TEST_CASE("verify_table") {
    const auto& table = published_simeck_table();
    REQUIRE(table.size() == 32);
    CHECK(std::count_if(table.begin(), table.end(), [](const auto& r) { return r.cube.size() == 6; }) == 31);

    TableCheckConfig cfg;
    cfg.blr_trials = 50;
    cfg.verify_probes = 20;

    SUBCASE("identity mapping marks out-of-range rows untestable") {
        const auto out_of_range = std::count_if(table.begin(), table.end(), [](const auto& r) {
            return *std::max_element(r.cube.begin(), r.cube.end()) >= 32;
        });
        const TableReport rep = verify_table(table, IndexMapping::Identity, KeyNumbering::MsbFirst, cfg);
        CHECK(rep.rows.size() == 32);
        CHECK(rep.count(RowStatus::Untestable) >= std::size_t(out_of_range));
        std::size_t total = 0;
        for (auto s : {RowStatus::Untestable, RowStatus::NotLinear, RowStatus::Constant, RowStatus::Match,
                       RowStatus::Mismatch})
            total += rep.count(s);
        CHECK(total == 32);
        CHECK_FALSE(rep.to_text().empty());
    }
    SUBCASE("our own DB validates completely") {
        const MaxtermDb pruned = prune_to_independent(default_preprocess().db);
        const TableReport rep =
            verify_table(rows_from_db(pruned), IndexMapping::Identity, KeyNumbering::MsbFirst, cfg);
        CHECK(rep.count(RowStatus::Match) == pruned.maxterms.size());
    }
}
