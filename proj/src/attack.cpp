#include "sccube/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "sccube/hex.hpp"

namespace sccube {

VictimOracle::VictimOracle(LeakFn leak, EncryptFn encrypt) : leak_(std::move(leak)), encrypt_(std::move(encrypt)) {
    if (!leak_) throw std::invalid_argument("victim needs a leak function");
}

VictimOracle VictimOracle::simeck(MasterKey hidden, const LeakageSpec& spec) {
    SimeckLeak leak(spec);
    const RoundKeys keys = key_schedule(hidden);
    return VictimOracle([leak, k = hidden.bits](Block32 pt) { return leak(pt, k); },
                        [keys](Block32 pt) { return encrypt(pt, keys); });
}

bool VictimOracle::leak(Block32 pt) {
    ++leak_queries_;
    return leak_(pt);
}

Block32 VictimOracle::ciphertext(Block32 pt) {
    if (!encrypt_) throw std::logic_error("victim offers no known-plaintext access");
    ++encrypt_queries_;
    return encrypt_(pt);
}

PreprocessResult preprocess(const SearchConfig& config) {
    config.validate();
    PreprocessResult out;
    out.search = maxterm_search(SimeckLeak(config.leak), config);
    out.db.leak = config.leak;
    out.db.seed = config.rng_seed;
    out.db.fixed_value = config.fixed_bit_value;
    out.db.maxterms = out.search.maxterms;
    out.db.candidates_used = out.search.stats.candidates_tried;
    return out;
}

MaxtermDb prune_to_independent(const MaxtermDb& db) {
    MaxtermDb out = db;
    out.maxterms.clear();
    const auto polys = db.superpolys();
    for (std::size_t i : select_independent(polys)) out.maxterms.push_back(db.maxterms[i]);
    return out;
}

OnlineData online_collect(const MaxtermDb& db, VictimOracle& victim) {
    OnlineData data;
    std::map<Block32, std::uint8_t> cache;  // cube mask -> sum; the fixed value is global to the DB
    const std::uint64_t start = victim.leak_queries();
    auto leak = [&victim](Block32 pt, std::uint64_t) { return victim.leak(pt); };
    for (const auto& m : db.maxterms) {
        auto it = cache.find(m.cube.mask());
        if (it == cache.end()) {
            bool s = false;
            try {
                s = cube_sum(leak, m.cube, m.fixed_bits, 0);
            } catch (const std::exception& e) {
                data.queries = victim.leak_queries() - start;
                throw OnlineAbort(std::string("victim query failed: ") + e.what(), data);
            }
            it = cache.emplace(m.cube.mask(), s).first;
            ++data.distinct_cubes;
        }
        data.sums.push_back(it->second);
    }
    data.queries = victim.leak_queries() - start;
    return data;
}

std::vector<std::string> LinearRecovery::relations() const {
    std::vector<std::string> out;
    const auto& s = solution;
    for (std::size_t i = 0; i < s.rank(); ++i) {
        std::string row;
        for (std::size_t c = 0; c < s.cols; ++c) {
            if (!s.pivot_rows.get(i, c)) continue;
            if (!row.empty()) row += " + ";
            row += "k" + std::to_string(c);
        }
        out.push_back(row + " = " + std::to_string(int{s.pivot_values[i]}));
    }
    return out;
}

bool LinearRecovery::consistent_with(MasterKey key) const {
    const auto& s = solution;
    for (std::size_t i = 0; i < s.rank(); ++i) {
        bool v = false;
        for (std::size_t c = 0; c < s.cols; ++c)
            if (s.pivot_rows.get(i, c)) v ^= key.bit(static_cast<int>(c));
        if (v != static_cast<bool>(s.pivot_values[i])) return false;
    }
    return true;
}

MasterKey LinearRecovery::key_for(std::span<const std::uint8_t> free_values) const {
    const auto bits = solution.assign(free_values);
    MasterKey k;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) k.bits |= key_bit_mask(static_cast<int>(i));
    return k;
}

LinearRecovery recover_linear(const MaxtermDb& db, std::span<const std::uint8_t> observed) {
    if (observed.size() != db.maxterms.size())
        throw std::invalid_argument("recover_linear: " + std::to_string(observed.size()) + " observations for " +
                                    std::to_string(db.maxterms.size()) + " maxterms");
    const auto polys = db.superpolys();
    Gf2System sys{Gf2Matrix::from_polys(polys), {}};
    for (std::size_t i = 0; i < polys.size(); ++i) sys.rhs.push_back((observed[i] ^ polys[i].constant) & 1u);

    LinearRecovery rec;
    rec.equations = polys.size();
    try {
        rec.solution = solve(sys);
    } catch (const InconsistentSystem& e) {
        throw OracleMismatch(std::string("online observations contradict the maxterm equations (") + e.what() +
                             "); wrong leak spec or corrupted db");
    }
    for (std::size_t c : rec.solution.free_cols) rec.free_bits.push_back(static_cast<int>(c));
    for (std::size_t i = 0; i < rec.solution.rank(); ++i)
        if (rec.solution.pivot_is_exact(i))
            rec.determined[static_cast<int>(rec.solution.pivot_cols[i])] = rec.solution.pivot_values[i] != 0;
    return rec;
}

namespace {

bool matches_all(std::uint64_t key, std::span<const KnownPair> pairs) {
    const RoundKeys rk = key_schedule(MasterKey{key});
    for (const auto& p : pairs)
        if (encrypt(p.pt, rk) != p.ct) return false;
    return true;
}

}  // namespace

BruteForceResult brute_force_remaining(const LinearRecovery& partial, std::span<const KnownPair> pairs,
                                       std::uint64_t budget, const std::map<int, bool>& revealed, unsigned threads) {
    if (pairs.empty()) throw std::invalid_argument("brute_force_remaining: no known plaintext/ciphertext pair");
    const auto& sol = partial.solution;

    // Toggling free bit f flips key bit f and every pivot whose row contains f.
    std::map<int, std::uint64_t> effect;
    for (int f : partial.free_bits) {
        std::uint64_t m = key_bit_mask(f);
        for (std::size_t i = 0; i < sol.rank(); ++i)
            if (sol.pivot_rows.get(i, static_cast<std::size_t>(f)))
                m ^= key_bit_mask(static_cast<int>(sol.pivot_cols[i]));
        effect[f] = m;
    }

    std::uint64_t base = 0;
    for (std::size_t i = 0; i < sol.rank(); ++i)
        if (sol.pivot_values[i]) base |= key_bit_mask(static_cast<int>(sol.pivot_cols[i]));
    std::vector<int> unknown;
    for (int f : partial.free_bits) {
        auto it = revealed.find(f);
        if (it == revealed.end()) unknown.push_back(f);
        else if (it->second) base ^= effect[f];
    }

    BruteForceResult res;
    res.unknown_bits = static_cast<int>(unknown.size());
    const int u = res.unknown_bits;
    // counter bit j drives unknown[u - 1 - j]
    std::vector<std::uint64_t> bit_effect(static_cast<std::size_t>(u));
    for (int j = 0; j < u; ++j) bit_effect[j] = effect[unknown[u - 1 - j]];
    const std::uint64_t space = u >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << u);
    const std::uint64_t limit = std::min(space, budget);

    auto key_at = [&](std::uint64_t idx) {
        std::uint64_t k = base;
        for (int j = 0; j < u && idx; ++j, idx >>= 1)
            if (idx & 1) k ^= bit_effect[j];
        return k;
    };
    // Scans [lo, hi); returns the first hit index or hi.
    auto scan = [&](std::uint64_t lo, std::uint64_t hi, const std::atomic<std::uint64_t>* stop) {
        std::uint64_t k = key_at(lo);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (stop && (idx & 0xFFF) == 0 && stop->load(std::memory_order_relaxed) < lo) return hi;
            if (matches_all(k, pairs)) return idx;
            // flip the bits that change from idx to idx + 1
            std::uint64_t changed = idx ^ (idx + 1);
            for (int j = 0; changed && j < u; ++j, changed >>= 1)
                if (changed & 1) k ^= bit_effect[j];
        }
        return hi;
    };

    std::uint64_t hit = limit;
    if (threads <= 1 || limit < (1u << 16)) {
        hit = scan(0, limit, nullptr);
    } else {
        constexpr std::uint64_t kChunk = 1u << 16;
        std::atomic<std::uint64_t> next{0}, best{limit};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::uint64_t lo = next.fetch_add(kChunk);
                    if (lo >= limit || lo > best.load()) return;
                    const std::uint64_t hi = std::min(limit, lo + kChunk);
                    const std::uint64_t h = scan(lo, hi, &best);
                    if (h < hi) {
                        std::uint64_t cur = best.load();
                        while (h < cur && !best.compare_exchange_weak(cur, h)) {
                        }
                    }
                }
            });
        }
        pool.clear();
        hit = best.load();
    }

    if (hit < limit) {
        const std::uint64_t key = key_at(hit);
        if (!matches_all(key, pairs)) throw std::logic_error("brute force hit failed re-verification");
        res.key = MasterKey{key};
        res.tried = hit + 1;
    } else {
        res.tried = limit;
        res.exhausted = true;
    }
    return res;
}

ComplexityReport complexity_report(const MaxtermDb& db) {
    ComplexityReport r;
    std::vector<Block32> seen;
    for (const auto& m : db.maxterms) {
        if (std::find(seen.begin(), seen.end(), m.cube.mask()) != seen.end()) continue;
        seen.push_back(m.cube.mask());
        r.chosen_plaintexts += std::uint64_t{1} << m.cube.size();
        ++r.cubes_by_size[m.cube.size()];
    }
    r.log2_plaintexts = r.chosen_plaintexts ? std::log2(static_cast<double>(r.chosen_plaintexts)) : 0.0;
    r.published_composition = r.cubes_by_size.size() == 2 && r.cubes_by_size.count(6) && r.cubes_by_size.at(6) == 31 &&
                          r.cubes_by_size.count(8) && r.cubes_by_size.at(8) == 1;
    if (r.published_composition) {
        r.note = "31 x 2^6 + 1 x 2^8 = " + std::to_string(r.chosen_plaintexts) + " = 2^" +
                 format_log2(r.log2_plaintexts) + ", not the published 2^" + format_log2(kPrintedDataLog2);
    }
    return r;
}

std::string format_log2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (int i : v) {
        if (!s.empty()) s += ',';
        s += std::to_string(i);
    }
    return s;
}

}  // namespace

std::string AttackReport::to_text() const {
    std::ostringstream os;
    os << "maxterms used:        " << maxterms << "\n";
    os << "equation rank:        " << rank << "\n";
    os << "determined key bits:  " << determined_bits.size() << "\n";
    for (const auto& [bit, v] : determined_bits) os << "  k" << bit << " = " << v << "\n";
    const std::size_t combos = relations.size() - std::min(relations.size(), determined_bits.size());
    if (combos) {
        os << "other relations:      " << combos << "\n";
        for (const auto& r : relations)
            if (r.find(" + ") != std::string::npos) os << "  " << r << "\n";
    }
    os << "free key bits:        " << free_bits.size() << "\n";
    os << "chosen plaintexts:    " << chosen_plaintext_count << " (2^" << format_log2(complexity.log2_plaintexts)
       << ")\n";
    if (!complexity.note.empty()) os << "  note: " << complexity.note << "\n";
    os << "victim leak queries:  " << victim_queries << "\n";
    os << "cube evaluations:     " << cube_evaluations << "\n";
    if (brute_force_run) {
        os << "brute force unknowns: " << brute_force_unknown_bits;
        if (revealed_bits) os << " (" << revealed_bits << " free bits revealed as a test aid)";
        os << "\n";
        os << "brute force trials:   " << brute_force_tried << " (2^"
           << format_log2(brute_force_tried ? std::log2(static_cast<double>(brute_force_tried)) : 0.0) << ")\n";
        if (recovered_key) os << "recovered key:        " << format_key_hex(*recovered_key) << "\n";
        else os << "recovered key:        none (" << (brute_force_exhausted ? "budget exhausted" : "not found") << ")\n";
    }
    os << "success:              " << (success ? "yes" : "no") << "\n";
    return os.str();
}

std::string AttackReport::to_kv() const {
    std::ostringstream os;
    os << "maxterms=" << maxterms << "\n";
    os << "rank=" << rank << "\n";
    std::string det;
    for (const auto& [bit, v] : determined_bits) {
        if (!det.empty()) det += ',';
        det += std::to_string(bit) + ":" + (v ? "1" : "0");
    }
    os << "determined_count=" << determined_bits.size() << "\n";
    os << "determined=" << det << "\n";
    os << "relations=" << relations.size() << "\n";
    os << "free_count=" << free_bits.size() << "\n";
    os << "free=" << join_ints(free_bits) << "\n";
    os << "chosen_plaintexts=" << chosen_plaintext_count << "\n";
    os << "chosen_plaintexts_log2=" << format_log2(complexity.log2_plaintexts) << "\n";
    os << "data_complexity_divergence=" << (complexity.published_composition ? 1 : 0) << "\n";
    os << "victim_queries=" << victim_queries << "\n";
    os << "cube_evaluations=" << cube_evaluations << "\n";
    if (brute_force_run) {
        os << "revealed_bits=" << revealed_bits << "\n";
        os << "brute_force_unknown_bits=" << brute_force_unknown_bits << "\n";
        os << "brute_force_tried=" << brute_force_tried << "\n";
        os << "brute_force_exhausted=" << (brute_force_exhausted ? 1 : 0) << "\n";
        if (recovered_key) os << "recovered_key=" << format_key_hex(*recovered_key) << "\n";
    }
    os << "success=" << (success ? 1 : 0) << "\n";
    return os.str();
}

}  // namespace sccube
