#include "sccube/selftest.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <sstream>

#include "sccube/anf.hpp"
#include "sccube/cube_engine.hpp"
#include "sccube/gf2.hpp"

namespace sccube {

namespace {

StageResult cipher_stage(const SelftestOptions& opts) {
    StageResult r{"cipher-vectors", false, ""};
    const RoundKeys rk = key_schedule(MasterKey{0x1918111009080100ull}, opts.round_constants);
    const Block32 ct = encrypt(0x65656877u, rk);
    if (ct != 0x770D2C76u) {
        std::ostringstream os;
        os << "test vector mismatch: got " << std::hex << std::uppercase << ct;
        r.detail = os.str();
        return r;
    }
    if (decrypt(ct, rk) != 0x65656877u) {
        r.detail = "decrypt of test vector failed";
        return r;
    }
    std::mt19937_64 rng(opts.seed);
    for (int i = 0; i < 1000; ++i) {
        const RoundKeys k = key_schedule(MasterKey{rng()}, opts.round_constants);
        const auto pt = static_cast<Block32>(rng());
        if (decrypt(encrypt(pt, k), k) != pt) {
            r.detail = "round trip failed";
            return r;
        }
    }
    r.passed = true;
    r.detail = "test vector and 1000 round trips";
    return r;
}

// 8 plaintext variables (block bits 0..7) and 4 key variables (key bits 0..3)
std::uint32_t anf_assignment(Block32 pt, std::uint64_t key) {
    std::uint32_t a = 0;
    for (int v = 0; v < 8; ++v)
        if (pt & block_bit_mask(v)) a |= 1u << v;
    for (int v = 0; v < 4; ++v)
        if (key & key_bit_mask(v)) a |= 1u << (8 + v);
    return a;
}

StageResult superpoly_stage(const SelftestOptions& opts) {
    StageResult r{"cube-sum-superpoly", false, ""};
    std::mt19937_64 rng(opts.seed ^ 0x5A5A);
    int checks = 0;
    for (int t = 0; t < 50; ++t) {
        const AnfPoly p = AnfPoly::random(12, 4, 24, rng);
        auto oracle = [&p](Block32 pt, std::uint64_t key) { return p.eval(anf_assignment(pt, key)); };
        std::vector<int> idx;
        const int size = 1 + static_cast<int>(rng() % 4);
        while (static_cast<int>(idx.size()) < size) {
            const int v = static_cast<int>(rng() % 8);
            if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
        }
        const Cube cube(idx);
        std::uint32_t cube_vars = 0;
        for (int v : idx) cube_vars |= 1u << v;
        const AnfPoly sp = p.superpoly(cube_vars);
        for (std::uint32_t rest = 0; rest < (1u << 12); ++rest) {
            if (rest & cube_vars) continue;
            Block32 fixed = 0;
            std::uint64_t key = 0;
            for (int v = 0; v < 8; ++v)
                if (rest & (1u << v)) fixed |= block_bit_mask(v);
            for (int v = 0; v < 4; ++v)
                if (rest & (1u << (8 + v))) key |= key_bit_mask(v);
            if (cube_sum(oracle, cube, fixed, key) != sp.eval(rest)) {
                r.detail = "cube sum disagrees with superpoly of " + p.to_string();
                return r;
            }
            ++checks;
        }
    }
    r.passed = true;
    r.detail = std::to_string(checks) + " assignments over 50 polynomials";
    return r;
}

StageResult blr_stage(const SelftestOptions& opts) {
    StageResult r{"blr", false, ""};
    std::mt19937_64 rng(opts.seed ^ 0xB1B);
    const Cube cube({0, 1});
    auto with_superpoly = [](auto f) {
        return [f](Block32 pt, std::uint64_t key) {
            const bool x0 = pt & block_bit_mask(0), x1 = pt & block_bit_mask(1);
            return (x0 && x1 && f(key)) ^ x0;
        };
    };
    const auto linear = with_superpoly([](std::uint64_t k) { return bool((k >> 60) & 1) ^ bool((k >> 3) & 1); });
    const auto quad = with_superpoly([](std::uint64_t k) { return bool(k & key_bit_mask(1)) && bool(k & key_bit_mask(2)); });
    const auto one = with_superpoly([](std::uint64_t) { return true; });
    if (blr_test(linear, cube, 0, 300, rng).kind != Linearity::Linear) {
        r.detail = "linear superpoly rejected";
        return r;
    }
    if (blr_test(quad, cube, 0, 300, rng).kind != Linearity::Nonlinear) {
        r.detail = "quadratic superpoly accepted";
        return r;
    }
    if (blr_test(one, cube, 0, 300, rng).kind != Linearity::Constant) {
        r.detail = "constant superpoly misclassified";
        return r;
    }
    r.passed = true;
    r.detail = "linear, quadratic and constant superpolys classified";
    return r;
}

StageResult gf2_stage(const SelftestOptions& opts) {
    StageResult r{"gf2", false, ""};
    std::mt19937_64 rng(opts.seed ^ 0x6F2);
    for (int t = 0; t < 50; ++t) {
        const std::size_t rows = 1 + rng() % 10, cols = 1 + rng() % 10;
        Gf2Matrix m(rows, cols);
        std::vector<std::uint32_t> row_bits(rows, 0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (rng() & 1) {
                    m.set(i, j, true);
                    row_bits[i] |= 1u << j;
                }
        std::set<std::uint32_t> span;
        for (std::uint32_t s = 0; s < (1u << rows); ++s) {
            std::uint32_t v = 0;
            for (std::size_t i = 0; i < rows; ++i)
                if (s & (1u << i)) v ^= row_bits[i];
            span.insert(v);
        }
        if ((std::size_t{1} << row_reduce(m).rank) != span.size()) {
            r.detail = "rank disagrees with span enumeration";
            return r;
        }
    }
    for (int t = 0; t < 20; ++t) {
        const std::uint64_t key = rng();
        std::vector<LinearPoly> eqs;
        Gf2Basis basis;
        while (basis.rank() < 32) {
            const LinearPoly p{false, rng()};
            if (basis.insert(p.coeffs)) eqs.push_back(p);
        }
        Gf2System sys{Gf2Matrix::from_polys(eqs), {}};
        for (const auto& e : eqs) sys.rhs.push_back(e.eval(key));
        const Gf2Solution sol = solve(sys);
        std::vector<std::uint8_t> free_vals;
        for (auto c : sol.free_cols) free_vals.push_back((key >> (63 - c)) & 1);
        const auto x = sol.assign(free_vals);
        for (std::size_t c = 0; c < 64; ++c)
            if (x[c] != ((key >> (63 - c)) & 1)) {
                r.detail = "solution disagrees with generating key";
                return r;
            }
    }
    r.passed = true;
    r.detail = "50 span checks, 20 keyed 32x64 systems";
    return r;
}

}  // namespace

bool SelftestReport::passed() const {
    for (const auto& s : stages)
        if (!s.passed) return false;
    return !stages.empty();
}

std::string SelftestReport::to_text() const {
    std::ostringstream os;
    for (const auto& s : stages) os << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
    os << (passed() ? "selftest passed" : "selftest FAILED") << "\n";
    return os.str();
}

SelftestReport run_selftest(const SelftestOptions& opts) {
    SelftestReport rep;
    rep.stages.push_back(cipher_stage(opts));
    if (!rep.stages.back().passed) return rep;
    rep.stages.push_back(superpoly_stage(opts));
    rep.stages.push_back(blr_stage(opts));
    rep.stages.push_back(gf2_stage(opts));
    return rep;
}

}  // namespace sccube
