#include <bit>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "sccube/anf.hpp"
#include "sccube/cube_engine.hpp"
#include "synthetic.hpp"

using namespace sccube;

namespace {

// ANF variable v (0-based) is plaintext bit v; all variables are public.
auto anf_oracle(const AnfPoly& p) {
    return [&p](Block32 pt, std::uint64_t) {
        std::uint32_t a = 0;
        for (int v = 0; v < p.nvars(); ++v)
            if (pt & block_bit_mask(v)) a |= 1u << v;
        return p.eval(a);
    };
}

std::uint32_t vars(std::initializer_list<int> one_based) {
    std::uint32_t m = 0;
    for (int v : one_based) m |= 1u << (v - 1);
    return m;
}

Block32 pt_of(std::uint32_t assignment, int nvars) {
    Block32 b = 0;
    for (int v = 0; v < nvars; ++v)
        if (assignment & (1u << v)) b |= block_bit_mask(v);
    return b;
}

bool key_bit(std::uint64_t k, int i) { return (k & key_bit_mask(i)) != 0; }

}  // namespace

TEST_CASE("Cube validation") {
    CHECK(Cube({5, 1, 3}).indexes() == std::vector<int>{1, 3, 5});
    CHECK(Cube({0}).mask() == 0x80000000u);
    CHECK(Cube({31}).mask() == 0x00000001u);
    CHECK(Cube({2, 0}).to_string() == "0,2");
    CHECK_THROWS_AS(Cube(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(Cube({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Cube({32}), std::invalid_argument);
    CHECK_THROWS_AS(Cube({-1}), std::invalid_argument);
}

TEST_CASE("cube_sum on the seven-variable example") {
    // p = x1x2x3 + x1x2x3x4 + x2x4x6 + x1x2x3x5x7, I = {1,2,3}
    const AnfPoly p(7, {vars({1, 2, 3}), vars({1, 2, 3, 4}), vars({2, 4, 6}), vars({1, 2, 3, 5, 7})});
    const std::uint32_t cube = vars({1, 2, 3});
    const AnfPoly expected(7, {0, vars({4}), vars({5, 7})});  // 1 + x4 + x5x7
    CHECK(p.superpoly(cube) == expected);

    const auto oracle = anf_oracle(p);
    const Cube c({0, 1, 2});
    for (std::uint32_t rest = 0; rest < 128; ++rest) {
        if (rest & cube) continue;
        REQUIRE(cube_sum(oracle, c, pt_of(rest, 7), 0) == expected.eval(rest));
    }
}

TEST_CASE("cube_sum on the five-variable summation table") {
    // p = x1x2x3x4 + x3x4 + x3 + x4x5 + x1x3 + x2x3, I = {1,2,3}: superpoly x4
    const AnfPoly p(5, {vars({1, 2, 3, 4}), vars({3, 4}), vars({3}), vars({4, 5}), vars({1, 3}), vars({2, 3})});
    CHECK(p.superpoly(vars({1, 2, 3})) == AnfPoly(5, {vars({4})}));

    // exhaustive sum of the eight rows for each (x4, x5)
    const auto oracle = anf_oracle(p);
    for (std::uint32_t x45 = 0; x45 < 4; ++x45) {
        const std::uint32_t rest = x45 << 3;
        bool brute = false;
        for (std::uint32_t c = 0; c < 8; ++c) brute ^= p.eval(rest | c);
        CHECK(brute == bool(x45 & 1));
        CHECK(cube_sum(oracle, Cube({0, 1, 2}), pt_of(rest, 5), 0) == brute);
    }
    // the printed row "x4 + x1x3 + x2x3 + 1" mentions cube variables, so it
    // cannot be the superpoly; it already disagrees at the all-zero point
    const AnfPoly printed(5, {vars({4}), vars({1, 3}), vars({2, 3}), 0});
    CHECK(printed != p.superpoly(vars({1, 2, 3})));
    CHECK(printed.eval(0) != p.superpoly(vars({1, 2, 3})).eval(0));
}

TEST_CASE("cube_sum of an oracle independent of the cube variables is zero") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const AnfPoly p = AnfPoly::random(12, 4, 30, rng);
        // shift every monomial off plaintext bits 12..17
        const Cube c({12, 13, 14, 15, 16, 17});
        const auto oracle = anf_oracle(p);
        CHECK_FALSE(cube_sum(oracle, c, Block32(rng()) & 0xFFF00000u, rng()));
    }
}

TEST_CASE("cube sum equals the symbolic superpoly (random polynomials)") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 60; ++t) {
        const int n = 6 + int(rng() % 7);
        const AnfPoly p = AnfPoly::random(n, 4, 40, rng);
        std::uint32_t cube = 0;
        const int size = 1 + int(rng() % 4);
        while (std::popcount(cube) < size) cube |= 1u << (rng() % n);
        std::vector<int> idx;
        for (int v = 0; v < n; ++v)
            if (cube & (1u << v)) idx.push_back(v);
        const AnfPoly sp = p.superpoly(cube);
        const auto oracle = anf_oracle(p);
        for (std::uint32_t rest = 0; rest < (1u << n); ++rest) {
            if (rest & cube) continue;
            REQUIRE(cube_sum(oracle, Cube(idx), pt_of(rest, n), 0) == sp.eval(rest));
        }
    }
}

TEST_CASE("BLR defect of k1*k2 over all 4-bit patterns") {
    // f(0) ^ f(x) ^ f(y) ^ f(x^y) for f = x1 x2
    int failures = 0;
    for (int pat = 0; pat < 16; ++pat) {
        const int x1 = pat & 1, x2 = pat >> 1 & 1, y1 = pat >> 2 & 1, y2 = pat >> 3 & 1;
        const int defect = 0 ^ (x1 & x2) ^ (y1 & y2) ^ ((x1 ^ y1) & (x2 ^ y2));
        CHECK(defect == ((x1 & y2) ^ (x2 & y1)));
        failures += defect;
    }
    CHECK(failures == 6);  // per-trial rejection probability 3/8
}

TEST_CASE("blr_test verdicts") {
    const Block32 cm = Cube({3, 9, 20}).mask();
    const Cube cube({3, 9, 20});
    std::mt19937_64 rng(7);

    SUBCASE("exactly linear") {
        synthetic::PlantedPoly p{cm, [](std::uint64_t k) { return key_bit(k, 3); },
                                 synthetic::random_remainder(cm, 40, 5, 6, rng)};
        for (int i = 0; i < 20; ++i) CHECK(blr_test(p, cube, 0, 300, rng).kind == Linearity::Linear);
    }
    SUBCASE("quadratic") {
        synthetic::PlantedPoly p{cm, [](std::uint64_t k) { return key_bit(k, 1) && key_bit(k, 2); },
                                 synthetic::random_remainder(cm, 40, 5, 6, rng)};
        for (int i = 0; i < 20; ++i) {
            const BlrVerdict v = blr_test(p, cube, 0, 300, rng);
            CHECK(v.kind == Linearity::Nonlinear);
            CHECK(v.trial_count <= 300);
        }
    }
    SUBCASE("constant one") {
        synthetic::PlantedPoly p{cm, [](std::uint64_t) { return true; }, {}};
        const BlrVerdict v = blr_test(p, cube, 0, 300, rng);
        CHECK(v.kind == Linearity::Constant);
        CHECK(v.trial_count == 300);
    }
    SUBCASE("single trial on a linear superpoly") {
        synthetic::PlantedPoly p{cm, [](std::uint64_t k) { return key_bit(k, 0); }, {}};
        CHECK(blr_test(p, cube, 0, 1, rng).kind == Linearity::Linear);
    }
    CHECK_THROWS_AS(blr_test(synthetic::PlantedPoly{cm, [](std::uint64_t) { return false; }, {}}, cube, 0, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("superpoly_reconstruct") {
    const Cube cube({0, 7, 15, 31});
    std::mt19937_64 rng(19);

    SUBCASE("1 + k11") {
        synthetic::PlantedPoly p{cube.mask(), [](std::uint64_t k) { return !key_bit(k, 11); }, {}};
        const auto sp = superpoly_reconstruct(p, cube, 0, rng);
        REQUIRE(sp.has_value());
        CHECK(sp->constant);
        CHECK(sp->variables() == std::vector<int>{11});
        CHECK(sp->to_string() == "1 + k11");
    }
    SUBCASE("zero superpoly is rejected") {
        synthetic::PlantedPoly p{cube.mask(), [](std::uint64_t) { return false; },
                                 synthetic::random_remainder(cube.mask(), 20, 4, 4, rng)};
        CHECK_FALSE(superpoly_reconstruct(p, cube, 0, rng).has_value());
    }
    SUBCASE("planted linear superpolys in random high-degree remainders") {
        for (int t = 0; t < 20; ++t) {
            LinearPoly planted{bool(rng() & 1), rng() & rng()};
            if (planted.is_constant()) planted.coeffs = key_bit_mask(int(rng() % 64));
            synthetic::PlantedPoly p{cube.mask(), [planted](std::uint64_t k) { return planted.eval(k); },
                                     synthetic::random_remainder(cube.mask(), 60, 8, 8, rng)};
            const auto sp = superpoly_reconstruct(p, cube, Block32(rng()), rng, 20);
            REQUIRE(sp.has_value());
            CHECK(*sp == planted);
        }
    }
    SUBCASE("nonlinear superpoly fails the post-check") {
        synthetic::PlantedPoly p{cube.mask(), [](std::uint64_t k) { return key_bit(k, 1) && key_bit(k, 2); }, {}};
        CHECK_FALSE(superpoly_reconstruct(p, cube, 0, rng, 100).has_value());
    }
}

TEST_CASE("maxterm_search") {
    SearchConfig cfg;
    cfg.cube_sizes = {6};
    cfg.rng_seed = 5;

    // every size-6 cube is a maxterm whose superpoly is a parity chosen by
    // hashing the cube
    auto hashed = [](Block32 pt, std::uint64_t key) {
        if (std::popcount(pt) != 6) return false;
        const std::uint64_t h = detail::candidate_seed(pt, 0);
        return bool(std::popcount(h & key) & 1);
    };

    SUBCASE("budget 0") {
        cfg.candidate_budget = 0;
        const SearchResult r = maxterm_search(hashed, cfg);
        CHECK(r.maxterms.empty());
        CHECK(r.rank == 0);
        CHECK_FALSE(r.reached_target);
        CHECK_FALSE(r.diagnostic.empty());
    }
    SUBCASE("every candidate accepted until the target rank") {
        cfg.candidate_budget = 100;
        cfg.target_rank = 10;
        const SearchResult r = maxterm_search(hashed, cfg);
        CHECK(r.rank == 10);
        CHECK(r.reached_target);
        CHECK(r.maxterms.size() == 10);
        CHECK(r.stats.candidates_tried == 10);
        for (const auto& m : r.maxterms) CHECK(m.cube.size() == 6);
    }
    SUBCASE("verification rejects nonlinear superpolys that slip through BLR") {
        cfg.candidate_budget = 200;
        cfg.blr_trials = 1;
        cfg.target_rank = 0;
        auto quad = [](Block32 pt, std::uint64_t key) {
            return std::popcount(pt) == 6 && (key_bit(key, 5) ^ (key_bit(key, 1) && key_bit(key, 2)));
        };
        const SearchResult r = maxterm_search(quad, cfg);
        CHECK(r.maxterms.empty());
        CHECK(r.stats.verify_rejected > 0);
        CHECK(r.stats.verify_rejected + r.stats.blr_nonlinear + r.stats.reconstruct_rejected +
                  r.stats.constant_screened ==
              200);
    }
    SUBCASE("invalid config") {
        cfg.cube_sizes = {};
        CHECK_THROWS_AS(maxterm_search(hashed, cfg), std::invalid_argument);
        cfg.cube_sizes = {40};
        CHECK_THROWS_AS(maxterm_search(hashed, cfg), std::invalid_argument);
        cfg.cube_sizes = {6};
        cfg.blr_trials = 0;
        CHECK_THROWS_AS(maxterm_search(hashed, cfg), std::invalid_argument);
    }
}

TEST_CASE("maxterm_search on Simeck is seeded, sound and thread-independent") {
    SearchConfig cfg;
    cfg.candidate_budget = 600;
    cfg.rng_seed = 99;
    const SimeckLeak leak(cfg.leak);

    const SearchResult a = maxterm_search(leak, cfg);
    const SearchResult b = maxterm_search(leak, cfg);
    cfg.threads = 3;
    const SearchResult c = maxterm_search(leak, cfg);

    REQUIRE_FALSE(a.maxterms.empty());
    CHECK(a.maxterms == b.maxterms);
    CHECK(a.maxterms == c.maxterms);
    CHECK(a.stats.candidates_tried == c.stats.candidates_tried);
    CHECK(a.rank == c.rank);

    std::mt19937_64 rng(1234);
    for (const auto& m : a.maxterms) {
        CHECK_FALSE(m.superpoly.is_constant());
        for (int i = 0; i < 100; ++i) {
            const std::uint64_t k = rng();
            REQUIRE(cube_sum(leak, m.cube, m.fixed_bits, k) == m.superpoly.eval(k));
        }
    }
}

TEST_CASE("fixed_bit_value selects the non-cube plaintext") {
    const Cube c({1, 2});
    CHECK(fixed_pattern(c, false) == 0u);
    CHECK(fixed_pattern(c, true) == ~c.mask());
}
