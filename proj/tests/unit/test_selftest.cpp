#include "doctest.h"
#include "sccube/selftest.hpp"

using namespace sccube;

TEST_CASE("selftest passes on a correct build") {
    const SelftestReport r = run_selftest();
    CHECK(r.passed());
    REQUIRE(r.stages.size() == 4);
    CHECK(r.stages[0].name == "cipher-vectors");
    for (const auto& s : r.stages) CHECK_MESSAGE(s.passed, s.name << ": " << s.detail);
    CHECK(r.to_text().find("FAIL") == std::string::npos);
}

TEST_CASE("a corrupted round constant fails the cipher stage only") {
    SelftestOptions opts;
    opts.round_constants[7] ^= 1;
    const SelftestReport r = run_selftest(opts);
    CHECK_FALSE(r.passed());
    REQUIRE(r.stages.size() == 1);
    CHECK(r.stages[0].name == "cipher-vectors");
    CHECK_FALSE(r.stages[0].passed);
}

TEST_CASE("selftest is deterministic") {
    CHECK(run_selftest().to_text() == run_selftest().to_text());
    SelftestOptions other;
    other.seed = 99;
    CHECK(run_selftest(other).passed());
}
