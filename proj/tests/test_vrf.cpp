#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "otr/vrf.hpp"

using namespace otr;

TEST_CASE("evaluation matches the reference computation") {
    // Recomputed by tools/oracle_values.py.
    const VrfOutput out = vrf_eval(sha256("k"), sha256("s"), 7);
    CHECK(out.proof.hex() == "1e595ccc6b198c2ccc32f1dd302e9663121ab25408bd91f8210f9dae8d008805");
    CHECK(out.value == 0.17401274568361325);
    CHECK(vrf_index(out.proof, 10) == 7);
}

TEST_CASE("a draw verifies and forgeries do not") {
    const Digest key = sha256("key");
    const Digest seed = sha256("seed");
    const VrfOutput out = vrf_eval(key, seed, 42);
    CHECK(vrf_verify(key, seed, 42, out.value, out.proof));
    CHECK_FALSE(vrf_verify(key, seed, 43, out.value, out.proof));
    CHECK_FALSE(vrf_verify(key, sha256("other"), 42, out.value, out.proof));
    CHECK_FALSE(vrf_verify(key, seed, 42, out.value + 1e-9, out.proof));
    Digest wrong = out.proof;
    wrong.bytes[0] ^= 1;
    CHECK_FALSE(vrf_verify(key, seed, 42, out.value, wrong));
}

TEST_CASE("values live in [0,1) and differ across heights") {
    const Digest key = sha256("key");
    const Digest seed = sha256("seed");
    double prev = -1.0;
    for (uint64_t h = 0; h < 1000; ++h) {
        const VrfOutput out = vrf_eval(key, seed, h);
        REQUIRE(out.value >= 0.0);
        REQUIRE(out.value < 1.0);
        REQUIRE(out.value != prev);
        prev = out.value;
    }
}

TEST_CASE("trigger frequency tracks the threshold at 3 sigma") {
    const Digest key = sha256("freq-key");
    const Digest seed = sha256("freq-seed");
    const double rho = 0.05;
    const uint64_t n = 200000;
    uint64_t hits = 0;
    for (uint64_t h = 0; h < n; ++h)
        if (vrf_eval(key, seed, h).value < rho) ++hits;
    const double sigma = std::sqrt(double(n) * rho * (1.0 - rho));
    CHECK(std::abs(double(hits) - double(n) * rho) < 3.0 * sigma);
}

TEST_CASE("index draws are uniform at 3 sigma per bucket") {
    const Digest key = sha256("idx-key");
    const Digest seed = sha256("idx-seed");
    const uint64_t n = 16, draws = 64000;
    uint64_t counts[16] = {0};
    for (uint64_t h = 0; h < draws; ++h)
        counts[vrf_index(vrf_eval(key, seed, h).proof, n)]++;
    const double expect = double(draws) / double(n);
    const double sigma = std::sqrt(expect * (1.0 - 1.0 / double(n)));
    for (uint64_t k = 0; k < n; ++k)
        CHECK(std::abs(double(counts[k]) - expect) < 3.0 * sigma);
}

TEST_CASE("index draws for n=1 always return 0") {
    const VrfOutput out = vrf_eval(sha256("a"), sha256("b"), 0);
    CHECK(vrf_index(out.proof, 1) == 0);
}
