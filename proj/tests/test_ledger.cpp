#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "otr/errors.hpp"
#include "otr/ledger.hpp"
#include "otr/rng.hpp"

using namespace otr;

TEST_CASE("deposits accumulate and unknown participants read as zero") {
    StakeLedger l;
    CHECK(l.balance("nobody") == 0.0);
    l.deposit("alice", 100.0);
    l.deposit("alice", 50.0);
    CHECK(l.balance("alice") == 150.0);
    CHECK(l.total() == 150.0);
}

TEST_CASE("slash debits into the pot and logs the event") {
    StakeLedger l;
    l.deposit("seq", 200.0);
    const SlashEvent ev = l.slash("seq", 90.0, "offense", "b-1", 5.0);
    CHECK(ev.debited == 90.0);
    CHECK(ev.shortfall == 0.0);
    CHECK(l.balance("seq") == 110.0);
    CHECK(l.slashed_pot() == 90.0);
    CHECK(l.total() == 200.0);
    REQUIRE(l.slash_log().size() == 1);
    CHECK(l.slash_log()[0].batch_id == "b-1");
    CHECK(l.slash_log()[0].reason == "offense");
    CHECK(l.slash_log()[0].time == 5.0);
}

TEST_CASE("slash clamps at the available balance and records the shortfall") {
    StakeLedger l;
    l.deposit("thin", 30.0);
    const SlashEvent ev = l.slash("thin", 90.0, "offense", "b-1", 0.0);
    CHECK(ev.requested == 90.0);
    CHECK(ev.debited == 30.0);
    CHECK(ev.shortfall == 60.0);
    CHECK(l.balance("thin") == 0.0);
    CHECK(l.total() == 30.0);  // money that never existed is not created
}

TEST_CASE("one offense key is slashed at most once") {
    StakeLedger l;
    l.deposit("seq", 500.0);
    l.slash("seq", 90.0, "first", "b-1", 0.0);
    CHECK(l.already_slashed("b-1", "seq"));
    CHECK_FALSE(l.already_slashed("b-2", "seq"));
    CHECK_THROWS_AS(l.slash("seq", 90.0, "again", "b-1", 1.0), AlreadySlashed);
    l.slash("seq", 90.0, "other batch", "b-2", 1.0);
    CHECK(l.balance("seq") == 320.0);
}

TEST_CASE("bonds move balance into escrow and back out to a named winner") {
    StakeLedger l;
    l.deposit("fisher", 20.0);
    l.deposit("seq", 0.0);
    l.hold_bond("fisher", 9.0, "dispute/d-1");
    CHECK(l.balance("fisher") == 11.0);
    CHECK(l.held("dispute/d-1") == 9.0);
    CHECK(l.total_escrowed() == 9.0);
    CHECK(l.total() == 20.0);

    SUBCASE("returned to the owner") {
        l.release_bond("dispute/d-1", "fisher");
        CHECK(l.balance("fisher") == 20.0);
        CHECK(l.held("dispute/d-1") == 0.0);
    }
    SUBCASE("forfeited to the opponent") {
        l.release_bond("dispute/d-1", "seq");
        CHECK(l.balance("seq") == 9.0);
        CHECK(l.balance("fisher") == 11.0);
    }
    CHECK(l.total() == 20.0);
}

TEST_CASE("insufficient balance cannot be escrowed") {
    StakeLedger l;
    l.deposit("poor", 5.0);
    CHECK_THROWS_AS(l.hold_bond("poor", 9.0, "dispute/d-1"), InsufficientBond);
}

TEST_CASE("pot payouts cap at the pot") {
    StakeLedger l;
    l.deposit("seq", 100.0);
    l.slash("seq", 90.0, "offense", "b-1", 0.0);
    l.pay_from_pot("fisher", 45.0);
    CHECK(l.balance("fisher") == 45.0);
    CHECK(l.slashed_pot() == 45.0);
    CHECK_THROWS_AS(l.pay_from_pot("fisher", 46.0), Error);
    CHECK(l.total() == 100.0);
}

TEST_CASE("total is conserved across a randomized operation mix") {
    StakeLedger l;
    Rng rng(2718);
    l.deposit("a", 1000.0);
    l.deposit("b", 1000.0);
    double expected_total = 2000.0;
    int bonds = 0;
    for (int i = 0; i < 500; ++i) {
        switch (rng.uniform_index(4)) {
            case 0: {
                l.deposit("a", 1.0);
                expected_total += 1.0;
                break;
            }
            case 1: {
                const std::string key = "bond/" + std::to_string(bonds++);
                if (l.balance("b") >= 3.0) l.hold_bond("b", 3.0, key);
                break;
            }
            case 2: {
                const std::string batch = "b-" + std::to_string(i);
                if (l.balance("a") > 0.0) l.slash("a", 10.0, "fuzz", batch, double(i));
                break;
            }
            case 3: {
                for (int k = bonds - 1; k >= 0; --k) {
                    const std::string key = "bond/" + std::to_string(k);
                    if (l.held(key) > 0.0) {
                        l.release_bond(key, rng.uniform() < 0.5 ? "a" : "b");
                        break;
                    }
                }
                break;
            }
        }
        REQUIRE(l.total() == doctest::Approx(expected_total).epsilon(1e-12));
    }
}
