#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sass/skolem.hpp"

using namespace sass;
using namespace sass::skolem;

namespace {

std::vector<int> to_int(std::span<const Channel> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("verify_skolem accepts the order-3 and order-4 sequences") {
    const std::vector<int> s3{3, 1, 2, 1, 3, 2};
    CHECK(verify_skolem(s3, Base::one));
    const std::vector<int> e3{0, 0, 3, 1, 2, 1, 3, 2};
    CHECK(verify_skolem(e3, Base::zero));
    CHECK_FALSE(verify_skolem(e3, Base::one));
}

TEST_CASE("verify_skolem rejects malformed input") {
    CHECK_FALSE(verify_skolem(std::vector<int>{}, Base::one));
    CHECK_FALSE(verify_skolem(std::vector<int>{1, 1, 2}, Base::one));
    CHECK_FALSE(verify_skolem(std::vector<int>{1, 1}, Base::one));       // gap 1, needs 2
    CHECK_FALSE(verify_skolem(std::vector<int>{3, 1, 2, 1, 3, 3}, Base::one));
    CHECK_FALSE(verify_skolem(std::vector<int>{3, 1, 2, 1, 4, 2}, Base::one));
    CHECK_FALSE(verify_skolem(std::vector<int>{-1, 1, 2, 1, 3, 2}, Base::one));
}

TEST_CASE("existence follows the mod-4 rule") {
    for (int n = 1; n <= 40; ++n) CHECK(order_exists(n) == (n % 4 == 0 || n % 4 == 3));
    CHECK_FALSE(order_exists(0));
    CHECK_FALSE(order_exists(-3));
}

TEST_CASE("construct_skolem throws for orders that cannot exist") {
    CHECK_THROWS_AS(construct_skolem(1), ExistenceError);
    CHECK_THROWS_AS(construct_skolem(5), ExistenceError);
    CHECK_THROWS_AS(construct_skolem(0), ExistenceError);
    try {
        construct_skolem(6);
        FAIL("expected ExistenceError");
    } catch (const ExistenceError& e) {
        CHECK(e.order() == 6);
        CHECK(std::string(e.what()).find("0 or 3 modulo 4") != std::string::npos);
    }
}

TEST_CASE("small orders come out as expected") {
    const auto three = construct_skolem(3);
    CHECK(std::vector<int>(three.values().begin(), three.values().end()) == std::vector<int>{3, 1, 2, 1, 3, 2});
    CHECK(extend_to_ess(construct_skolem(3)).values().size() == 8);
    const auto four = ess_for_channels(4);
    CHECK(to_int(four.values()) == std::vector<int>{0, 0, 3, 1, 2, 1, 3, 2});
    CHECK(four.channel_count() == 4);
    CHECK(four.period() == 8);
    CHECK(to_int(ess_for_channels(1).values()) == std::vector<int>{0, 0});
}

TEST_CASE("constructed sequences validate for every admissible order up to 24") {
    for (int n = 3; n <= 24; ++n) {
        if (!order_exists(n)) continue;
        CAPTURE(n);
        const auto s = construct_skolem(n);
        const std::vector<int> v(s.values().begin(), s.values().end());
        CHECK(oracle::is_skolem(v, 1));
        CHECK(verify_skolem(v, Base::one));
        const auto e = extend_to_ess(s);
        CHECK(e.channel_count() == n + 1);
        CHECK(oracle::is_skolem(to_int(e.values()), 0));
    }
}

TEST_CASE("the direct construction also holds far beyond the test range") {
    for (int n : {27, 28, 63, 64, 127, 128, 251, 252}) {
        CAPTURE(n);
        const auto s = construct_skolem(n);
        CHECK(oracle::is_skolem({s.values().begin(), s.values().end()}, 1));
    }
}

TEST_CASE("constructions belong to the brute-force solution set for orders up to 8") {
    // Langford pair counts, reversals included: 2, 2, 52, 300.
    const std::map<int, std::size_t> known{{3, 2}, {4, 2}, {7, 52}, {8, 300}};
    for (const auto& entry : known) {
        const int n = entry.first;
        const std::size_t count = entry.second;
        CAPTURE(n);
        const auto all = oracle::all_skolem(n);
        CHECK(all.size() == count);
        const std::set<std::vector<int>> set(all.begin(), all.end());
        const auto s = construct_skolem(n);
        CHECK(set.count({s.values().begin(), s.values().end()}) == 1);

        std::set<std::vector<int>> seen;
        const auto visited = enumerate_skolem(n, [&](std::span<const int> v) {
            seen.insert({v.begin(), v.end()});
            return true;
        });
        CHECK(visited == count);
        CHECK(seen == set);

        const auto bt = backtrack_skolem(n);
        REQUIRE(bt.has_value());
        CHECK(set.count(*bt) == 1);
    }
    CHECK_FALSE(backtrack_skolem(5).has_value());
    CHECK(oracle::all_skolem(5).empty());
    CHECK(oracle::all_skolem(6).empty());
}

TEST_CASE("enumerate_skolem stops when the visitor says so") {
    std::size_t calls = 0;
    enumerate_skolem(7, [&](std::span<const int>) { return ++calls < 3; });
    CHECK(calls == 3);
}

TEST_CASE("verify_skolem agrees with the oracle on mutated sequences") {
    std::mt19937_64 rng(20240611);
    std::size_t rejected = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        static const int orders[] = {3, 4, 7, 8, 11, 12, 15, 16};
        const int n = orders[rng() % std::size(orders)];
        const auto s = construct_skolem(n);
        std::vector<int> v(s.values().begin(), s.values().end());
        switch (rng() % 4) {
            case 0: {  // swap two cells holding different values
                std::size_t a = rng() % v.size(), b = rng() % v.size();
                while (v[a] == v[b]) b = rng() % v.size();
                std::swap(v[a], v[b]);
                break;
            }
            case 1:  // overwrite one cell
                v[rng() % v.size()] = 1 + static_cast<int>(rng() % (n + 1));
                if (oracle::is_skolem(v, 1)) v[0] = n + 1;
                break;
            case 2:  // drop a cell
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(rng() % v.size()));
                break;
            default: {  // swap neighbours
                const std::size_t a = rng() % (v.size() - 1);
                std::swap(v[a], v[a + 1]);
                break;
            }
        }
        const bool expect = oracle::is_skolem(v, 1);
        CHECK(verify_skolem(v, Base::one) == expect);
        if (!expect) ++rejected;
    }
    CHECK(rejected > trials * 9 / 10);
}

TEST_CASE("SkolemSequence and EssSequence refuse invalid contents") {
    CHECK_THROWS_AS(SkolemSequence(std::vector<int>{1, 2, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(EssSequence(std::vector<Channel>{0, 1, 0, 1}), std::invalid_argument);
    CHECK_NOTHROW(EssSequence(std::vector<Channel>{0, 0, 3, 1, 2, 1, 3, 2}));
}

TEST_CASE("channel plans") {
    SUBCASE("N=3 padding adds one alias channel") {
        const auto p = make_channel_plan(3, PlanMode::padding);
        CHECK(p.effective_count() == 4);
        CHECK(p.physical(3) == 0);
        CHECK(p.physical(2) == 2);
    }
    SUBCASE("N=7") {
        CHECK(make_channel_plan(7, PlanMode::padding).effective_count() == 8);
        const auto d = make_channel_plan(7, PlanMode::downsizing);
        CHECK(d.effective_count() == 5);
        CHECK(d.discarded() == std::vector<Channel>{5, 6});
    }
    SUBCASE("N=15 downsizes to 13") {
        CHECK(make_channel_plan(15, PlanMode::downsizing).effective_count() == 13);
        CHECK(make_channel_plan(15, PlanMode::padding).effective_count() == 16);
    }
    SUBCASE("padding adds at most two channels") {
        for (int n = 1; n <= 64; ++n) {
            const auto p = make_channel_plan(n, PlanMode::padding);
            const int extra = p.effective_count() - n;
            CHECK(extra >= 0);
            CHECK(extra <= 2);
            CHECK((p.effective_count() % 4 == 0 || p.effective_count() % 4 == 1));
            for (int c = 0; c < p.effective_count(); ++c) CHECK(p.physical(static_cast<Channel>(c)) < n);
        }
    }
    SUBCASE("bad channel counts") {
        CHECK_THROWS(make_channel_plan(0, PlanMode::padding));
        CHECK_THROWS(make_channel_plan(256, PlanMode::downsizing));
        CHECK_THROWS(make_channel_plan(255, PlanMode::padding));  // would need 256
        CHECK(make_channel_plan(255, PlanMode::downsizing).effective_count() == 253);
    }
    CHECK(parse_plan_mode("downsizing") == PlanMode::downsizing);
    CHECK_THROWS(parse_plan_mode("shrink"));
}
