#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sass/hopping.hpp"
#include "sass/simenv.hpp"

using namespace sass;
using namespace sass::sim;

TEST_CASE("PU duty cycle matches the intensity formula") {
    for (double p : {0.25, 0.5, 0.75}) {
        CAPTURE(p);
        const auto cfg = pu_for_intensity(p, 6, 12);
        CHECK(cfg.occupied_channels == 6);
        CHECK(pu_intensity(6, cfg) == doctest::Approx(p));
        Rng rng(derive_seed(11, static_cast<std::uint64_t>(p * 100)));
        PuTraffic pu(6, cfg, rng);
        std::uint64_t busy = 0;
        const std::uint64_t slots = 200000;
        for (std::uint64_t t = 0; t < slots; ++t) {
            for (Channel c = 0; c < 6; ++c) busy += pu.busy(c);
            pu.advance(rng);
        }
        CHECK(std::abs(static_cast<double>(busy) / (6.0 * slots) - p) < 0.02);
    }
}

TEST_CASE("partial PU occupancy") {
    PuConfig cfg{3, 12, 12.0};
    CHECK(pu_intensity(12, cfg) == doctest::Approx(0.125));
    Rng rng(5);
    PuTraffic pu(12, cfg, rng);
    CHECK(pu.occupied().size() == 3);
    for (int t = 0; t < 1000; ++t) {
        for (Channel c = 0; c < 12; ++c) {
            const bool listed = std::find(pu.occupied().begin(), pu.occupied().end(), c) != pu.occupied().end();
            if (!listed) CHECK_FALSE(pu.busy(c));
        }
        pu.advance(rng);
    }
}

TEST_CASE("PU parameters are checked") {
    CHECK_THROWS(pu_for_intensity(1.0, 4, 12));
    CHECK_THROWS(pu_for_intensity(-0.1, 4, 12));
    CHECK(pu_for_intensity(0.0, 4, 12).occupied_channels == 0);
    SimConfig c;
    c.pu = {16, 12, 1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.channels = 3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // downsizes below 4
    c.plan_mode = PlanMode::padding;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("idle periods are at least one slot") {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) CHECK(draw_idle_slots(rng, 0.3) >= 1);
}

TEST_CASE("slot adjudication against recomputed schedules") {
    Rng pick(2718);
    for (int trial = 0; trial < 100; ++trial) {
        SimConfig c;
        c.channels = 4 + static_cast<int>(pick.below(14));
        c.plan_mode = pick.below(2) ? PlanMode::padding : PlanMode::downsizing;
        c.protocol = static_cast<ProtocolKind>(pick.below(3));
        const double p = 0.25 * static_cast<double>(pick.below(4));
        c.pu = pu_for_intensity(p, c.channels, 1 + static_cast<int>(pick.below(15)));
        c.horizon = 300;
        c.seed = pick.next();
        if (pick.below(2)) c.drift = static_cast<std::int64_t>(pick.below(500)) - 100;
        CAPTURE(trial);
        CAPTURE(c.channels);
        CAPTURE(p);

        const auto plan = skolem::make_channel_plan(c.channels, c.plan_mode);
        const auto mu = skolem::ess_for_channels(plan.effective_count());
        const auto period = static_cast<std::int64_t>(mu.period());
        const auto trace = World(c, 0).finish();
        REQUIRE(trace.horizon() == c.horizon);

        const auto drift = trace.summary.drift;
        CHECK(drift >= 0);
        if (c.drift) CHECK(drift == (*c.drift < 0 ? hopping::floor_mod(*c.drift, period) : *c.drift));
        else CHECK(drift < 2 * plan.effective_count() * plan.effective_count());

        const hopping::DriftedView sender(hopping::ChannelSchedule::constant(mu, 0), 0);
        const hopping::DriftedView searching(hopping::ChannelSchedule::rotating(mu), drift);
        const auto& ps = trace.summary.protocol;
        std::optional<hopping::DriftedView> synced;
        if (ps.committed_offset) synced.emplace(hopping::ChannelSchedule::constant(mu, *ps.committed_offset), drift);

        std::optional<std::uint64_t> first;
        for (std::size_t i = 0; i < trace.slots.size(); ++i) {
            const auto& s = trace.slots[i];
            const auto g = static_cast<std::int64_t>(s.global_slot);
            CHECK(g == drift + static_cast<std::int64_t>(i));
            if (c.protocol != ProtocolKind::rch) CHECK(s.tx == *sender.channel_at_global(g));
            const std::uint64_t frame = i / mu.period();
            if (c.protocol == ProtocolKind::css ||
                (c.protocol == ProtocolKind::sass && (!ps.first_delivery_frame || frame <= *ps.first_delivery_frame))) {
                CHECK(s.rx == *searching.channel_at_global(g));
            }
            if (c.protocol == ProtocolKind::sass && ps.synced_from_frame && frame >= *ps.synced_from_frame) {
                CHECK(s.rx == *synced->channel_at_global(g));
            }
            const bool same = plan.physical(s.tx) == plan.physical(s.rx);
            if (same) CHECK(s.pu_tx == s.pu_rx);
            if (p == 0.0) CHECK_FALSE(s.pu_rx);
            CHECK(s.delivered == (same && !s.pu_rx));
            CHECK(trace.delivered[i] == s.delivered);
            if (s.delivered && !first) first = i;
        }
        CHECK(trace.summary.first_delivery == first);
        if (c.protocol == ProtocolKind::css) CHECK_FALSE(ps.committed_offset.has_value());
    }
}

TEST_CASE("PU-blocked coincidences are not deliveries") {
    SimConfig c;
    c.channels = 8;
    c.pu = pu_for_intensity(0.75, 8, 12);
    c.horizon = 2000;
    c.seed = 77;
    const auto trace = World(c, 0).finish();
    std::size_t blocked = 0;
    for (const auto& s : trace.slots) {
        if (s.tx == s.rx && s.pu_rx) {
            ++blocked;
            CHECK_FALSE(s.delivered);
        }
        if (s.pu_rx) CHECK_FALSE(s.delivered);
    }
    CHECK(blocked > 0);
}

TEST_CASE("results do not depend on the worker count") {
    SimConfig c;
    c.pu = pu_for_intensity(0.5, 15, 12);
    c.pairs = 40;
    c.horizon = 400;
    c.seed = 9;
    c.workers = 1;
    const auto one = run(c);
    c.workers = 4;
    const auto four = run(c);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].delivered == four[i].delivered);
        CHECK(one[i].summary.drift == four[i].summary.drift);
        CHECK(one[i].summary.protocol.committed_offset == four[i].summary.protocol.committed_offset);
    }
    std::ostringstream a, b;
    write_slot_records(a, one);
    write_slot_records(b, four);
    CHECK(a.str() == b.str());
}

TEST_CASE("different seeds give different runs") {
    SimConfig c;
    c.pu = pu_for_intensity(0.25, 15, 12);
    c.pairs = 8;
    c.horizon = 300;
    c.seed = 1;
    const auto x = run(c);
    c.seed = 2;
    const auto y = run(c);
    bool differ = false;
    for (std::size_t i = 0; i < x.size(); ++i) differ |= x[i].delivered != y[i].delivered;
    CHECK(differ);
}

TEST_CASE("PU-free drift sweep") {
    for (int n : {4, 5, 8, 9}) {
        CAPTURE(n);
        const std::uint64_t bound = 4ULL * n * (n - 1);
        const auto sweep = sweep_drifts(n, std::max<std::uint64_t>(bound, 12ULL * n));
        CHECK(sweep.size() == static_cast<std::size_t>(2 * n * n));
        for (const auto& e : sweep) {
            CAPTURE(e.drift);
            REQUIRE(e.first_delivery.has_value());
            CHECK(*e.first_delivery < 2u * n);
            CHECK(e.protocol.first_delivery_frame == 0u);
            CHECK(*e.protocol.synced_from_frame <= 3u);
            CHECK(e.protocol.committed_offset == e.drift % (2 * n));
            CHECK_FALSE(e.missync);
            CHECK(e.delivers_after_sync);
        }
    }
    CHECK_THROWS(sweep_drifts(6, 100));
}

TEST_CASE("slot records are one JSON object per line") {
    SimConfig c;
    c.channels = 4;
    c.plan_mode = PlanMode::padding;
    c.horizon = 3;
    c.drift = 2;
    std::ostringstream out;
    const auto traces = run(c);
    write_slot_records(out, traces);
    std::istringstream in(out.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(line.front() == '{');
        CHECK(line.find("\"run\":0") != std::string::npos);
    }
    CHECK(lines == 3);
    CHECK(out.str().rfind("{\"run\":0,\"slot\":2,", 0) == 0);
}
