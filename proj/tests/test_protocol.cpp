#include <doctest.h>

#include <cmath>
#include <set>

#include "sass/protocol.hpp"
#include "sass/skolem.hpp"

using namespace sass;
using namespace sass::protocol;

namespace {

const std::vector<Channel> kMu{0, 0, 3, 1, 2, 1, 3, 2};

// Drives a receiver against a sender playing mu from the same origin. Every
// channel is blocked before frame `phi`; afterwards only `blocked` is.
ReceiverState drive(std::uint64_t phi, std::set<Channel> blocked, std::uint64_t slots) {
    ReceiverState r{skolem::EssSequence(kMu)};
    for (std::uint64_t t = 0; t < slots; ++t) {
        const Channel rx = r.channel();
        const bool pu = t / 8 < phi || blocked.count(rx) != 0;
        r.observe({rx == kMu[t % 8] && !pu, rx});
    }
    return r;
}

}  // namespace

TEST_CASE("search phase rotates by one shift per frame") {
    ReceiverState r{skolem::EssSequence(kMu)};
    for (std::uint64_t t = 0; t < 80; ++t) {
        CHECK(r.current_offset() == static_cast<std::int64_t>((t / 8) % 8));
        CHECK(r.channel() == kMu[(t % 8 + t / 8) % 8]);
        r.observe({false, r.channel()});
    }
    CHECK(r.phase() == ReceiverPhase::searching);
    CHECK_FALSE(r.first_delivery().has_value());
}

TEST_CASE("aligned first frame commits straight away") {
    // Channels 0 and 3 blocked: frame 0 delivers at slots 3, 4, 5, 7.
    const auto r = drive(0, {0, 3}, 8);
    REQUIRE(r.first_delivery().has_value());
    CHECK(r.first_delivery()->slot_in_frame == 3);
    CHECK(r.first_delivery()->channel == 1);
    CHECK(r.tau2() == 5u);
    CHECK(r.tau2_delivered());
    CHECK(r.calibration_case() == CalibrationCase::aligned);
    CHECK(r.committed_offset() == 0);
    CHECK(r.synced_from_frame() == 1u);
    CHECK(r.phase() == ReceiverPhase::synced);
}

TEST_CASE("top channel triggers the half-period probe") {
    // Frame 4 plays shift(mu, 4) = {2,1,3,2,0,0,3,1}; it meets mu on channel 3 at slots 2 and 6.
    auto r = drive(4, {1, 2}, 5 * 8);
    REQUIRE(r.first_delivery().has_value());
    CHECK(r.first_delivery()->frame == 4);
    CHECK(r.first_delivery()->slot_in_frame == 2);
    CHECK(r.first_delivery()->channel == 3);
    CHECK(r.tau2() == 6u);
    CHECK(r.phase() == ReceiverPhase::probing_half);
    CHECK(r.current_offset() == 4 + 4);  // phi + N'

    r = drive(4, {1, 2}, 6 * 8);
    CHECK(r.deliveries_in_frame(4) == 2);
    CHECK(r.deliveries_in_frame(5) == 4);
    CHECK(r.calibration_case() == CalibrationCase::half_period);
    CHECK(r.committed_offset() == 0);
    CHECK(r.synced_from_frame() == 6u);
}

TEST_CASE("missing second slot triggers the mirrored probes") {
    // Frame 6 plays {3,2,0,0,3,1,2,1}: one coincidence, channel 1 at slot 5.
    // Its twin at slot 7 is not a coincidence.
    const auto r = drive(6, {2, 3}, 9 * 8);
    REQUIRE(r.first_delivery().has_value());
    CHECK(r.first_delivery()->slot_in_frame == 5);
    CHECK(r.first_delivery()->channel == 1);
    CHECK(r.tau2() == 7u);
    CHECK_FALSE(r.tau2_delivered());
    CHECK(r.deliveries_in_frame(7) == 4);  // probe phi + 2 = shift 0
    CHECK(r.deliveries_in_frame(8) == 0);  // probe phi - 2 = shift 4, channel 3 blocked
    CHECK(r.calibration_case() == CalibrationCase::mirrored);
    CHECK(r.committed_offset() == 0);
    CHECK(r.synced_from_frame() == 9u);
}

TEST_CASE("every sender offset is recovered without PUs") {
    for (int n : {4, 5, 8, 9, 12, 13}) {
        const auto ess = skolem::ess_for_channels(n);
        const std::uint64_t t_len = ess.period();
        for (std::uint64_t delta = 0; delta < t_len; ++delta) {
            CAPTURE(n);
            CAPTURE(delta);
            ReceiverState r{ess};
            for (std::uint64_t t = 0; t < 5 * t_len; ++t) {
                const Channel rx = r.channel();
                r.observe({rx == ess[(t + delta) % t_len], rx});
            }
            CHECK(r.first_delivery()->frame == 0);
            CHECK(r.committed_offset() == static_cast<std::int64_t>(delta));
            CHECK(*r.synced_from_frame() <= 3);
        }
    }
}

TEST_CASE("a delivery on the wrong channel is a logic error") {
    ReceiverState r{skolem::EssSequence(kMu)};
    CHECK_THROWS_AS(r.observe({true, static_cast<Channel>(r.channel() + 1)}), std::logic_error);
    SassReceiver rx{skolem::EssSequence(kMu)};
    CHECK_THROWS_AS(rx.next_channel(3), std::logic_error);
}

TEST_CASE("sender plays mu forever") {
    SassSender s{skolem::EssSequence(kMu)};
    for (std::uint64_t t = 0; t < 50; ++t) CHECK(s.next_channel(t) == kMu[t % 8]);
}

TEST_CASE("rch is reproducible and uniform") {
    RchNode a(13, 42), b(13, 42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_channel(i) == b.next_channel(i));

    Rng r1(1), r2(2);
    const int n = 13;
    const int slots = 100000;
    int hits = 0;
    for (int i = 0; i < slots; ++i) hits += rch_channel(r1, n) == rch_channel(r2, n);
    const double p = 1.0 / n;
    const double sigma = std::sqrt(p * (1 - p) / slots);
    CHECK(std::abs(static_cast<double>(hits) / slots - p) < 3 * sigma);

    Rng r3(3);
    for (int i = 0; i < 100; ++i) CHECK(rch_channel(r3, 1) == 0);
}

TEST_CASE("css keeps rotating") {
    const skolem::EssSequence mu(kMu);
    CssReceiver css(mu);
    for (std::uint64_t t = 0; t < 200; ++t) CHECK(css.next_channel(t) == kMu[(t % 8 + t / 8) % 8]);
    CHECK_FALSE(css.summary().committed_offset.has_value());
}

TEST_CASE("protocol names") {
    CHECK(parse_protocol_kind("SASS") == ProtocolKind::sass);
    CHECK(parse_protocol_kind("rch") == ProtocolKind::rch);
    CHECK(parse_protocol_kind("Css") == ProtocolKind::css);
    CHECK_THROWS_AS(parse_protocol_kind("aloha"), std::invalid_argument);
    for (auto k : {ProtocolKind::sass, ProtocolKind::rch, ProtocolKind::css}) {
        CHECK(parse_protocol_kind(to_string(k)) == k);
    }
}
