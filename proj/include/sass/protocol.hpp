#pragma once

// Per-slot protocol state machines: the SASS sender and self-calibrating
// receiver, plus the RCH and CSS baselines, behind one interface.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sass/hopping.hpp"
#include "sass/rng.hpp"
#include "sass/skolem.hpp"

namespace sass::protocol {

using skolem::EssSequence;

/// What a node learns after a slot: whether a broadcast got through, and on
/// which effective channel it was tuned.
struct SlotObservation {
    bool delivered = false;
    Channel channel = 0;
};

/// How the receiver resolved its clock offset after the first delivery.
enum class CalibrationCase {
    aligned,      // second occurrence of the delivery channel also delivered
    half_period,  // delivery on channel N'-1: offset 0 or N'
    mirrored,     // single delivery: offset +(alpha+1) or -(alpha+1)
};

std::string_view to_string(CalibrationCase c) noexcept;

/// End-of-run facts a protocol exposes for reporting. Never consulted while
/// adjudicating slots.
struct ProtocolSummary {
    std::optional<std::uint64_t> first_delivery_frame;
    std::optional<CalibrationCase> calibration_case;
    /// Shift s, in [0, T), such that the node plays shift(mu, s) every frame.
    std::optional<std::int64_t> committed_offset;
    /// First local frame played on the committed schedule.
    std::optional<std::uint64_t> synced_from_frame;
};

class Protocol {
public:
    virtual ~Protocol() = default;

    /// Channel for this node's local slot. Slots are requested in order,
    /// exactly once each, and each is followed by one observe() call.
    virtual Channel next_channel(std::uint64_t local_slot) = 0;
    virtual void observe(const SlotObservation& obs) = 0;

    virtual std::string_view name() const noexcept = 0;
    virtual ProtocolSummary summary() const { return {}; }
};

enum class ProtocolKind { sass, rch, css };

std::string_view to_string(ProtocolKind kind) noexcept;
/// Accepts "sass", "rch", "css" in any case.
ProtocolKind parse_protocol_kind(std::string_view text);

// ---------------------------------------------------------------------------
// SASS

/// Plays mu on every frame of its own clock.
class SassSender final : public Protocol {
public:
    explicit SassSender(EssSequence ess) : ess_(std::move(ess)) {}

    Channel channel_at(std::uint64_t t) const noexcept { return ess_[t % ess_.period()]; }

    Channel next_channel(std::uint64_t local_slot) override { return channel_at(local_slot); }
    void observe(const SlotObservation&) override {}
    std::string_view name() const noexcept override { return "sass"; }

private:
    EssSequence ess_;
};

enum class ReceiverPhase { searching, probing_half, probing_plus, probing_minus, synced };

std::string_view to_string(ReceiverPhase phase) noexcept;

/// Where and on what channel the receiver first heard the sender.
struct FirstDelivery {
    std::size_t slot_in_frame = 0;  // tau_1
    Channel channel = 0;            // alpha
    std::uint64_t frame = 0;        // phi
};

/// The SASS receiver. Frames are 0-based: while searching, frame n plays
/// shift(mu, n). After the first delivery in frame phi the receiver finishes
/// that frame, then either commits (aligned), probes shift(mu, phi + N') for
/// one frame (half_period), or probes shift(mu, phi + alpha + 1) and
/// shift(mu, phi - alpha - 1) for one frame each (mirrored), and commits to
/// whichever candidate saw at least as many deliveries as the other.
class ReceiverState {
public:
    explicit ReceiverState(EssSequence ess);

    ReceiverPhase phase() const noexcept { return phase_; }
    std::uint64_t local_slot() const noexcept { return local_slot_; }
    std::uint64_t frame_index() const noexcept { return local_slot_ / period(); }
    std::size_t slot_in_frame() const noexcept { return static_cast<std::size_t>(local_slot_ % period()); }
    std::size_t period() const noexcept { return ess_.period(); }
    int channel_count() const noexcept { return ess_.channel_count(); }
    const EssSequence& ess() const noexcept { return ess_; }

    const std::optional<FirstDelivery>& first_delivery() const noexcept { return first_; }
    /// In-frame slot of the other occurrence of alpha in frame phi.
    std::optional<std::size_t> tau2() const noexcept { return tau2_; }
    bool tau2_delivered() const noexcept { return tau2_delivered_; }
    /// SB[frame]; zero for frames with no deliveries or no longer retained.
    std::uint32_t deliveries_in_frame(std::uint64_t frame) const;
    std::optional<std::int64_t> committed_offset() const noexcept { return committed_; }
    std::optional<CalibrationCase> calibration_case() const noexcept { return case_; }
    std::optional<std::uint64_t> synced_from_frame() const noexcept { return synced_from_; }

    /// Shift of mu played in the current frame.
    std::int64_t current_offset() const noexcept;
    /// Channel for the current local slot.
    Channel channel() const noexcept;

    /// Consumes the outcome of the current slot and advances one slot.
    /// Throws std::logic_error if a delivery is reported on a channel other
    /// than channel().
    void observe(const SlotObservation& obs);

    ProtocolSummary summary() const;

private:
    void end_of_frame(std::uint64_t frame);
    void commit(std::int64_t offset, std::uint64_t frame);

    EssSequence ess_;
    ReceiverPhase phase_ = ReceiverPhase::searching;
    std::uint64_t local_slot_ = 0;
    std::optional<FirstDelivery> first_;
    std::optional<std::size_t> tau2_;
    bool tau2_delivered_ = false;
    std::map<std::uint64_t, std::uint32_t> sb_;
    std::optional<std::int64_t> committed_;
    std::optional<CalibrationCase> case_;
    std::optional<std::uint64_t> synced_from_;
};

class SassReceiver final : public Protocol {
public:
    explicit SassReceiver(EssSequence ess) : state_(std::move(ess)) {}

    const ReceiverState& state() const noexcept { return state_; }

    Channel next_channel(std::uint64_t local_slot) override;
    void observe(const SlotObservation& obs) override { state_.observe(obs); }
    std::string_view name() const noexcept override { return "sass"; }
    ProtocolSummary summary() const override { return state_.summary(); }

private:
    ReceiverState state_;
};

// ---------------------------------------------------------------------------
// Baselines

/// Independent uniform channel every slot.
Channel rch_channel(Rng& rng, int channel_count);

class RchNode final : public Protocol {
public:
    RchNode(int channel_count, std::uint64_t seed);

    Channel next_channel(std::uint64_t local_slot) override;
    void observe(const SlotObservation& obs) override;
    std::string_view name() const noexcept override { return "rch"; }

private:
    int channel_count_;
    Rng rng_;
    Channel last_ = 0;
};

/// Frame n plays shift(mu, n) forever; SASS searching without calibration.
Channel css_receiver_channel(std::uint64_t local_slot, const EssSequence& mu) noexcept;

class CssReceiver final : public Protocol {
public:
    explicit CssReceiver(EssSequence ess) : ess_(std::move(ess)) {}

    Channel next_channel(std::uint64_t local_slot) override { return css_receiver_channel(local_slot, ess_); }
    void observe(const SlotObservation&) override {}
    std::string_view name() const noexcept override { return "css"; }

private:
    EssSequence ess_;
};

/// Sender side: SASS and CSS share the mu-repeating sender; RCH hops randomly.
std::unique_ptr<Protocol> make_sender(ProtocolKind kind, const EssSequence& ess, std::uint64_t seed);
std::unique_ptr<Protocol> make_receiver(ProtocolKind kind, const EssSequence& ess, std::uint64_t seed);

}  // namespace sass::protocol
