#pragma once

// Slotted-time simulation of one broadcast sender and one receiver under
// primary-user (PU) traffic and clock drift.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sass/protocol.hpp"
#include "sass/rng.hpp"
#include "sass/skolem.hpp"

namespace sass::sim {

using protocol::ProtocolKind;
using skolem::PlanMode;

struct PuConfig {
    int occupied_channels = 0;  // X
    int busy_len = 12;          // b, slots
    double idle_mean = 1.0;     // l, slots (exponential)
};

/// PU intensity (X / N) * b / (l + b).
double pu_intensity(int physical_channels, const PuConfig& pu) noexcept;

/// Occupies every physical channel with duty cycle `intensity`, i.e. X = N and
/// l = b (1 - p) / p. intensity 0 gives no PU at all.
PuConfig pu_for_intensity(double intensity, int physical_channels, int busy_len);

/// Idle period: the exponential draw rounded to the nearest slot, at least 1.
std::uint64_t draw_idle_slots(Rng& rng, double mean);

/// Busy/idle occupancy of each physical channel. Occupied channels are drawn
/// uniformly without replacement; each starts at a uniformly random point of
/// its first busy+idle cycle.
class PuTraffic {
public:
    PuTraffic(int physical_channels, const PuConfig& config, Rng& rng);

    bool busy(Channel physical) const { return channels_.at(physical).busy; }
    const std::vector<Channel>& occupied() const noexcept { return occupied_; }

    /// Moves every channel one slot forward.
    void advance(Rng& rng);

private:
    struct ChannelState {
        bool occupied = false;
        bool busy = false;
        std::uint64_t remaining = 0;
    };

    PuConfig config_;
    std::vector<ChannelState> channels_;
    std::vector<Channel> occupied_;
};

struct SimConfig {
    int channels = 15;  // N, physical
    PlanMode plan_mode = PlanMode::downsizing;
    PuConfig pu;
    /// Fixed receiver start offset; drawn uniformly from [0, 2N'^2) when empty.
    std::optional<std::int64_t> drift;
    std::uint64_t horizon = 1000;
    std::uint64_t seed = 1;
    ProtocolKind protocol = ProtocolKind::sass;
    std::size_t pairs = 1;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// One slot of one pair. Channels are effective (pre-alias) indices.
struct SlotRecord {
    std::uint64_t global_slot = 0;
    Channel tx = 0;
    Channel rx = 0;
    bool pu_tx = false;  // PU on the sender's physical channel
    bool pu_rx = false;  // PU on the receiver's physical channel
    bool delivered = false;
};

struct RunSummary {
    std::uint64_t run = 0;
    /// Global slot of the receiver's local slot 0 (sender starts at 0).
    std::int64_t drift = 0;
    /// Trace index of the first delivery.
    std::optional<std::uint64_t> first_delivery;
    protocol::ProtocolSummary protocol;
    /// Committed offset differs from drift mod 2N'.
    bool missync = false;
};

/// Per-slot records start at the first slot where both nodes are active;
/// trace index i is global slot drift + i and receiver local slot i.
struct SimTrace {
    RunSummary summary;
    ProtocolKind protocol = ProtocolKind::sass;
    int effective_channels = 0;
    std::vector<SlotRecord> slots;
    /// delivered[i] == slots[i].delivered, kept contiguous for the counting kernels.
    std::vector<std::uint8_t> delivered;

    std::size_t horizon() const noexcept { return slots.size(); }
};

/// One pair's world: PU processes, both protocol instances, and the trace.
class World {
public:
    World(const SimConfig& config, std::uint64_t run_index);

    bool done() const noexcept { return trace_.slots.size() >= horizon_; }
    const skolem::ChannelPlan& plan() const noexcept { return plan_; }
    const skolem::EssSequence& ess() const noexcept { return ess_; }
    std::int64_t drift() const noexcept { return drift_; }

    struct StepResult {
        SlotRecord record;
        protocol::SlotObservation sender;
        protocol::SlotObservation receiver;
    };

    /// Advances one slot. Precondition: !done().
    StepResult step();

    /// Runs to the horizon and returns the trace.
    SimTrace finish() &&;

private:
    skolem::ChannelPlan plan_;
    skolem::EssSequence ess_;
    std::uint64_t horizon_;
    std::int64_t drift_;
    Rng pu_rng_;
    PuTraffic pu_;
    std::unique_ptr<protocol::Protocol> sender_;
    std::unique_ptr<protocol::Protocol> receiver_;
    std::uint64_t global_slot_ = 0;
    SimTrace trace_;
};

/// Drift actually simulated: negative values move to their residue mod period.
std::int64_t normalize_drift(std::int64_t drift, std::int64_t period) noexcept;

/// `config.pairs` independent traces; run i uses streams derived from
/// (config.seed, i). Output is identical for any worker count.
std::vector<SimTrace> run(const SimConfig& config);

/// Newline-delimited JSON, one object per slot:
/// {"run":0,"slot":12,"tx":3,"rx":3,"pu":false,"delivered":true}
/// `slot` is the global slot; `pu` is PU presence on the receiver's channel.
void write_slot_records(std::ostream& out, std::span<const SimTrace> traces);

/// PU-free SASS run for every drift in [0, 2N'^2) at N' effective channels.
struct DriftSweepEntry {
    std::int64_t drift = 0;
    std::optional<std::uint64_t> first_delivery;
    protocol::ProtocolSummary protocol;
    bool missync = false;
    /// Every slot from the synced frame to the horizon delivered.
    bool delivers_after_sync = false;
};

std::vector<DriftSweepEntry> sweep_drifts(int effective_channels, std::uint64_t horizon);

}  // namespace sass::sim
