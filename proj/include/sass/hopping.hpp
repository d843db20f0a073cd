#pragma once

// Channel-hopping sequence algebra over one ESS period of length T = 2N'.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sass/skolem.hpp"

namespace sass::hopping {

using skolem::EssSequence;
using ChannelSequence = std::vector<Channel>;

/// Mathematical modulus: result in [0, m) for m > 0.
constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// result[t] = u[(t + a) mod T].
ChannelSequence shift(std::span<const Channel> u, std::int64_t a);
inline ChannelSequence shift(const EssSequence& u, std::int64_t a) { return shift(u.values(), a); }

/// C(u, v): channels h with u[t] == v[t] == h for some t, ascending.
/// Throws std::invalid_argument on length mismatch.
std::vector<Channel> delivery_channels(std::span<const Channel> u, std::span<const Channel> v);

/// D(u, v): slots t with u[t] == v[t], ascending.
std::vector<std::size_t> delivery_slots(std::span<const Channel> u, std::span<const Channel> v);

/// |D(u, v)| without materializing the set.
std::size_t delivery_slot_count(std::span<const Channel> u, std::span<const Channel> v);

/// Representative g of g_raw mod period with |g| <= period / 2. The tie at
/// |g| = period / 2 resolves to +period / 2 (both shifts are the same
/// sequence). period must be positive and even.
std::int64_t canonical_drift(std::int64_t g_raw, std::int64_t period);

/// Either every channel, or exactly one.
struct ChannelPrediction {
    bool all = false;
    Channel channel = 0;

    static ChannelPrediction all_channels() noexcept { return {true, 0}; }
    static ChannelPrediction single(Channel c) noexcept { return {false, c}; }

    friend bool operator==(const ChannelPrediction&, const ChannelPrediction&) = default;
};

std::string to_string(const ChannelPrediction& p);

/// Delivery channel between two shifts of the same ESS whose canonical
/// relative drift is g: ALL for g = 0, otherwise |g| - 1.
ChannelPrediction predicted_delivery_channel(std::int64_t g);

/// Number of coinciding slots per period for canonical drift g.
std::size_t predicted_delivery_slot_count(std::int64_t g, int channel_count);

/// Classifies an observed delivery-channel set the same way.
std::optional<ChannelPrediction> classify_channels(std::span<const Channel> channels, int channel_count);

/// One period of a schedule: slot t carries base[(t + offset) mod T].
struct HopFrame {
    std::int64_t offset = 0;

    Channel channel(const EssSequence& base, std::size_t slot_in_frame) const noexcept {
        const auto period = static_cast<std::int64_t>(base.period());
        return base[static_cast<std::size_t>(floor_mod(static_cast<std::int64_t>(slot_in_frame) + offset, period))];
    }
};

/// Infinite concatenation of frames; frame n is shift(base, offset(n)).
/// Evaluated lazily, never materialized.
class ChannelSchedule {
public:
    using FrameRule = std::function<std::int64_t(std::uint64_t frame)>;

    ChannelSchedule(EssSequence base, FrameRule rule);

    /// Every frame plays shift(base, offset).
    static ChannelSchedule constant(EssSequence base, std::int64_t offset);
    /// Frame n plays shift(base, n).
    static ChannelSchedule rotating(EssSequence base);

    std::size_t period() const noexcept { return base_.period(); }
    const EssSequence& base() const noexcept { return base_; }
    HopFrame frame(std::uint64_t n) const { return HopFrame{rule_(n)}; }
    Channel channel_at(std::uint64_t t) const;

private:
    EssSequence base_;
    FrameRule rule_;
};

/// A schedule whose local slot 0 sits at global slot `drift`.
class DriftedView {
public:
    DriftedView(ChannelSchedule schedule, std::int64_t drift)
        : schedule_(std::move(schedule)), drift_(drift) {}

    std::int64_t drift() const noexcept { return drift_; }
    /// nullopt before the node has started.
    std::optional<Channel> channel_at_global(std::int64_t global_slot) const;

private:
    ChannelSchedule schedule_;
    std::int64_t drift_;
};

/// Exhaustive check of the delivery-channel and delivery-slot structure of
/// every pair shift(u, a), shift(u, b) with a, b in [0, T).
struct TheoremReport {
    int channel_count = 0;
    std::size_t pairs_checked = 0;

    // C = all channels  <=>  a = b (mod T)
    bool channels_all_iff_aligned = true;
    // C = {|g| - 1} whenever g != 0
    bool channels_single_otherwise = true;
    // |D| = T  <=>  g = 0
    bool slots_full_iff_aligned = true;
    // |D| = 1  <=>  0 < |g| < N'
    bool slots_one_iff_inner = true;
    // |D| = 2  <=>  |g| = N'
    bool slots_two_iff_half = true;

    std::size_t violations = 0;
    /// C(shift(u, a), u) for a = 0 .. T-1.
    std::vector<ChannelPrediction> drift_table;

    bool all_pass() const noexcept {
        return channels_all_iff_aligned && channels_single_otherwise && slots_full_iff_aligned &&
               slots_one_iff_inner && slots_two_iff_half;
    }
};

TheoremReport verify_theorems(const EssSequence& u);

}  // namespace sass::hopping
