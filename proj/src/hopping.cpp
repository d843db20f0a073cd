#include "sass/hopping.hpp"

#include <algorithm>
#include <stdexcept>

#include "sass/kernels.hpp"

namespace sass::hopping {

namespace {

void require_same_length(std::span<const Channel> u, std::span<const Channel> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("hopping sequences differ in length (" + std::to_string(u.size()) +
                                    " vs " + std::to_string(v.size()) + ")");
    }
}

std::int64_t abs64(std::int64_t x) noexcept { return x < 0 ? -x : x; }

}  // namespace

ChannelSequence shift(std::span<const Channel> u, std::int64_t a) {
    ChannelSequence out(u.size());
    if (u.empty()) return out;
    const auto period = static_cast<std::int64_t>(u.size());
    const auto start = static_cast<std::size_t>(floor_mod(a, period));
    // Two contiguous copies: u[start..T) then u[0..start).
    auto tail = u.subspan(start);
    std::copy(tail.begin(), tail.end(), out.begin());
    std::copy(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(start),
              out.begin() + static_cast<std::ptrdiff_t>(tail.size()));
    return out;
}

std::vector<Channel> delivery_channels(std::span<const Channel> u, std::span<const Channel> v) {
    require_same_length(u, v);
    std::vector<std::uint8_t> mask(u.size());
    kernels::equal_mask(u, v, mask);
    std::vector<bool> present(256, false);
    for (std::size_t t = 0; t < u.size(); ++t) {
        if (mask[t] != 0) present[u[t]] = true;
    }
    std::vector<Channel> out;
    for (int c = 0; c < 256; ++c) {
        if (present[static_cast<std::size_t>(c)]) out.push_back(static_cast<Channel>(c));
    }
    return out;
}

std::vector<std::size_t> delivery_slots(std::span<const Channel> u, std::span<const Channel> v) {
    require_same_length(u, v);
    std::vector<std::uint8_t> mask(u.size());
    kernels::equal_mask(u, v, mask);
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < mask.size(); ++t) {
        if (mask[t] != 0) out.push_back(t);
    }
    return out;
}

std::size_t delivery_slot_count(std::span<const Channel> u, std::span<const Channel> v) {
    require_same_length(u, v);
    return kernels::count_equal(u, v);
}

std::int64_t canonical_drift(std::int64_t g_raw, std::int64_t period) {
    if (period <= 0 || period % 2 != 0) {
        throw std::invalid_argument("period must be positive and even");
    }
    const std::int64_t half = period / 2;
    const std::int64_t r = floor_mod(g_raw, period);
    return r <= half ? r : r - period;
}

std::string to_string(const ChannelPrediction& p) {
    return p.all ? std::string("All") : std::to_string(static_cast<int>(p.channel));
}

ChannelPrediction predicted_delivery_channel(std::int64_t g) {
    if (g == 0) return ChannelPrediction::all_channels();
    return ChannelPrediction::single(static_cast<Channel>(abs64(g) - 1));
}

std::size_t predicted_delivery_slot_count(std::int64_t g, int channel_count) {
    if (g == 0) return static_cast<std::size_t>(2 * channel_count);
    return abs64(g) == channel_count ? 2 : 1;
}

std::optional<ChannelPrediction> classify_channels(std::span<const Channel> channels, int channel_count) {
    if (static_cast<int>(channels.size()) == channel_count) return ChannelPrediction::all_channels();
    if (channels.size() == 1) return ChannelPrediction::single(channels.front());
    return std::nullopt;
}

ChannelSchedule::ChannelSchedule(EssSequence base, FrameRule rule)
    : base_(std::move(base)), rule_(std::move(rule)) {
    if (!rule_) throw std::invalid_argument("schedule needs a frame rule");
}

ChannelSchedule ChannelSchedule::constant(EssSequence base, std::int64_t offset) {
    return ChannelSchedule(std::move(base), [offset](std::uint64_t) { return offset; });
}

ChannelSchedule ChannelSchedule::rotating(EssSequence base) {
    const auto period = static_cast<std::uint64_t>(base.period());
    return ChannelSchedule(std::move(base), [period](std::uint64_t n) {
        return static_cast<std::int64_t>(n % period);
    });
}

Channel ChannelSchedule::channel_at(std::uint64_t t) const {
    const std::uint64_t period = base_.period();
    return frame(t / period).channel(base_, static_cast<std::size_t>(t % period));
}

std::optional<Channel> DriftedView::channel_at_global(std::int64_t global_slot) const {
    if (global_slot < drift_) return std::nullopt;
    return schedule_.channel_at(static_cast<std::uint64_t>(global_slot - drift_));
}

TheoremReport verify_theorems(const EssSequence& u) {
    TheoremReport report;
    report.channel_count = u.channel_count();
    const int n = u.channel_count();
    const auto period = static_cast<std::int64_t>(u.period());
    const auto len = u.period();

    std::vector<ChannelSequence> rotations;
    rotations.reserve(len);
    for (std::int64_t a = 0; a < period; ++a) rotations.push_back(shift(u, a));

    std::vector<std::uint8_t> mask(len);
    std::vector<bool> present(static_cast<std::size_t>(n));
    for (std::int64_t a = 0; a < period; ++a) {
        for (std::int64_t b = 0; b < period; ++b) {
            const auto& x = rotations[static_cast<std::size_t>(a)];
            const auto& y = rotations[static_cast<std::size_t>(b)];
            kernels::equal_mask(x, y, mask);

            std::fill(present.begin(), present.end(), false);
            std::size_t slots = 0;
            for (std::size_t t = 0; t < len; ++t) {
                if (mask[t] == 0) continue;
                ++slots;
                present[x[t]] = true;
            }
            std::vector<Channel> channels;
            for (int c = 0; c < n; ++c) {
                if (present[static_cast<std::size_t>(c)]) channels.push_back(static_cast<Channel>(c));
            }

            const std::int64_t g = canonical_drift(a - b, period);
            const bool aligned = g == 0;
            const bool full_channels = static_cast<int>(channels.size()) == n;
            bool ok = true;
            if (full_channels != aligned) {
                report.channels_all_iff_aligned = false;
                ok = false;
            }
            if (!aligned) {
                const Channel expected = predicted_delivery_channel(g).channel;
                if (channels.size() != 1 || channels.front() != expected) {
                    report.channels_single_otherwise = false;
                    ok = false;
                }
            }
            const bool inner = !aligned && abs64(g) < n;
            const bool half = abs64(g) == n;
            if ((slots == len) != aligned) {
                report.slots_full_iff_aligned = false;
                ok = false;
            }
            if ((slots == 1) != inner) {
                report.slots_one_iff_inner = false;
                ok = false;
            }
            if ((slots == 2) != half) {
                report.slots_two_iff_half = false;
                ok = false;
            }
            if (!ok) ++report.violations;
            ++report.pairs_checked;

            if (b == 0) {
                report.drift_table.push_back(classify_channels(channels, n).value_or(ChannelPrediction{}));
            }
        }
    }
    return report;
}

}  // namespace sass::hopping
