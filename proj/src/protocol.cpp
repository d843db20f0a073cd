#include "sass/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace sass::protocol {

using hopping::floor_mod;

std::string_view to_string(CalibrationCase c) noexcept {
    switch (c) {
        case CalibrationCase::aligned: return "aligned";
        case CalibrationCase::half_period: return "half_period";
        case CalibrationCase::mirrored: return "mirrored";
    }
    return "?";
}

std::string_view to_string(ProtocolKind kind) noexcept {
    switch (kind) {
        case ProtocolKind::sass: return "sass";
        case ProtocolKind::rch: return "rch";
        case ProtocolKind::css: return "css";
    }
    return "?";
}

ProtocolKind parse_protocol_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sass") return ProtocolKind::sass;
    if (lower == "rch") return ProtocolKind::rch;
    if (lower == "css") return ProtocolKind::css;
    throw std::invalid_argument("unknown protocol '" + std::string(text) + "' (expected sass, rch or css)");
}

std::string_view to_string(ReceiverPhase phase) noexcept {
    switch (phase) {
        case ReceiverPhase::searching: return "searching";
        case ReceiverPhase::probing_half: return "probing_half";
        case ReceiverPhase::probing_plus: return "probing_plus";
        case ReceiverPhase::probing_minus: return "probing_minus";
        case ReceiverPhase::synced: return "synced";
    }
    return "?";
}

// ---------------------------------------------------------------------------

ReceiverState::ReceiverState(EssSequence ess) : ess_(std::move(ess)) {}

std::uint32_t ReceiverState::deliveries_in_frame(std::uint64_t frame) const {
    auto it = sb_.find(frame);
    return it == sb_.end() ? 0 : it->second;
}

std::int64_t ReceiverState::current_offset() const noexcept {
    const auto n = static_cast<std::int64_t>(channel_count());
    const auto phi = first_ ? static_cast<std::int64_t>(first_->frame) : 0;
    const auto step = first_ ? static_cast<std::int64_t>(first_->channel) + 1 : 0;
    switch (phase_) {
        case ReceiverPhase::searching: return static_cast<std::int64_t>(frame_index() % period());
        case ReceiverPhase::probing_half: return phi + n;
        case ReceiverPhase::probing_plus: return phi + step;
        case ReceiverPhase::probing_minus: return phi - step;
        case ReceiverPhase::synced: return *committed_;
    }
    return 0;
}

Channel ReceiverState::channel() const noexcept {
    const auto period_len = static_cast<std::int64_t>(period());
    const auto idx = floor_mod(static_cast<std::int64_t>(slot_in_frame()) + current_offset(), period_len);
    return ess_[static_cast<std::size_t>(idx)];
}

void ReceiverState::observe(const SlotObservation& obs) {
    const Channel tuned = channel();
    if (obs.delivered && obs.channel != tuned) {
        throw std::logic_error("delivery reported on channel " + std::to_string(obs.channel) +
                               " while tuned to " + std::to_string(tuned));
    }
    const std::uint64_t frame = frame_index();
    const std::size_t k = slot_in_frame();
    if (obs.delivered) ++sb_[frame];

    if (phase_ == ReceiverPhase::searching) {
        if (!first_ && obs.delivered) {
            first_ = FirstDelivery{k, obs.channel, frame};
            // The other slot of this frame carrying alpha.
            const std::size_t gap = static_cast<std::size_t>(obs.channel) + 1;
            const auto offset = current_offset();
            const auto period_len = static_cast<std::int64_t>(period());
            auto at = [&](std::size_t slot) {
                return ess_[static_cast<std::size_t>(floor_mod(static_cast<std::int64_t>(slot) + offset, period_len))];
            };
            const std::size_t ahead = (k + gap) % period();
            tau2_ = at(ahead) == obs.channel ? ahead : (k + period() - gap % period()) % period();
            tau2_delivered_ = false;
        } else if (first_ && first_->frame == frame && tau2_ && *tau2_ == k) {
            tau2_delivered_ = obs.delivered;
        }
    }

    if (k + 1 == period()) end_of_frame(frame);
    ++local_slot_;
}

void ReceiverState::end_of_frame(std::uint64_t frame) {
    const auto n = static_cast<std::int64_t>(channel_count());
    switch (phase_) {
        case ReceiverPhase::searching:
            if (!first_) {
                sb_.erase(frame);
                return;
            }
            if (first_->channel == n - 1) {
                phase_ = ReceiverPhase::probing_half;
                case_ = CalibrationCase::half_period;
            } else if (tau2_delivered_) {
                case_ = CalibrationCase::aligned;
                commit(static_cast<std::int64_t>(first_->frame), frame);
            } else {
                phase_ = ReceiverPhase::probing_plus;
                case_ = CalibrationCase::mirrored;
            }
            return;
        case ReceiverPhase::probing_half: {
            const auto phi = first_->frame;
            const auto base = static_cast<std::int64_t>(phi);
            commit(deliveries_in_frame(phi) >= deliveries_in_frame(phi + 1) ? base : base + n, frame);
            return;
        }
        case ReceiverPhase::probing_plus:
            phase_ = ReceiverPhase::probing_minus;
            return;
        case ReceiverPhase::probing_minus: {
            const auto phi = first_->frame;
            const auto base = static_cast<std::int64_t>(phi);
            const auto step = static_cast<std::int64_t>(first_->channel) + 1;
            commit(deliveries_in_frame(phi + 1) >= deliveries_in_frame(phi + 2) ? base + step : base - step,
                   frame);
            return;
        }
        case ReceiverPhase::synced:
            if (frame > first_->frame + 2) sb_.erase(frame);
            return;
    }
}

void ReceiverState::commit(std::int64_t offset, std::uint64_t frame) {
    committed_ = floor_mod(offset, static_cast<std::int64_t>(period()));
    phase_ = ReceiverPhase::synced;
    synced_from_ = frame + 1;
}

ProtocolSummary ReceiverState::summary() const {
    ProtocolSummary s;
    if (first_) s.first_delivery_frame = first_->frame;
    s.calibration_case = case_;
    s.committed_offset = committed_;
    s.synced_from_frame = synced_from_;
    return s;
}

Channel SassReceiver::next_channel(std::uint64_t local_slot) {
    if (local_slot != state_.local_slot()) {
        throw std::logic_error("receiver asked for slot " + std::to_string(local_slot) + " at local slot " +
                               std::to_string(state_.local_slot()));
    }
    return state_.channel();
}

// ---------------------------------------------------------------------------

Channel rch_channel(Rng& rng, int channel_count) {
    if (channel_count <= 1) return 0;
    return static_cast<Channel>(rng.below(static_cast<std::uint64_t>(channel_count)));
}

RchNode::RchNode(int channel_count, std::uint64_t seed) : channel_count_(channel_count), rng_(seed) {
    if (channel_count_ < 1 || channel_count_ > kMaxChannels) {
        throw std::invalid_argument("RCH channel count out of range");
    }
}

Channel RchNode::next_channel(std::uint64_t) {
    last_ = rch_channel(rng_, channel_count_);
    return last_;
}

void RchNode::observe(const SlotObservation& obs) {
    if (obs.delivered && obs.channel != last_) {
        throw std::logic_error("delivery reported on a channel the node was not tuned to");
    }
}

Channel css_receiver_channel(std::uint64_t local_slot, const EssSequence& mu) noexcept {
    const std::uint64_t period = mu.period();
    const std::uint64_t frame = local_slot / period;
    return mu[static_cast<std::size_t>((local_slot % period + frame % period) % period)];
}

std::unique_ptr<Protocol> make_sender(ProtocolKind kind, const EssSequence& ess, std::uint64_t seed) {
    if (kind == ProtocolKind::rch) return std::make_unique<RchNode>(ess.channel_count(), seed);
    return std::make_unique<SassSender>(ess);
}

std::unique_ptr<Protocol> make_receiver(ProtocolKind kind, const EssSequence& ess, std::uint64_t seed) {
    switch (kind) {
        case ProtocolKind::sass: return std::make_unique<SassReceiver>(ess);
        case ProtocolKind::rch: return std::make_unique<RchNode>(ess.channel_count(), seed);
        case ProtocolKind::css: return std::make_unique<CssReceiver>(ess);
    }
    throw std::invalid_argument("unknown protocol kind");
}

}  // namespace sass::protocol
