#include "sass/simenv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace sass::sim {

using hopping::floor_mod;

namespace {

// Stream tags for derive_seed(seed, run, tag).
constexpr std::uint64_t kPuStream = 1;
constexpr std::uint64_t kDriftStream = 2;
constexpr std::uint64_t kSenderStream = 3;
constexpr std::uint64_t kReceiverStream = 4;

std::int64_t pick_drift(const SimConfig& config, std::uint64_t run, std::int64_t period) {
    if (config.drift) return normalize_drift(*config.drift, period);
    const auto n = static_cast<std::uint64_t>(period / 2);
    Rng rng(derive_seed(config.seed, run, kDriftStream));
    return static_cast<std::int64_t>(rng.below(2 * n * n));
}

}  // namespace

double pu_intensity(int physical_channels, const PuConfig& pu) noexcept {
    if (physical_channels <= 0 || pu.occupied_channels <= 0) return 0.0;
    return static_cast<double>(pu.occupied_channels) / physical_channels *
           (pu.busy_len / (pu.idle_mean + pu.busy_len));
}

PuConfig pu_for_intensity(double intensity, int physical_channels, int busy_len) {
    if (!(intensity >= 0.0 && intensity < 1.0)) {
        throw std::invalid_argument("PU intensity must lie in [0, 1)");
    }
    if (busy_len < 1) throw std::invalid_argument("PU busy length must be at least 1 slot");
    PuConfig pu;
    pu.busy_len = busy_len;
    if (intensity == 0.0) return pu;
    pu.occupied_channels = physical_channels;
    pu.idle_mean = busy_len * (1.0 - intensity) / intensity;
    return pu;
}

std::uint64_t draw_idle_slots(Rng& rng, double mean) {
    const double slots = std::nearbyint(rng.exponential(mean));
    return slots < 1.0 ? 1 : static_cast<std::uint64_t>(slots);
}

PuTraffic::PuTraffic(int physical_channels, const PuConfig& config, Rng& rng)
    : config_(config), channels_(static_cast<std::size_t>(physical_channels)) {
    if (config.occupied_channels < 0 || config.occupied_channels > physical_channels) {
        throw std::invalid_argument("occupied PU channels must lie in [0, N]");
    }
    // Partial Fisher-Yates.
    std::vector<Channel> pool(static_cast<std::size_t>(physical_channels));
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<Channel>(i);
    for (int i = 0; i < config.occupied_channels; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        occupied_.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(occupied_.begin(), occupied_.end());

    const auto busy = static_cast<std::uint64_t>(config.busy_len);
    for (Channel c : occupied_) {
        auto& st = channels_[c];
        st.occupied = true;
        const std::uint64_t cycle = busy + draw_idle_slots(rng, config.idle_mean);
        const std::uint64_t pos = rng.below(cycle);
        st.busy = pos < busy;
        st.remaining = st.busy ? busy - pos : cycle - pos;
    }
}

void PuTraffic::advance(Rng& rng) {
    for (Channel c : occupied_) {
        auto& st = channels_[c];
        if (--st.remaining > 0) continue;
        st.busy = !st.busy;
        st.remaining = st.busy ? static_cast<std::uint64_t>(config_.busy_len) : draw_idle_slots(rng, config_.idle_mean);
    }
}

void SimConfig::validate() const {
    if (channels < 1 || channels > kMaxChannels) {
        throw std::invalid_argument("channels must lie in [1, " + std::to_string(kMaxChannels) + "]");
    }
    const auto plan = skolem::make_channel_plan(channels, plan_mode);
    if (plan.effective_count() < 4) {
        throw std::invalid_argument("the simulator needs at least 4 effective channels (got " +
                                    std::to_string(plan.effective_count()) + ")");
    }
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1 slot");
    if (pairs < 1) throw std::invalid_argument("pairs must be at least 1");
    if (pu.occupied_channels < 0 || pu.occupied_channels > channels) {
        throw std::invalid_argument("PU channel count X must lie in [0, N]");
    }
    if (pu.busy_len < 1) throw std::invalid_argument("PU busy length b must be at least 1");
    if (!(pu.idle_mean > 0.0) || !std::isfinite(pu.idle_mean)) {
        throw std::invalid_argument("PU idle mean l must be positive");
    }
}

std::int64_t normalize_drift(std::int64_t drift, std::int64_t period) noexcept {
    return drift < 0 ? floor_mod(drift, period) : drift;
}

World::World(const SimConfig& config, std::uint64_t run_index)
    : plan_(skolem::make_channel_plan(config.channels, config.plan_mode)),
      ess_(skolem::ess_for_channels(plan_.effective_count())),
      horizon_(config.horizon),
      drift_(pick_drift(config, run_index, static_cast<std::int64_t>(ess_.period()))),
      pu_rng_(derive_seed(config.seed, run_index, kPuStream)),
      pu_(config.channels, config.pu, pu_rng_),
      sender_(protocol::make_sender(config.protocol, ess_, derive_seed(config.seed, run_index, kSenderStream))),
      receiver_(protocol::make_receiver(config.protocol, ess_, derive_seed(config.seed, run_index, kReceiverStream))) {
    trace_.summary.run = run_index;
    trace_.summary.drift = drift_;
    trace_.protocol = config.protocol;
    trace_.effective_channels = plan_.effective_count();
    trace_.slots.reserve(horizon_);
    trace_.delivered.reserve(horizon_);

    // Sender hops alone until the receiver's clock starts.
    while (static_cast<std::int64_t>(global_slot_) < drift_) {
        const Channel tx = sender_->next_channel(global_slot_);
        sender_->observe({false, tx});
        pu_.advance(pu_rng_);
        ++global_slot_;
    }
}

World::StepResult World::step() {
    const std::uint64_t local = trace_.slots.size();
    StepResult r;
    r.record.global_slot = global_slot_;
    r.record.tx = sender_->next_channel(global_slot_);
    r.record.rx = receiver_->next_channel(local);
    const Channel ptx = plan_.physical(r.record.tx);
    const Channel prx = plan_.physical(r.record.rx);
    r.record.pu_tx = pu_.busy(ptx);
    r.record.pu_rx = pu_.busy(prx);
    r.record.delivered = ptx == prx && !r.record.pu_rx;
    r.sender = {r.record.delivered, r.record.tx};
    r.receiver = {r.record.delivered, r.record.rx};

    sender_->observe(r.sender);
    receiver_->observe(r.receiver);
    pu_.advance(pu_rng_);
    ++global_slot_;

    if (r.record.delivered && !trace_.summary.first_delivery) trace_.summary.first_delivery = local;
    trace_.slots.push_back(r.record);
    trace_.delivered.push_back(r.record.delivered ? 1 : 0);
    return r;
}

SimTrace World::finish() && {
    while (!done()) step();
    trace_.summary.protocol = receiver_->summary();
    const auto& committed = trace_.summary.protocol.committed_offset;
    trace_.summary.missync =
        committed && *committed != floor_mod(drift_, static_cast<std::int64_t>(ess_.period()));
    return std::move(trace_);
}

std::vector<SimTrace> run(const SimConfig& config) {
    config.validate();
    std::vector<SimTrace> traces(config.pairs);
    unsigned workers = config.workers != 0 ? config.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.pairs)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < config.pairs; i = next++) {
            try {
                traces[i] = World(config, i).finish();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return traces;
}

void write_slot_records(std::ostream& out, std::span<const SimTrace> traces) {
    for (const auto& trace : traces) {
        for (const auto& s : trace.slots) {
            out << "{\"run\":" << trace.summary.run << ",\"slot\":" << s.global_slot
                << ",\"tx\":" << static_cast<int>(s.tx) << ",\"rx\":" << static_cast<int>(s.rx)
                << ",\"pu\":" << (s.pu_rx ? "true" : "false")
                << ",\"delivered\":" << (s.delivered ? "true" : "false") << "}\n";
        }
    }
}

std::vector<DriftSweepEntry> sweep_drifts(int effective_channels, std::uint64_t horizon) {
    SimConfig config;
    config.channels = effective_channels;
    config.plan_mode = PlanMode::padding;
    config.horizon = horizon;
    config.protocol = ProtocolKind::sass;
    config.validate();
    if (skolem::make_channel_plan(effective_channels, PlanMode::padding).effective_count() != effective_channels) {
        throw std::invalid_argument("effective channel count must be 0 or 1 (mod 4)");
    }

    const auto n = static_cast<std::int64_t>(effective_channels);
    const auto period = static_cast<std::uint64_t>(2 * n);
    std::vector<DriftSweepEntry> out;
    out.reserve(static_cast<std::size_t>(2 * n * n));
    for (std::int64_t drift = 0; drift < 2 * n * n; ++drift) {
        config.drift = drift;
        SimTrace trace = World(config, 0).finish();
        DriftSweepEntry e;
        e.drift = drift;
        e.first_delivery = trace.summary.first_delivery;
        e.protocol = trace.summary.protocol;
        e.missync = trace.summary.missync;
        if (e.protocol.synced_from_frame) {
            const std::uint64_t from = *e.protocol.synced_from_frame * period;
            e.delivers_after_sync = from < trace.delivered.size();
            for (std::uint64_t i = from; i < trace.delivered.size(); ++i) {
                if (trace.delivered[i] == 0) {
                    e.delivers_after_sync = false;
                    break;
                }
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace sass::sim
