#pragma once

// Evaluation quantities over simulation traces: the fraction of delivered
// slots rho(t), windowed delivery latency, and the mis-sync rate.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sass/simenv.hpp"

namespace sass::metrics {

using sim::SimTrace;

/// Delivered slots among trace indices [0, t), divided by t.
/// Throws std::out_of_range unless 1 <= t <= horizon.
double rho(const SimTrace& trace, std::size_t t);

/// Delivered slots among trace indices [0, t).
std::size_t deliveries(const SimTrace& trace, std::size_t t);

/// T / deliveries in [0, T): the mean interval between deliveries.
/// nullopt when nothing was delivered (never reported as zero). T is clamped
/// to the horizon.
std::optional<double> avg_latency(const SimTrace& trace, std::size_t window);

struct MissyncReport {
    std::size_t committed = 0;
    std::size_t missynced = 0;
    std::size_t uncommitted = 0;
    /// missynced / committed; 0 when nothing committed.
    double rate() const noexcept {
        return committed == 0 ? 0.0 : static_cast<double>(missynced) / static_cast<double>(committed);
    }
};

MissyncReport missync(std::span<const SimTrace> traces);
double missync_rate(std::span<const SimTrace> traces);

/// t = 1..200, then every 10th slot, plus the horizon itself.
std::vector<std::size_t> rho_sample_points(std::size_t horizon);

struct RhoPoint {
    std::size_t t = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation across pairs
};

/// rho(t) at every sample point, averaged over pairs with equal weight.
std::vector<RhoPoint> rho_series(std::span<const SimTrace> traces);

struct WindowLatency {
    std::size_t window = 0;
    std::optional<double> mean;  // over pairs with at least one delivery
    std::size_t undefined_count = 0;
};

struct LatencyReport {
    /// Trace index of the first delivery, over pairs that had one.
    std::optional<double> first_delivery_mean;
    std::optional<std::uint64_t> first_delivery_max;
    std::size_t first_delivery_undefined = 0;
    std::vector<WindowLatency> windows;
};

inline constexpr std::size_t kLatencyWindows[] = {50, 100, 150, 200};

/// Windows larger than the horizon are skipped.
LatencyReport latency_report(std::span<const SimTrace> traces,
                             std::span<const std::size_t> windows = kLatencyWindows);

// CSV output. Numbers use fixed six-decimal formatting; undefined means are
// written as an empty field.

void write_rho_header(std::ostream& out);
void write_rho_rows(std::ostream& out, const std::string& protocol, double pu_level,
                    std::span<const RhoPoint> series);

void write_latency_header(std::ostream& out);
/// One "first" row, then one row per window.
void write_latency_rows(std::ostream& out, const std::string& protocol, double pu_level,
                        const LatencyReport& report);

}  // namespace sass::metrics
