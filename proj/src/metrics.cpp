#include "sass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sass/kernels.hpp"

namespace sass::metrics {

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::size_t deliveries(const SimTrace& trace, std::size_t t) {
    if (t > trace.delivered.size()) throw std::out_of_range("t beyond trace horizon");
    return kernels::count_nonzero(std::span(trace.delivered).first(t));
}

double rho(const SimTrace& trace, std::size_t t) {
    if (t < 1 || t > trace.delivered.size()) {
        throw std::out_of_range("rho(t) needs 1 <= t <= horizon (t=" + std::to_string(t) + ", horizon=" +
                                std::to_string(trace.delivered.size()) + ")");
    }
    return static_cast<double>(deliveries(trace, t)) / static_cast<double>(t);
}

std::optional<double> avg_latency(const SimTrace& trace, std::size_t window) {
    const std::size_t t = std::min(window, trace.delivered.size());
    if (t == 0) return std::nullopt;
    const std::size_t d = deliveries(trace, t);
    if (d == 0) return std::nullopt;
    return static_cast<double>(t) / static_cast<double>(d);
}

MissyncReport missync(std::span<const SimTrace> traces) {
    MissyncReport r;
    for (const auto& trace : traces) {
        if (!trace.summary.protocol.committed_offset) {
            ++r.uncommitted;
            continue;
        }
        ++r.committed;
        if (trace.summary.missync) ++r.missynced;
    }
    return r;
}

double missync_rate(std::span<const SimTrace> traces) { return missync(traces).rate(); }

std::vector<std::size_t> rho_sample_points(std::size_t horizon) {
    std::vector<std::size_t> points;
    for (std::size_t t = 1; t <= horizon && t <= 200; ++t) points.push_back(t);
    for (std::size_t t = 210; t <= horizon; t += 10) points.push_back(t);
    if (!points.empty() && points.back() != horizon) points.push_back(horizon);
    return points;
}

std::vector<RhoPoint> rho_series(std::span<const SimTrace> traces) {
    if (traces.empty()) return {};
    std::size_t horizon = traces.front().horizon();
    for (const auto& t : traces) horizon = std::min(horizon, t.horizon());
    const auto points = rho_sample_points(horizon);

    std::vector<double> sum(points.size(), 0.0);
    std::vector<double> sum_sq(points.size(), 0.0);
    for (const auto& trace : traces) {
        std::span<const std::uint8_t> flags(trace.delivered);
        std::size_t count = 0;
        std::size_t prev = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            count += kernels::count_nonzero(flags.subspan(prev, points[i] - prev));
            prev = points[i];
            const double r = static_cast<double>(count) / static_cast<double>(points[i]);
            sum[i] += r;
            sum_sq[i] += r * r;
        }
    }
    const auto n = static_cast<double>(traces.size());
    std::vector<RhoPoint> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double mean = sum[i] / n;
        const double var = std::max(0.0, sum_sq[i] / n - mean * mean);
        out[i] = RhoPoint{points[i], mean, std::sqrt(var)};
    }
    return out;
}

LatencyReport latency_report(std::span<const SimTrace> traces, std::span<const std::size_t> windows) {
    LatencyReport report;
    double first_sum = 0.0;
    std::size_t first_count = 0;
    for (const auto& trace : traces) {
        if (const auto& first = trace.summary.first_delivery) {
            first_sum += static_cast<double>(*first);
            ++first_count;
            report.first_delivery_max = std::max(report.first_delivery_max.value_or(0), *first);
        } else {
            ++report.first_delivery_undefined;
        }
    }
    if (first_count > 0) report.first_delivery_mean = first_sum / static_cast<double>(first_count);

    std::size_t horizon = traces.empty() ? 0 : traces.front().horizon();
    for (const auto& t : traces) horizon = std::min(horizon, t.horizon());
    for (std::size_t window : windows) {
        if (window > horizon) continue;
        WindowLatency w;
        w.window = window;
        double sum = 0.0;
        std::size_t defined = 0;
        for (const auto& trace : traces) {
            if (auto lat = avg_latency(trace, window)) {
                sum += *lat;
                ++defined;
            } else {
                ++w.undefined_count;
            }
        }
        if (defined > 0) w.mean = sum / static_cast<double>(defined);
        report.windows.push_back(w);
    }
    return report;
}

void write_rho_header(std::ostream& out) { out << "protocol,pu_level,t,rho_mean,rho_stddev\n"; }

void write_rho_rows(std::ostream& out, const std::string& protocol, double pu_level,
                    std::span<const RhoPoint> series) {
    const std::string pu = fixed(pu_level, 2);
    for (const auto& p : series) {
        out << protocol << ',' << pu << ',' << p.t << ',' << fixed(p.mean) << ',' << fixed(p.stddev) << '\n';
    }
}

void write_latency_header(std::ostream& out) { out << "protocol,pu_level,window,latency_mean,undefined_count\n"; }

void write_latency_rows(std::ostream& out, const std::string& protocol, double pu_level,
                        const LatencyReport& report) {
    const std::string pu = fixed(pu_level, 2);
    out << protocol << ',' << pu << ",first,"
        << (report.first_delivery_mean ? fixed(*report.first_delivery_mean) : std::string()) << ','
        << report.first_delivery_undefined << '\n';
    for (const auto& w : report.windows) {
        out << protocol << ',' << pu << ',' << w.window << ',' << (w.mean ? fixed(*w.mean) : std::string()) << ','
            << w.undefined_count << '\n';
    }
}

}  // namespace sass::metrics
