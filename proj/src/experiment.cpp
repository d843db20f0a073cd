#include "sass/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sass/metrics.hpp"

namespace sass::experiment {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw SpecError("line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_integer(const std::string& value, std::size_t line, const std::string& key) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) fail(line, "'" + key + "' expects an integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& value, std::size_t line, const std::string& key) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) fail(line, "'" + key + "' expects a number, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& value, std::size_t line, const std::string& key) {
    if (value == "yes" || value == "true" || value == "1") return true;
    if (value == "no" || value == "false" || value == "0") return false;
    fail(line, "'" + key + "' expects yes or no, got '" + value + "'");
}

std::vector<ProtocolKind> parse_protocols(const std::string& value, std::size_t line) {
    std::vector<ProtocolKind> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(protocol::parse_protocol_kind(item));
        } catch (const std::invalid_argument& e) {
            fail(line, e.what());
        }
    }
    if (out.empty()) fail(line, "'protocols' lists no protocol");
    return out;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Applies a variation-level key; returns false if the key is not one.
bool set_variation_key(Variation& v, const std::string& key, const std::string& value, std::size_t line) {
    if (key == "name") {
        v.name = value;
    } else if (key == "protocols") {
        v.protocols = parse_protocols(value, line);
    } else if (key == "pu") {
        v.pu_percent = parse_double(value, line, key);
    } else if (key == "channels") {
        v.channels = parse_integer<int>(value, line, key);
    } else if (key == "plan") {
        try {
            v.plan_mode = skolem::parse_plan_mode(value);
        } catch (const std::invalid_argument& e) {
            fail(line, e.what());
        }
    } else if (key == "busy_len") {
        v.busy_len = parse_integer<int>(value, line, key);
    } else if (key == "pu_channels") {
        v.pu_channels = parse_integer<int>(value, line, key);
    } else if (key == "idle_mean") {
        v.idle_mean = parse_double(value, line, key);
    } else if (key == "drift") {
        v.drift = parse_integer<std::int64_t>(value, line, key);
    } else if (key == "pairs") {
        v.pairs = parse_integer<std::size_t>(value, line, key);
    } else if (key == "horizon") {
        v.horizon = parse_integer<std::uint64_t>(value, line, key);
    } else if (key == "records") {
        v.records = parse_bool(value, line, key);
    } else {
        return false;
    }
    return true;
}

bool valid_name(const std::string& name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::string join_protocols(const std::vector<ProtocolKind>& protocols) {
    std::string out;
    for (std::size_t i = 0; i < protocols.size(); ++i) {
        if (i != 0) out += ", ";
        out += protocol::to_string(protocols[i]);
    }
    return out;
}

Variation sweep_variation(std::string name, double pu, std::uint64_t horizon) {
    Variation v;
    v.name = std::move(name);
    v.pu_percent = pu;
    v.horizon = horizon;
    return v;
}

ExperimentSpec pu_sweep(std::string out, std::uint64_t horizon) {
    ExperimentSpec spec;
    spec.seed = 20130601;
    spec.out = std::move(out);
    for (int pu : {0, 25, 50, 75}) {
        spec.variations.push_back(sweep_variation("pu" + std::to_string(pu), pu, horizon));
    }
    return spec;
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in) {
    ExperimentSpec spec;
    Variation defaults;
    Variation* current = nullptr;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == "[variation]") {
            spec.variations.push_back(defaults);
            spec.variations.back().name.clear();
            current = &spec.variations.back();
            continue;
        }
        if (line.front() == '[') fail(line_no, "unknown section " + line);
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key");

        if (current == nullptr) {
            if (key == "seed") {
                spec.seed = parse_integer<std::uint64_t>(value, line_no, key);
            } else if (key == "out") {
                if (value.empty()) fail(line_no, "'out' is empty");
                spec.out = value;
            } else if (key == "workers") {
                spec.workers = parse_integer<unsigned>(value, line_no, key);
            } else if (key == "name" || !set_variation_key(defaults, key, value, line_no)) {
                fail(line_no, "unknown key '" + key + "'");
            }
        } else if (!set_variation_key(*current, key, value, line_no)) {
            fail(line_no, "unknown key '" + key + "' in [variation]");
        }
    }
    validate(spec);
    return spec;
}

ExperimentSpec parse_spec_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_spec(in);
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read spec file '" + path + "'");
    return parse_spec(in);
}

std::string format_spec(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "seed = " << spec.seed << '\n';
    out << "out = " << spec.out << '\n';
    out << "workers = " << spec.workers << '\n';
    for (const auto& v : spec.variations) {
        out << "\n[variation]\n";
        out << "name = " << v.name << '\n';
        out << "protocols = " << join_protocols(v.protocols) << '\n';
        out << "pu = " << shortest(v.pu_percent) << '\n';
        out << "channels = " << v.channels << '\n';
        out << "plan = " << skolem::to_string(v.plan_mode) << '\n';
        out << "busy_len = " << v.busy_len << '\n';
        if (v.pu_channels) out << "pu_channels = " << *v.pu_channels << '\n';
        if (v.idle_mean) out << "idle_mean = " << shortest(*v.idle_mean) << '\n';
        if (v.drift) out << "drift = " << *v.drift << '\n';
        out << "pairs = " << v.pairs << '\n';
        out << "horizon = " << v.horizon << '\n';
        out << "records = " << (v.records ? "yes" : "no") << '\n';
    }
    return out.str();
}

ExperimentSpec preset(std::string_view name) {
    if (name == "paper-fig2") return pu_sweep("results/paper-fig2", 1000);
    if (name == "paper-fig3") return pu_sweep("results/paper-fig3", 200);
    throw SpecError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"paper-fig2", "paper-fig3"}; }

void apply_overrides(ExperimentSpec& spec, const Overrides& o) {
    if (o.seed) spec.seed = *o.seed;
    if (o.out) spec.out = *o.out;
    for (auto& v : spec.variations) {
        if (o.pairs) v.pairs = *o.pairs;
        if (o.horizon) v.horizon = *o.horizon;
        if (o.pu_percent) v.pu_percent = *o.pu_percent;
        if (o.protocol) v.protocols = {*o.protocol};
        if (o.channels) v.channels = *o.channels;
        if (o.downsize) v.plan_mode = PlanMode::downsizing;
    }
}

sim::SimConfig make_config(const ExperimentSpec& spec, std::size_t variation_index, ProtocolKind protocol) {
    const Variation& v = spec.variations.at(variation_index);
    if (!(v.pu_percent >= 0.0 && v.pu_percent < 100.0)) {
        throw SpecError(v.name + ": pu must lie in [0, 100)");
    }
    sim::SimConfig c;
    c.channels = v.channels;
    c.plan_mode = v.plan_mode;
    c.drift = v.drift;
    c.horizon = v.horizon;
    c.pairs = v.pairs;
    c.protocol = protocol;
    c.workers = spec.workers;
    c.seed = derive_seed(spec.seed, variation_index);

    const double p = v.pu_percent / 100.0;
    c.pu.busy_len = v.busy_len;
    c.pu.occupied_channels = v.pu_channels.value_or(p > 0.0 ? v.channels : 0);
    if (v.idle_mean) {
        c.pu.idle_mean = *v.idle_mean;
    } else if (p > 0.0) {
        if (c.pu.occupied_channels <= 0) throw SpecError(v.name + ": pu > 0 needs pu_channels > 0");
        // p = (X / N) * b / (l + b)
        const double share = static_cast<double>(c.pu.occupied_channels) / v.channels;
        if (share <= p) throw SpecError(v.name + ": pu_channels too small for the requested pu");
        c.pu.idle_mean = v.busy_len * (share / p - 1.0);
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw SpecError(v.name + ": " + e.what());
    }
    return c;
}

void validate(const ExperimentSpec& spec) {
    if (spec.variations.empty()) throw SpecError("spec defines no [variation] blocks");
    if (spec.out.empty()) throw SpecError("output directory is empty");
    std::set<std::string> names;
    for (std::size_t i = 0; i < spec.variations.size(); ++i) {
        const auto& v = spec.variations[i];
        if (!valid_name(v.name)) {
            throw SpecError("variation " + std::to_string(i + 1) + " needs a name of letters, digits, '_', '-' or '.'");
        }
        if (!names.insert(v.name).second) throw SpecError("duplicate variation name '" + v.name + "'");
        if (v.protocols.empty()) throw SpecError(v.name + ": no protocols");
        for (auto p : v.protocols) make_config(spec, i, p);
    }
}

bool ExperimentOutcome::ok() const noexcept {
    return std::all_of(variations.begin(), variations.end(), [](const auto& v) { return v.ok; });
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::ostream& log) {
    namespace fs = std::filesystem;
    ExperimentOutcome outcome;
    const fs::path out_dir(spec.out);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        for (const auto& v : spec.variations) {
            outcome.variations.push_back({v.name, false, "cannot create output directory: " + ec.message()});
        }
        log << "error: cannot create '" << spec.out << "': " << ec.message() << '\n';
        return outcome;
    }

    std::ostringstream latency;
    metrics::write_latency_header(latency);

    for (std::size_t i = 0; i < spec.variations.size(); ++i) {
        const Variation& v = spec.variations[i];
        VariationOutcome result{v.name, false, {}};
        try {
            std::ostringstream rho_csv;
            std::ostringstream latency_rows;
            std::ostringstream line;
            metrics::write_rho_header(rho_csv);
            line << v.name << ':';
            const double pu_level = v.pu_percent / 100.0;
            for (std::size_t p = 0; p < v.protocols.size(); ++p) {
                const ProtocolKind kind = v.protocols[p];
                const std::string proto(protocol::to_string(kind));
                const auto traces = sim::run(make_config(spec, i, kind));
                const auto series = metrics::rho_series(traces);
                metrics::write_rho_rows(rho_csv, proto, pu_level, series);
                metrics::write_latency_rows(latency_rows, proto, pu_level, metrics::latency_report(traces));

                line << (p == 0 ? " " : " | ") << proto << " rho(" << series.back().t << ")=";
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", series.back().mean);
                line << buf;
                if (kind == ProtocolKind::sass) {
                    const auto ms = metrics::missync(traces);
                    std::snprintf(buf, sizeof buf, "%.4f", ms.rate());
                    line << " missync=" << buf;
                }
                if (v.records) {
                    const fs::path path = out_dir / (v.name + "." + proto + ".records.ndjson");
                    std::ofstream rec(path, std::ios::binary);
                    if (!rec) throw std::runtime_error("cannot write " + path.string());
                    sim::write_slot_records(rec, traces);
                    if (!rec) throw std::runtime_error("write failed: " + path.string());
                    outcome.files_written.push_back(path.string());
                }
            }
            const fs::path rho_path = out_dir / (v.name + ".rho.csv");
            std::ofstream f(rho_path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + rho_path.string());
            f << rho_csv.str();
            if (!f) throw std::runtime_error("write failed: " + rho_path.string());
            outcome.files_written.push_back(rho_path.string());
            latency << latency_rows.str();
            result.ok = true;
            result.message = line.str();
        } catch (const std::exception& e) {
            result.message = v.name + ": FAILED: " + e.what();
        }
        log << result.message << '\n';
        outcome.variations.push_back(std::move(result));
    }

    const fs::path latency_path = out_dir / "latency.csv";
    std::ofstream f(latency_path, std::ios::binary);
    f << latency.str();
    if (!f) {
        log << "error: cannot write " << latency_path.string() << '\n';
        for (auto& v : outcome.variations) v.ok = false;
    } else {
        outcome.files_written.push_back(latency_path.string());
    }
    return outcome;
}

}  // namespace sass::experiment
