#pragma once

// Experiment specs: a flat key = value text format with repeated [variation]
// blocks, bundled presets, and the sweep driver that writes the metric CSVs.
//
//   # comment
//   seed = 7
//   out = results
//
//   [variation]
//   name = pu25
//   protocols = sass, rch, css
//   pu = 25                 # percent of channel-slots occupied by PUs
//   channels = 15
//   plan = downsizing
//   busy_len = 12
//   pairs = 1000
//   horizon = 1000
//
// Keys other than seed/out/workers given before the first [variation] are
// defaults inherited by every variation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sass/protocol.hpp"
#include "sass/simenv.hpp"

namespace sass::experiment {

using protocol::ProtocolKind;
using skolem::PlanMode;

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Variation {
    std::string name;
    std::vector<ProtocolKind> protocols{ProtocolKind::sass, ProtocolKind::rch, ProtocolKind::css};
    double pu_percent = 0.0;
    int channels = 15;
    PlanMode plan_mode = PlanMode::downsizing;
    int busy_len = 12;
    /// X; defaults to every physical channel when pu > 0.
    std::optional<int> pu_channels;
    /// l; derived from pu, X and b when absent.
    std::optional<double> idle_mean;
    std::optional<std::int64_t> drift;
    std::size_t pairs = 1000;
    std::uint64_t horizon = 1000;
    bool records = false;

    friend bool operator==(const Variation&, const Variation&) = default;
};

struct ExperimentSpec {
    std::uint64_t seed = 1;
    std::string out = "results";
    unsigned workers = 0;
    std::vector<Variation> variations;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Throws SpecError (with the offending line number) on malformed input and
/// on semantic problems: no variations, duplicate names, invalid configs.
ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec parse_spec_text(std::string_view text);
ExperimentSpec load_spec(const std::string& path);

/// Canonical text; parse_spec_text(format_spec(s)) == s.
std::string format_spec(const ExperimentSpec& spec);

/// "paper-fig2" or "paper-fig3".
ExperimentSpec preset(std::string_view name);
std::vector<std::string> preset_names();

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> pairs;
    std::optional<std::uint64_t> horizon;
    std::optional<double> pu_percent;
    std::optional<ProtocolKind> protocol;
    std::optional<int> channels;
    bool downsize = false;
};

void apply_overrides(ExperimentSpec& spec, const Overrides& overrides);

/// Throws SpecError if any variation is invalid.
void validate(const ExperimentSpec& spec);

/// Simulator config for one protocol of one variation. The seed is
/// derive_seed(spec.seed, variation_index); every protocol of a variation
/// shares it, so they see the same drifts and PU channel draws.
sim::SimConfig make_config(const ExperimentSpec& spec, std::size_t variation_index, ProtocolKind protocol);

struct VariationOutcome {
    std::string name;
    bool ok = false;
    std::string message;  // summary line or error
};

struct ExperimentOutcome {
    std::vector<VariationOutcome> variations;
    std::vector<std::string> files_written;
    bool ok() const noexcept;
};

/// Runs every variation and writes <out>/<name>.rho.csv per variation plus
/// <out>/latency.csv across variations. A failing variation is reported and
/// skipped; the others still run. One summary line per variation goes to `log`.
ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::ostream& log);

}  // namespace sass::experiment
