// sass: inspection and experiment front-end for the SASS library.
//
//   sass sequence --channels 7 --downsize
//   sass theorems --channels 8
//   sass experiment --preset paper-fig2 --out results
//
// Exit status: 0 on success, 1 when a request is rejected or a run fails,
// 2 on command-line usage errors.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include "sass/experiment.hpp"
#include "sass/hopping.hpp"
#include "sass/simenv.hpp"
#include "sass/skolem.hpp"

namespace {

using namespace sass;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

template <typename T>
std::string braces(std::span<const T> values) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out << ',';
        out << static_cast<long long>(values[i]);
    }
    out << '}';
    return out.str();
}

struct SequenceArgs {
    std::optional<int> order;
    std::optional<int> channels;
    bool downsize = false;
};

int cmd_sequence(const SequenceArgs& args) {
    if (args.order) {
        const int n = *args.order;
        if (!skolem::order_exists(n)) {
            std::cerr << "error: " << ExistenceError(n).what() << '\n';
            return kFailure;
        }
        const auto s = skolem::construct_skolem(n);
        const auto ess = skolem::extend_to_ess(s);
        const bool ok = skolem::verify_skolem(s.values(), skolem::Base::one) &&
                        skolem::verify_skolem(std::vector<int>(ess.values().begin(), ess.values().end()),
                                              skolem::Base::zero);
        std::cout << "order: " << n << '\n'
                  << "skolem: " << braces(s.values()) << '\n'
                  << "ess: " << braces(ess.values()) << '\n'
                  << "channels: " << ess.channel_count() << '\n'
                  << "period: " << ess.period() << '\n'
                  << "verdict: " << (ok ? "VALID" : "INVALID") << '\n';
        return ok ? kOk : kFailure;
    }

    const auto mode = args.downsize ? skolem::PlanMode::downsizing : skolem::PlanMode::padding;
    skolem::ChannelPlan plan(1, 1, mode);
    try {
        plan = skolem::make_channel_plan(*args.channels, mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    const auto ess = skolem::ess_for_channels(plan.effective_count());
    const std::vector<int> as_int(ess.values().begin(), ess.values().end());
    const bool ok = skolem::verify_skolem(as_int, skolem::Base::zero);

    std::cout << "channels: N=" << plan.physical_count() << " N'=" << plan.effective_count() << " ("
              << skolem::to_string(mode) << ")\n";
    if (mode == skolem::PlanMode::downsizing) {
        std::cout << "discarded: " << braces(std::span<const Channel>(plan.discarded())) << '\n';
    } else if (plan.effective_count() > plan.physical_count()) {
        std::cout << "aliases:";
        for (int c = plan.physical_count(); c < plan.effective_count(); ++c) {
            std::cout << ' ' << c << "->" << static_cast<int>(plan.physical(static_cast<Channel>(c)));
        }
        std::cout << '\n';
    }
    std::cout << "ess: " << braces(ess.values()) << '\n'
              << "period: " << ess.period() << '\n'
              << "verdict: " << (ok ? "VALID" : "INVALID") << '\n';
    return ok ? kOk : kFailure;
}

int cmd_theorems(int n) {
    if (n < 1 || n > 64 || (n % 4 != 0 && n % 4 != 1)) {
        std::cerr << "error: N' = " << n << " must satisfy N' = 0 or 1 (mod 4) and 1 <= N' <= 64\n";
        return kFailure;
    }
    const auto ess = skolem::ess_for_channels(n);
    const auto report = hopping::verify_theorems(ess);
    auto verdict = [](bool b) { return b ? "PASS" : "FAIL"; };

    std::cout << "N' = " << n << ", ESS " << braces(ess.values()) << '\n';
    std::cout << "drift pairs checked: " << report.pairs_checked << '\n';
    std::cout << verdict(report.channels_all_iff_aligned) << "  C = all channels iff g = 0\n";
    std::cout << verdict(report.channels_single_otherwise) << "  C = {|g|-1} for g != 0\n";
    std::cout << verdict(report.slots_full_iff_aligned) << "  |D| = 2N' iff g = 0\n";
    std::cout << verdict(report.slots_one_iff_inner) << "  |D| = 1 iff 0 < |g| < N'\n";
    std::cout << verdict(report.slots_two_iff_half) << "  |D| = 2 iff |g| = N'\n";

    std::cout << "shift  C(shift(u,a), u)\n";
    for (std::size_t a = 0; a < report.drift_table.size(); ++a) {
        std::printf("%5zu  %s\n", a, hopping::to_string(report.drift_table[a]).c_str());
    }
    std::cout.flush();

    bool bound_ok = true;
    if (n >= 4) {
        // PU-free first delivery bound, plus calibration soundness, over every drift.
        const std::uint64_t bound = 4ULL * n * (n - 1);
        const std::uint64_t frame = 2ULL * n;
        const auto sweep = sim::sweep_drifts(n, std::max(bound, 6 * frame));
        std::size_t late = 0;
        std::size_t unsound = 0;
        for (const auto& e : sweep) {
            if (!e.first_delivery || *e.first_delivery >= bound) ++late;
            const auto& p = e.protocol;
            const bool synced_in_time =
                p.synced_from_frame && p.first_delivery_frame && *p.synced_from_frame <= *p.first_delivery_frame + 3;
            if (!synced_in_time || e.missync || !e.delivers_after_sync) ++unsound;
        }
        std::cout << verdict(late == 0) << "  first delivery within 4N'(N'-1) = " << bound << " slots ("
                  << sweep.size() << " drifts, " << late << " late)\n";
        std::cout << verdict(unsound == 0) << "  synced within 3 frames, no mis-sync (" << unsound
                  << " violations)\n";
        bound_ok = late == 0 && unsound == 0;
    }
    return report.all_pass() && bound_ok ? kOk : kFailure;
}

struct ExperimentArgs {
    std::string spec_path;
    std::string preset;
    bool dump_default = false;
    experiment::Overrides overrides;
    std::optional<std::string> protocol;
};

int cmd_experiment(ExperimentArgs& args) {
    experiment::ExperimentSpec spec;
    try {
        if (args.protocol) args.overrides.protocol = protocol::parse_protocol_kind(*args.protocol);
        if (args.dump_default) {
            spec = experiment::preset(args.preset.empty() ? "paper-fig2" : args.preset);
            experiment::apply_overrides(spec, args.overrides);
            std::cout << experiment::format_spec(spec);
            return kOk;
        }
        if (!args.spec_path.empty()) {
            spec = experiment::load_spec(args.spec_path);
        } else if (!args.preset.empty()) {
            spec = experiment::preset(args.preset);
        } else {
            std::cerr << "error: give a spec file or --preset\n";
            return kUsage;
        }
        experiment::apply_overrides(spec, args.overrides);
        experiment::validate(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }

    const auto outcome = experiment::run_experiment(spec, std::cout);
    for (const auto& f : outcome.files_written) std::cerr << "wrote " << f << '\n';
    return outcome.ok() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SASS channel-hopping broadcast: sequences, theorem checks and experiments"};
    app.require_subcommand(1);

    SequenceArgs seq;
    auto* sequence = app.add_subcommand("sequence", "Construct and verify a Skolem sequence or an ESS");
    auto* order_opt = sequence->add_option("--order,-n", seq.order, "Skolem order n");
    auto* chan_opt = sequence->add_option("--channels,-N", seq.channels, "physical channel count N")
                         ->check(CLI::Range(1, 255));
    sequence->add_flag("--downsize", seq.downsize, "discard channels instead of padding");
    order_opt->excludes(chan_opt);
    sequence->callback([&] {
        if (!seq.order && !seq.channels) throw CLI::RequiredError("--order or --channels");
    });

    int theorem_channels = 0;
    auto* theorems = app.add_subcommand("theorems", "Exhaustively check the delivery theorems for N'");
    theorems->add_option("--channels,-N", theorem_channels, "effective channel count N'")->required();

    ExperimentArgs exp;
    auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment spec and write CSVs");
    experiment_cmd->add_option("spec", exp.spec_path, "spec file");
    experiment_cmd->add_option("--preset", exp.preset, "bundled spec: paper-fig2 or paper-fig3")
        ->check(CLI::IsMember(experiment::preset_names()));
    experiment_cmd->add_flag("--dump-default", exp.dump_default, "print the preset spec (default paper-fig2) and exit");
    experiment_cmd->add_option("--seed", exp.overrides.seed, "global seed");
    experiment_cmd->add_option("--out", exp.overrides.out, "output directory");
    experiment_cmd->add_option("--pairs", exp.overrides.pairs, "sender/receiver pairs per variation")
        ->check(CLI::PositiveNumber);
    experiment_cmd->add_option("--horizon", exp.overrides.horizon, "slots per pair")->check(CLI::PositiveNumber);
    experiment_cmd->add_option("--pu", exp.overrides.pu_percent, "PU intensity in percent, all variations")
        ->check(CLI::Range(0.0, 99.999));
    experiment_cmd->add_option("--protocol", exp.protocol, "run only this protocol (sass, rch, css)");
    experiment_cmd->add_option("--channels", exp.overrides.channels, "physical channel count N")
        ->check(CLI::Range(1, 255));
    experiment_cmd->add_flag("--downsize", exp.overrides.downsize, "force the downsizing channel plan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sequence) return cmd_sequence(seq);
        if (*theorems) return cmd_theorems(theorem_channels);
        return cmd_experiment(exp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
