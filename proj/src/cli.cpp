#include "contractcheck/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "contractcheck/alignment.hpp"
#include "contractcheck/errors.hpp"
#include "contractcheck/gen_harness.hpp"
#include "contractcheck/io.hpp"
#include "contractcheck/metrics.hpp"
#include "contractcheck/reachability.hpp"

namespace contractcheck::cli {

namespace {

namespace fs = std::filesystem;

struct LimitFlags {
    ExplorationLimits limits;
    bool lcp_auto = false;
    bool allow_no_terminal = false;
};

void add_limit_flags(CLI::App* cmd, LimitFlags& flags) {
    cmd->add_option("--max-states", flags.limits.max_states, "Reachable-marking ceiling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-paths", flags.limits.max_paths, "Behavior-count ceiling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-depth", flags.limits.max_depth, "Longest behavior explored")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--lcp-auto", flags.lcp_auto, "Insert loop-control places for self-looping transitions");
    cmd->add_flag("--allow-no-terminal", flags.allow_no_terminal,
                  "Return an empty behavior set instead of failing when no marking is dead");
}

PetriNet load_checked(const fs::path& path, bool lcp_auto, std::ostream& err) {
    PetriNet net;
    try {
        net = load_net(path);
    } catch (const ParseError& e) {
        throw ParseError(e.code(), path.string() + ": " + e.what(), e.line(), e.column());
    }
    if (lcp_auto) net = insert_loop_controls(net);
    auto diags = validate_net(net);
    for (const auto& d : diags) err << path.string() << ": " << format_diagnostic(d) << "\n";
    if (has_errors(diags)) throw ValidationFailed("net '" + net.name() + "' is invalid", std::move(diags));
    return net;
}

int cmd_validate(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
    int status = kOk;
    for (const auto& file : files) {
        try {
            const auto net = load_checked(file, false, err);
            out << file << ": ok (" << net.places().size() << " places, " << net.transitions().size()
                << " transitions)\n";
        } catch (const ParseError& e) {
            err << e.what() << "\n";
            status = kInvalidInput;
        } catch (const ValidationFailed& e) {
            err << file << ": " << e.what() << "\n";
            status = kInvalidInput;
        }
    }
    return status;
}

int cmd_reach(const std::string& file, const LimitFlags& flags, std::ostream& out, std::ostream& err) {
    const auto net = load_checked(file, flags.lcp_auto, err);
    const auto rg = build_reachability_graph(net, flags.limits);
    out << net.name() << ": " << rg.nodes().size() << " states, " << rg.edges().size() << " edges, "
        << rg.terminals().size() << " terminal markings\n";
    const auto dead = find_dead_transitions(net, rg);
    for (const auto& t : dead) out << "dead transition: " << t << "\n";
    return kOk;
}

int cmd_behaviors(const std::string& file, const LimitFlags& flags, bool quiet, std::ostream& out,
                  std::ostream& err) {
    const auto net = load_checked(file, flags.lcp_auto, err);
    const auto rg = build_reachability_graph(net, flags.limits);
    const auto set = enumerate_behaviors(rg, flags.limits, {flags.allow_no_terminal});
    if (!quiet) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            out << i << ":";
            for (const auto& label : set.labels(set[i])) out << " " << label.str();
            out << "\n";
        }
    }
    if (set.depth_truncated() > 0)
        err << "warning: " << set.depth_truncated() << " path(s) exceeded max-depth and were dropped\n";
    out << set.size() << " behaviors\n";
    return kOk;
}

struct CompareFlags {
    std::string ground;
    std::string candidate;
    std::string align;
    std::string report;
    std::string format = "table";
    int digits = 2;
    bool no_prune = false;
    bool exclude_pruned = false;
};

int cmd_compare(const CompareFlags& flags, const LimitFlags& limits, std::ostream& out, std::ostream& err) {
    const auto ground = load_checked(flags.ground, false, err);
    const auto candidate = load_checked(flags.candidate, false, err);
    EventAlignment align;
    if (flags.align.empty()) {
        align = identity_alignment(ground);
    } else {
        try {
            align = load_alignment(flags.align);
        } catch (const ParseError& e) {
            throw ParseError(e.code(), flags.align + ": " + e.what(), e.line(), e.column());
        }
    }

    CompareOptions options;
    options.limits = limits.limits;
    options.lcp_auto = limits.lcp_auto;
    options.allow_no_terminal = limits.allow_no_terminal;
    options.prune = !flags.no_prune;
    options.exclude_pruned = flags.exclude_pruned;

    ComplianceReport report;
    try {
        report = compare(ground, candidate, align, options);
    } catch (const ValidationFailed& e) {
        for (const auto& d : e.diagnostics()) err << format_diagnostic(d) << "\n";
        throw;
    }
    for (const auto& d : report.diagnostics) err << format_diagnostic(d) << "\n";

    if (!flags.report.empty()) {
        std::ofstream file(flags.report, std::ios::binary);
        if (!file) throw Error("cannot write report '" + flags.report + "'");
        file << serialize_report(report, ReportFormat::json, flags.digits);
    }
    const auto format = flags.format == "json" ? ReportFormat::json : ReportFormat::table;
    out << serialize_report(report, format, flags.digits);
    return kOk;
}

struct GenerateFlags {
    std::string contract;
    std::string endpoint;
    std::string model = "default";
    std::string out_dir;
    int attempts = 3;
    int timeout = 120;
};

int cmd_generate(const GenerateFlags& flags, std::ostream& out, std::ostream& err) {
    GenerationConfig config;
    config.endpoint = flags.endpoint;
    if (config.endpoint.empty())
        if (const char* env = std::getenv("CONTRACTCHECK_ENDPOINT")) config.endpoint = env;
    if (config.endpoint.empty()) {
        err << "generate: no endpoint; pass --endpoint or set CONTRACTCHECK_ENDPOINT\n";
        return kUsage;
    }
    config.model = flags.model;
    config.max_attempts = flags.attempts;
    config.timeout = std::chrono::seconds(flags.timeout);

    const auto text = read_text_file(flags.contract);
    std::optional<fs::path> run_dir;
    if (!flags.out_dir.empty()) run_dir = flags.out_dir;
    try {
        const auto result = generate_candidate(config, text, run_dir);
        for (const auto& a : result.attempts)
            err << "attempt " << a.attempt << ": " << (a.success ? "ok" : a.reason) << "\n";
        out << result.source;
    } catch (const NoCodeProduced& e) {
        err << e.what() << "\n";
        return kEndpoint;
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Petri-net compliance checking of smart contracts against legal contracts", "contractcheck"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::vector<std::string> validate_files;
    auto* validate = app.add_subcommand("validate", "Parse and check .pnet files");
    validate->add_option("nets", validate_files, "Net files")->required()->check(CLI::ExistingFile);

    LimitFlags limits;
    std::string net_file;
    auto* reach = app.add_subcommand("reach", "Build the reachability graph and report its size");
    reach->add_option("net", net_file, "Net file")->required()->check(CLI::ExistingFile);
    add_limit_flags(reach, limits);

    bool quiet = false;
    auto* behaviors = app.add_subcommand("behaviors", "List behaviors (root-to-dead paths) and their count");
    behaviors->add_option("net", net_file, "Net file")->required()->check(CLI::ExistingFile);
    behaviors->add_flag("--count-only", quiet, "Print only the count");
    add_limit_flags(behaviors, limits);

    CompareFlags cmp;
    auto* compare_cmd = app.add_subcommand("compare", "Compute FES, fitness and precision of a candidate");
    compare_cmd->add_option("--ground", cmp.ground, "Legal-contract net")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--candidate", cmp.candidate, "Smart-contract net")
        ->required()
        ->check(CLI::ExistingFile);
    compare_cmd->add_option("--align", cmp.align, "Alignment file; identity when omitted")
        ->check(CLI::ExistingFile);
    compare_cmd->add_option("--report", cmp.report, "Also write the JSON report to this path");
    compare_cmd->add_option("--format", cmp.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    compare_cmd->add_option("--digits", cmp.digits, "Decimals when rendering ratios")
        ->check(CLI::Range(0, 9))
        ->capture_default_str();
    compare_cmd->add_flag("--no-prune", cmp.no_prune, "Ignore the alignment's illegal sequences");
    compare_cmd->add_flag("--exclude-pruned", cmp.exclude_pruned,
                          "Leave pruned candidate behaviors out of the precision denominator");
    add_limit_flags(compare_cmd, limits);

    GenerateFlags gen;
    auto* generate = app.add_subcommand("generate", "Ask a chat-completion endpoint for smart-contract source");
    generate->add_option("--contract", gen.contract, "Legal contract text file")
        ->required()
        ->check(CLI::ExistingFile);
    generate->add_option("--endpoint", gen.endpoint, "http://host:port[/path]; defaults to $CONTRACTCHECK_ENDPOINT");
    generate->add_option("--model", gen.model, "Model name sent to the endpoint")->capture_default_str();
    generate->add_option("--attempts", gen.attempts, "Conversation attempts")
        ->check(CLI::Range(1, 100))
        ->capture_default_str();
    generate->add_option("--timeout", gen.timeout, "Per-request timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--out-dir", gen.out_dir, "Run directory for prompts, responses and attempts.log");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) return cmd_validate(validate_files, out, err);
        if (*reach) return cmd_reach(net_file, limits, out, err);
        if (*behaviors) return cmd_behaviors(net_file, limits, quiet, out, err);
        if (*compare_cmd) return cmd_compare(cmp, limits, out, err);
        if (*generate) return cmd_generate(gen, out, err);
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const ValidationFailed& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const StateExplosion& e) {
        err << e.what() << "\n";
        return kExplosion;
    } catch (const PathExplosion& e) {
        err << e.what() << "\n";
        return kExplosion;
    } catch (const NoTerminalMarkings& e) {
        err << e.what() << "\n";
        return kNoTerminal;
    } catch (const EndpointError& e) {
        err << e.what() << "\n";
        return kEndpoint;
    } catch (const EmptyContract& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    }
    return kUsage;
}

}  // namespace contractcheck::cli
