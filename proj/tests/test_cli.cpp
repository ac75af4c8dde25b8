#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "contractcheck/cli.hpp"
#include "contractcheck/io.hpp"
#include "support/fixtures.hpp"
#include "support/stub_endpoint.hpp"

using contractcheck::cli::run;
using cc_test::corpus_file;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string path(const char* name) { return corpus_file(name).string(); }

std::string last_line(const std::string& s) {
    auto trimmed = s;
    while (!trimmed.empty() && trimmed.back() == '\n') trimmed.pop_back();
    return trimmed.substr(trimmed.rfind('\n') + 1);
}

}  // namespace

TEST_CASE("behaviors prints the canonical list and count") {
    const auto r = invoke({"behaviors", path("gcdc_legal.pnet")});
    CHECK(r.code == 0);
    CHECK(last_line(r.out) == "12 behaviors");
    CHECK(r.out.rfind("0: XYZ:blacklist XYZ:pause\n", 0) == 0);
    CHECK(invoke({"behaviors", "--count-only", path("chain3_ground.pnet")}).out == "1 behaviors\n");
}

TEST_CASE("validate") {
    auto r = invoke({"validate", path("gcdc_legal.pnet"), path("chain3_ground.pnet")});
    CHECK(r.code == 0);
    CHECK(r.out.find("ok (15 places, 5 transitions)") != std::string::npos);

    const auto bad = std::filesystem::temp_directory_path() / "contractcheck_cli_bad.pnet";
    {
        std::ofstream f(bad);
        f << "net \"bad\"\nplace p tokens=one\n";
    }
    r = invoke({"validate", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("2:9: E_BAD_VALUE") != std::string::npos);
    {
        std::ofstream f(bad);
        f << "net \"bad\"\nplace p\n";
    }
    r = invoke({"validate", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("E_NO_INITIAL_TOKENS") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("reach and explosion exit codes") {
    auto r = invoke({"reach", path("gcdc_legal.pnet")});
    CHECK(r.code == 0);
    CHECK(r.out.find("gcdc_legal:") == 0);

    r = invoke({"reach", path("transactive_stress.pnet"), "--max-states", "5000"});
    CHECK(r.code == 3);
    CHECK(r.err.find("transactive_stress") != std::string::npos);

    r = invoke({"reach", "--lcp-auto", path("transactive_stress.pnet")});
    CHECK(r.code == 0);
    CHECK(r.out.find("256 states") != std::string::npos);

    r = invoke({"behaviors", "--lcp-auto", "--max-paths", "100", path("transactive_stress.pnet")});
    CHECK(r.code == 3);
}

TEST_CASE("no terminal markings exit code") {
    const auto cyc = std::filesystem::temp_directory_path() / "contractcheck_cli_cycle.pnet";
    {
        std::ofstream f(cyc);
        f << "net \"cycle\"\nplace a tokens=1\nplace b\ntransition ab actor=X action=ab\n"
             "transition ba actor=X action=ba\narc a -> ab\narc ab -> b\narc b -> ba\narc ba -> a\n";
    }
    auto r = invoke({"behaviors", cyc.string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("--lcp-auto") != std::string::npos);
    r = invoke({"behaviors", "--allow-no-terminal", cyc.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "0 behaviors\n");
    std::filesystem::remove(cyc);
}

TEST_CASE("compare prints FES, Fitness, Precision") {
    auto r = invoke({"compare", "--ground", path("gcdc_legal.pnet"), "--candidate", path("gcdc_legal.pnet")});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header.find("FES") < header.find("Fitness"));
    CHECK(header.find("Fitness") < header.find("Precision"));
    CHECK(row.find("1.00  1.00     1.00") != std::string::npos);

    r = invoke({"compare", "--ground", path("gcdc_legal.pnet"), "--candidate", path("gcdc_claude_pattern.pnet"),
                "--align", path("gcdc_claude_pattern.align")});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.50  0.50     0.43") != std::string::npos);
    CHECK(r.err.find("W_UNMAPPED_EVENT") != std::string::npos);
}

TEST_CASE("compare output is deterministic and the JSON report is written") {
    const std::vector<std::string> args = {"compare", "--ground", path("pizza_pattern_ground.pnet"), "--candidate",
                                           path("pizza_pattern_claude.pnet"), "--align",
                                           path("pizza_pattern_claude.align")};
    CHECK(invoke(args).out == invoke(args).out);

    const auto report = std::filesystem::temp_directory_path() / "contractcheck_cli_report.json";
    auto with_report = args;
    with_report.insert(with_report.end(), {"--report", report.string(), "--digits", "3"});
    const auto r = invoke(with_report);
    CHECK(r.code == 0);
    CHECK(r.out.find("0.333") != std::string::npos);
    const auto j = nlohmann::json::parse(contractcheck::read_text_file(report));
    CHECK(j["schema_version"] == "1.0");
    CHECK(j["counts"]["ground_strictly_matched"] == 1);
    std::filesystem::remove(report);

    auto json_args = args;
    json_args.insert(json_args.end(), {"--format", "json"});
    CHECK(nlohmann::json::parse(invoke(json_args).out)["metrics"]["fes"]["numerator"] == 3);
}

TEST_CASE("pruning is reported on stderr") {
    const auto r = invoke({"compare", "--lcp-auto", "--ground", path("transactive_synthetic_ground.pnet"),
                           "--candidate", path("transactive_stress.pnet"), "--align", path("transactive_stress.align")});
    CHECK(r.code == 0);
    CHECK(r.err.find("W_PRUNED_BEHAVIORS") != std::string::npos);
    CHECK(r.err.find("725760") != std::string::npos);
}

TEST_CASE("usage errors and help") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"behaviors", path("gcdc_legal.pnet"), "--bogus"}).code == 1);
    CHECK(invoke({"behaviors", path("gcdc_legal.pnet"), "--max-states", "0"}).code == 1);
    CHECK(invoke({"compare", "--ground", path("gcdc_legal.pnet")}).code == 1);

    const auto help = invoke({"compare", "--help"});
    CHECK(help.code == 0);
    for (const char* flag : {"--ground", "--candidate", "--align", "--report", "--format", "--digits", "--no-prune",
                             "--exclude-pruned", "--lcp-auto", "--allow-no-terminal", "--max-states", "--max-paths",
                             "--max-depth"})
        CHECK(help.out.find(flag) != std::string::npos);
    const auto gen_help = invoke({"generate", "--help"});
    for (const char* flag : {"--contract", "--endpoint", "--attempts", "--model", "--out-dir", "--timeout"})
        CHECK(gen_help.out.find(flag) != std::string::npos);
}

TEST_CASE("generate against a stub endpoint") {
    const auto contract = std::filesystem::temp_directory_path() / "contractcheck_cli_contract.txt";
    {
        std::ofstream f(contract);
        f << "The User may redeem GCDC.\n";
    }
    {
        cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::string(cc_test::kFencedReply); });
        const auto r = invoke({"generate", "--contract", contract.string(), "--endpoint", stub.url()});
        CHECK(r.code == 0);
        CHECK(r.out == "pragma solidity ^0.8.0;\ncontract Stub {}\n");
    }
    {
        cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::string("no code here"); });
        const auto r = invoke({"generate", "--contract", contract.string(), "--endpoint", stub.url()});
        CHECK(r.code == 5);
        CHECK(stub.requests().size() == 18);
    }
    {
        cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::optional<std::string>(); });
        CHECK(invoke({"generate", "--contract", contract.string(), "--endpoint", stub.url()}).code == 5);
    }
    ::unsetenv("CONTRACTCHECK_ENDPOINT");
    CHECK(invoke({"generate", "--contract", contract.string()}).code == 1);
    std::filesystem::remove(contract);
}
