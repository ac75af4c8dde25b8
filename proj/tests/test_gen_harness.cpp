#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <algorithm>

#include "contractcheck/errors.hpp"
#include "contractcheck/gen_harness.hpp"
#include "contractcheck/io.hpp"
#include "support/stub_endpoint.hpp"

using namespace contractcheck;

namespace {

const char* kContract = "The User may request issuance of GCDC. XYZ may pause the service at any time.";

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("contractcheck_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    return dir;
}

GenerationConfig config_for(const cc_test::StubEndpoint& stub) {
    GenerationConfig c;
    c.endpoint = stub.url();
    c.timeout = std::chrono::seconds(10);
    return c;
}

}  // namespace

TEST_CASE("prompt sequence") {
    const auto seq = render_prompts(kContract);
    CHECK(seq.steps[0].title.empty());
    CHECK(seq.steps[0].body.rfind("Your task is to help create a Solidity smart contract", 0) == 0);
    CHECK(seq.steps[1].title == "Step 1: Contract Parties, Powers, and Obligations");
    CHECK(seq.steps[2].title == "Step 2: Triggers and Timeframes");
    CHECK(seq.steps[3].title == "Step 3: Penalties and Dispute Resolution");
    CHECK(seq.steps[4].title == "Step 4: Legal and Security Compliance");
    CHECK(seq.steps[5].title == "Step 5: Smart Contract Generation");
    const std::string fenced = std::string("\"\"\"\n") + kContract + "\n\"\"\"";
    CHECK(seq.steps[1].body.find(fenced) != std::string::npos);
    for (std::size_t i = 2; i < seq.steps.size(); ++i) CHECK(seq.steps[i].body.find(kContract) == std::string::npos);
    CHECK(render_prompts(kContract) == seq);
    CHECK_THROWS_AS(render_prompts(""), EmptyContract);
    CHECK_THROWS_AS(render_prompts(" \n\t"), EmptyContract);
}

TEST_CASE("generation defaults") {
    const GenerationConfig c;
    CHECK(c.temperature == 0.8);
    CHECK(c.top_p == 0.9);
    CHECK(c.top_k == 40);
    CHECK(c.max_attempts == 3);
}

TEST_CASE("last fenced code block") {
    CHECK(extract_last_code_block("no code") == std::nullopt);
    CHECK(extract_last_code_block("```\nunterminated") == std::nullopt);
    CHECK(extract_last_code_block("```sol\nA\n```\ntext\n  ```\nB\nC\n```\n") == "B\nC\n");
}

TEST_CASE("first attempt succeeds") {
    cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::string(cc_test::kFencedReply); });
    const auto dir = fresh_dir("ok");
    const auto result = generate_candidate(config_for(stub), kContract, dir);
    CHECK(result.source == "pragma solidity ^0.8.0;\ncontract Stub {}\n");
    REQUIRE(result.attempts.size() == 1);
    CHECK(result.attempts[0].success);

    const auto requests = stub.requests();
    REQUIRE(requests.size() == 6);
    CHECK(requests[0]["temperature"] == 0.8);
    CHECK(requests[0]["top_p"] == 0.9);
    CHECK(requests[0]["top_k"] == 40);
    // one conversation: each request carries the history so far
    CHECK(requests[5]["messages"].size() == 11);
    CHECK(requests[5]["messages"][10]["content"].get<std::string>().rfind("Step 5: Smart Contract Generation", 0) == 0);

    CHECK(read_text_file(dir / "candidate.sol") == result.source);
    CHECK(std::filesystem::exists(dir / "prompts" / "step_5.txt"));
    CHECK(std::filesystem::exists(dir / "attempt_1" / "response_5.txt"));
    const auto log = read_text_file(dir / "attempts.log");
    CHECK(std::count(log.begin(), log.end(), '\n') == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("retries the whole conversation until code appears") {
    // attempts 1 and 2 end without code, attempt 3 delivers
    cc_test::StubEndpoint stub([](const nlohmann::json&, int n) {
        return std::string(n >= 12 && n % 6 == 5 ? cc_test::kFencedReply : "Noted.");
    });
    const auto dir = fresh_dir("retry");
    const auto result = generate_candidate(config_for(stub), kContract, dir);
    CHECK(result.attempts.size() == 3);
    CHECK_FALSE(result.attempts[0].success);
    CHECK(result.attempts[2].success);
    CHECK(stub.requests().size() == 18);
    const auto log = read_text_file(dir / "attempts.log");
    CHECK(std::count(log.begin(), log.end(), '\n') == 3);

    // the log is appended to, not replaced
    (void)generate_candidate(config_for(stub), kContract, dir);
    const auto again = read_text_file(dir / "attempts.log");
    CHECK(std::count(again.begin(), again.end(), '\n') == 4);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gives up after max_attempts") {
    cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::string("```\n\n```"); });
    CHECK_THROWS_AS(generate_candidate(config_for(stub), kContract), NoCodeProduced);
    CHECK(stub.requests().size() == 18);

    auto two = config_for(stub);
    two.max_attempts = 2;
    CHECK_THROWS_AS(generate_candidate(two, kContract), NoCodeProduced);
    CHECK(stub.requests().size() == 18 + 12);
}

TEST_CASE("endpoint failures") {
    cc_test::StubEndpoint stub([](const nlohmann::json&, int) { return std::optional<std::string>(); });
    CHECK_THROWS_AS(generate_candidate(config_for(stub), kContract), EndpointError);

    GenerationConfig bad;
    bad.endpoint = "ftp://example";
    CHECK_THROWS_AS(generate_candidate(bad, kContract), EndpointError);
}
