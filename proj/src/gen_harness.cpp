#include "contractcheck/gen_harness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "contractcheck/errors.hpp"

namespace contractcheck {

namespace {

using nlohmann::json;

constexpr const char* kFence = "\"\"\"";

const char* kPreamble =
    "Your task is to help create a Solidity smart contract based on a provided legal contract. The process "
    "will involve several steps where you will analyze different aspects of the legal contract, document key "
    "elements and necessary assumptions, and then, in the final step, generate the Solidity code. Each step "
    "will focus on a specific part of the contract to ensure clarity and manage complexity effectively.";

const char* kStep1Body =
    "Analyze the provided legal contract. Identify and list:\n"
    "1. The parties involved.\n"
    "2. Their powers and obligations.\n"
    "Document any assumptions or interpretations necessary for understanding these elements. Here is the "
    "legal contract:\n";

const char* kStep2Body =
    "Based on the previously identified parties, powers and obligations, now focus on:\n"
    "1. Events that trigger actions within the contract.\n"
    "2. Timeframes and deadlines relevant to these events, powers, and obligations. Note any interpretations "
    "or assumptions related to these triggers and timeframes.";

const char* kStep3Body =
    "Continuing from the triggers and timeframes, identify:\n"
    "1. Any penalties for non-compliance or breaches.\n"
    "2. Dispute resolution mechanisms specified in the contract.\n"
    "List assumptions or clarifications needed for implementing these features in the smart contract.";

const char* kStep4Body =
    "Before generating the code, ensure the smart contract meets legal and security standards:\n"
    "1. Discuss potential legal issues and how they can be addressed in the Solidity code.\n"
    "2. Identify necessary security features and error handling mechanisms to make the smart contract robust "
    "and secure.\n"
    "Document all assumptions and legal considerations.";

const char* kStep5Body =
    "Now, compile all the information and insights gathered from previous discussions into a concise and "
    "efficient Solidity smart contract. The code should:\n"
    "1. Be structured clearly with defined sections for parties, powers, obligations, triggers, and dispute "
    "resolutions.\n"
    "2. Include essential comments that clarify sections and key functions for future reference.\n"
    "3. Ensure legal and technical compliance as discussed, focusing on functional accuracy and security "
    "features.\n"
    "Generate the smart contract code with minimal additional commentary, keeping it focused and lean. Provide "
    "brief inline comments only where necessary to explain complex logic or important compliance elements.";

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http")
        throw EndpointError("endpoint '" + url + "' must be an http:// URL");
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    ep.base = url.substr(0, path_start);
    ep.path = path_start == std::string::npos ? "/v1/chat/completions" : url.substr(path_start);
    if (ep.base.size() <= scheme_end + 3) throw EndpointError("endpoint '" + url + "' has no host");
    return ep;
}

std::string chat(httplib::Client& client, const Endpoint& ep, const GenerationConfig& config,
                 const json& messages) {
    json request = {{"model", config.model},
                    {"messages", messages},
                    {"temperature", config.temperature},
                    {"top_p", config.top_p},
                    {"top_k", config.top_k}};
    if (config.context_length) request["context_length"] = *config.context_length;

    auto res = client.Post(ep.path, request.dump(), "application/json");
    if (!res) throw EndpointError("request to " + ep.base + ep.path + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw EndpointError("endpoint returned HTTP " + std::to_string(res->status));
    try {
        const auto body = json::parse(res->body);
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw EndpointError(std::string("malformed chat-completion response: ") + e.what());
    }
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace

std::string PromptStep::text() const { return title.empty() ? body : title + "\n" + body; }

PromptSequence render_prompts(std::string_view contract_text) {
    if (std::all_of(contract_text.begin(), contract_text.end(),
                    [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        throw EmptyContract();

    PromptSequence seq;
    seq.steps[0] = {"", kPreamble};
    seq.steps[1] = {"Step 1: Contract Parties, Powers, and Obligations",
                    std::string(kStep1Body) + kFence + "\n" + std::string(contract_text) + "\n" + kFence};
    seq.steps[2] = {"Step 2: Triggers and Timeframes", kStep2Body};
    seq.steps[3] = {"Step 3: Penalties and Dispute Resolution", kStep3Body};
    seq.steps[4] = {"Step 4: Legal and Security Compliance", kStep4Body};
    seq.steps[5] = {"Step 5: Smart Contract Generation", kStep5Body};
    return seq;
}

std::optional<std::string> extract_last_code_block(std::string_view text) {
    std::optional<std::string> last;
    std::optional<std::string> current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        const auto first = line.find_first_not_of(" \t");
        const bool fence = first != std::string_view::npos && line.substr(first, 3) == "```";
        if (fence) {
            if (current) {
                last = std::move(*current);
                current.reset();
            } else {
                current.emplace();
            }
        } else if (current) {
            *current += line;
            *current += '\n';
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return last;
}

GenerationResult generate_candidate(const GenerationConfig& config, std::string_view contract_text,
                                    const std::optional<std::filesystem::path>& run_dir) {
    const auto prompts = render_prompts(contract_text);
    if (config.max_attempts < 1) throw Error("max_attempts must be at least 1");
    const auto ep = split_endpoint(config.endpoint);

    httplib::Client client(ep.base);
    const auto timeout = static_cast<time_t>(config.timeout.count());
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    std::ofstream log;
    if (run_dir) {
        std::filesystem::create_directories(*run_dir / "prompts");
        for (std::size_t i = 0; i < prompts.steps.size(); ++i)
            write_file(*run_dir / "prompts" / ("step_" + std::to_string(i) + ".txt"), prompts.steps[i].text());
        log.open(*run_dir / "attempts.log", std::ios::app);
    }

    GenerationResult result;
    for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
        AttemptRecord record;
        record.attempt = attempt;
        json messages = json::array();
        for (const auto& step : prompts.steps) {
            messages.push_back({{"role", "user"}, {"content", step.text()}});
            auto reply = chat(client, ep, config, messages);
            messages.push_back({{"role", "assistant"}, {"content", reply}});
            record.responses.push_back(std::move(reply));
        }

        const auto code = extract_last_code_block(record.responses.back());
        const bool blank = !code || std::all_of(code->begin(), code->end(), [](char c) {
            return std::isspace(static_cast<unsigned char>(c));
        });
        record.success = !blank;
        if (!code) record.reason = "no fenced code block in final response";
        else if (blank) record.reason = "fenced code block is empty";

        if (run_dir) {
            const auto dir = *run_dir / ("attempt_" + std::to_string(attempt));
            std::filesystem::create_directories(dir);
            for (std::size_t i = 0; i < record.responses.size(); ++i)
                write_file(dir / ("response_" + std::to_string(i) + ".txt"), record.responses[i]);
            log << json{{"attempt", attempt}, {"success", record.success}, {"reason", record.reason},
                        {"model", config.model}}
                       .dump()
                << "\n"
                << std::flush;
        }
        result.attempts.push_back(std::move(record));

        if (!blank) {
            result.source = *code;
            if (run_dir) write_file(*run_dir / "candidate.sol", result.source);
            return result;
        }
    }
    throw NoCodeProduced(config.max_attempts);
}

}  // namespace contractcheck
