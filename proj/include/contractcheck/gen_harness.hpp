#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace contractcheck {

struct PromptStep {
    std::string title;  // empty for the preamble
    std::string body;

    /// Title and body as sent to the model.
    std::string text() const;
    bool operator==(const PromptStep&) const = default;
};

/// Preamble followed by the five analysis/generation steps.
struct PromptSequence {
    static constexpr std::size_t kSize = 6;
    std::array<PromptStep, kSize> steps;

    bool operator==(const PromptSequence&) const = default;
};

/// Throws EmptyContract for empty or whitespace-only text.
PromptSequence render_prompts(std::string_view contract_text);

struct GenerationConfig {
    /// http://host[:port][/path]; the path defaults to /v1/chat/completions.
    std::string endpoint;
    std::string model = "default";
    double temperature = 0.8;
    double top_p = 0.9;
    int top_k = 40;
    int max_attempts = 3;
    std::chrono::seconds timeout{120};
    /// Passed through to the endpoint when set; not enforced locally.
    std::optional<std::size_t> context_length;
};

struct AttemptRecord {
    int attempt = 0;
    bool success = false;
    std::string reason;                  // why the attempt was rejected, empty on success
    std::vector<std::string> responses;  // one per prompt
};

struct GenerationResult {
    std::string source;
    std::vector<AttemptRecord> attempts;
};

/// Contents of the last fenced code block in `text`, if any.
std::optional<std::string> extract_last_code_block(std::string_view text);

/// Runs the prompt sequence as one conversation, retrying the whole
/// conversation while the final answer lacks a usable code block. With a
/// `run_dir`, prompts, raw responses, the extracted code and an append-only
/// attempts.log (one JSON object per line) are written there.
/// Throws EndpointError on network or HTTP failures and NoCodeProduced once
/// max_attempts conversations have failed.
GenerationResult generate_candidate(const GenerationConfig& config, std::string_view contract_text,
                                    const std::optional<std::filesystem::path>& run_dir = std::nullopt);

}  // namespace contractcheck
