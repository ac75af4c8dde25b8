#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace contractcheck {

enum class Severity { error, warning };

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    bool operator==(const SourceSpan&) const = default;
};

/// A validation finding. Codes are stable: E_* are errors, W_* warnings.
struct Diagnostic {
    std::string code;
    Severity severity = Severity::error;
    std::string message;
    std::string subject;  // offending identifier, may be empty
    std::optional<SourceSpan> span;

    bool operator==(const Diagnostic&) const = default;
};

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::error) return true;
    return false;
}

/// `code: message [subject]` on one line.
std::string format_diagnostic(const Diagnostic& d);

}  // namespace contractcheck
