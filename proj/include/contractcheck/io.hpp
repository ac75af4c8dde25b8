#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "contractcheck/alignment.hpp"
#include "contractcheck/diagnostic.hpp"
#include "contractcheck/metrics.hpp"
#include "contractcheck/petri_net.hpp"

namespace contractcheck {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// A parsed `.pnet` file plus where each place/transition was declared.
struct NetDocument {
    PetriNet net;
    std::map<std::string, SourceSpan> spans;
};

struct AlignDocument {
    EventAlignment alignment;
    std::map<std::string, SourceSpan> spans;  // keyed by "event:<label>", "legal:<place>", ...
};

/// Line-oriented `.pnet` grammar:
///
///     net "<name>"
///     place <id> [tokens=<n>] [legal=power|obligation] [lcp]
///     transition <id> actor=<id> action=<id> [temporal]
///     arc <a> -> <b>      normal; direction taken from the node kinds
///     arc <p> <-> <t>     bidirectional
///     arc <p> -o <t>      inhibitor
///
/// `#` starts a comment. Throws ParseError with line and column.
NetDocument parse_net_document(std::string_view text);
PetriNet parse_net(std::string_view text);

/// Canonical text: header, places, transitions, arcs, each sorted. LF line endings.
std::string serialize_net(const PetriNet& net);

/// `.align` grammar:
///
///     align "<name>"
///     event <actor>:<action> => <actor>:<action>
///     irrelevant <actor>:<action>
///     legal <candidate-place> => <ground-place>
///     illegal-seq <actor>:<action> [<actor>:<action> ...]
AlignDocument parse_alignment_document(std::string_view text);
EventAlignment parse_alignment(std::string_view text);
std::string serialize_alignment(const EventAlignment& align);

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
PetriNet load_net(const std::filesystem::path& path);
EventAlignment load_alignment(const std::filesystem::path& path);

enum class ReportFormat { json, table };

nlohmann::ordered_json report_to_json(const ComplianceReport& report);
/// `table` prints a FES / Fitness / Precision grid; `json` the versioned report
/// schema (see docs/report-schema.md). Ratios render with `digits` decimals.
std::string serialize_report(const ComplianceReport& report, ReportFormat format, int digits = 2);

}  // namespace contractcheck
