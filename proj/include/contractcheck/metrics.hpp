#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "contractcheck/alignment.hpp"
#include "contractcheck/diagnostic.hpp"
#include "contractcheck/petri_net.hpp"
#include "contractcheck/reachability.hpp"

namespace contractcheck {

inline constexpr const char* kToolName = "contractcheck";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exact ratio; rendering rounds half-up.
struct Ratio {
    std::size_t numerator = 0;
    std::size_t denominator = 1;

    double value() const { return denominator == 0 ? 0.0 : static_cast<double>(numerator) / denominator; }
    /// Half-up decimal rendering with `digits` fractional digits, e.g. 12/28 -> "0.43".
    std::string rounded(int digits = 2) const;

    bool operator==(const Ratio&) const = default;
};

struct MetricCounts {
    std::size_t ground_total = 0;
    std::size_t candidate_total = 0;
    std::size_t ground_strictly_matched = 0;
    std::size_t ground_covered = 0;
    std::size_t candidate_embedded = 0;
    std::size_t pruned = 0;
    /// Matcher invocations actually performed.
    std::size_t comparisons = 0;
    /// Matcher invocations avoided because a candidate behavior was pruned.
    std::size_t comparisons_skipped = 0;

    bool operator==(const MetricCounts&) const = default;
};

struct MetricsTriple {
    Ratio fitness;
    Ratio precision;
    Ratio fes;
    MetricCounts counts;
};

/// Which behavior on the other side matched, and how.
struct BehaviorWitness {
    std::size_t other = 0;
    MatchResult result;
};

/// One entry per behavior on the counted side (ground for fitness/FES,
/// candidate for precision).
struct MetricResult {
    Ratio ratio;
    std::vector<std::optional<BehaviorWitness>> witnesses;
    /// Closest failure reason for behaviors without a witness.
    std::vector<std::optional<MatchFailure>> reasons;
    std::size_t comparisons = 0;
};

/// Shares behavior profiles across the three metrics. `excluded` marks
/// candidate behaviors (by index) that never match, e.g. pruned ones.
class ComplianceEvaluator {
public:
    ComplianceEvaluator(const BehaviorSet& ground, const BehaviorSet& candidate,
                        const EventAlignment& align, NetPair nets, std::vector<bool> excluded = {});

    /// Ground behaviors with at least one strict match; many matches count once.
    MetricResult fitness() const;
    /// Candidate behaviors that embed into at least one ground behavior.
    MetricResult precision() const;
    /// Ground behaviors with at least one covering match.
    MetricResult fes() const;

private:
    const BehaviorSet* ground_;
    const BehaviorSet* candidate_;
    Matcher matcher_;
    std::vector<bool> excluded_;
    std::vector<Matcher::GroundProfile> ground_profiles_;
    std::vector<Matcher::CandidateProfile> candidate_profiles_;
};

/// Throws EmptyGroundSet.
MetricResult fitness(const BehaviorSet& ground, const BehaviorSet& candidate, const EventAlignment& align,
                     NetPair nets);
/// Throws EmptyCandidateSet.
MetricResult precision(const BehaviorSet& ground, const BehaviorSet& candidate,
                       const EventAlignment& align, NetPair nets);
/// Throws EmptyGroundSet.
MetricResult fes(const BehaviorSet& ground, const BehaviorSet& candidate, const EventAlignment& align,
                 NetPair nets);

struct CompareOptions {
    ExplorationLimits limits;
    bool lcp_auto = false;           // apply insert_loop_controls to both nets first
    bool allow_no_terminal = false;
    bool prune = true;               // honour the alignment's illegal sequences
    bool exclude_pruned = false;     // drop pruned behaviors from |Q| instead of counting them as misses
};

struct GroundRecord {
    std::size_t index = 0;
    std::vector<std::string> transitions;
    std::vector<std::string> events;
    std::optional<BehaviorWitness> strict;
    std::optional<BehaviorWitness> covering;
    std::optional<std::size_t> best_candidate;
    std::optional<MatchFailure> reason;
};

enum class CandidateStatus { embedded, unmatched, pruned };

const char* to_string(CandidateStatus status);

struct CandidateRecord {
    std::size_t index = 0;
    std::vector<std::string> transitions;
    std::vector<std::string> events;
    CandidateStatus status = CandidateStatus::unmatched;
    std::optional<BehaviorWitness> embedding;
    std::optional<MatchFailure> reason;
};

struct ReportMetadata {
    std::string ground_net;
    std::string candidate_net;
    std::string alignment;
    std::string tool_version = kToolVersion;
    ExplorationLimits limits;
    CompareOptions options;
    std::string generated_at;  // ISO-8601 UTC; the only non-deterministic field
};

/// Every ground and candidate behavior appears exactly once in the records.
struct ComplianceReport {
    ReportMetadata metadata;
    MetricsTriple metrics;
    std::vector<GroundRecord> ground;
    std::vector<CandidateRecord> candidates;
    std::vector<Diagnostic> diagnostics;
};

/// Reachability, behavior enumeration, pruning and the three metrics.
/// Throws ValidationFailed, StateExplosion, PathExplosion, NoTerminalMarkings,
/// EmptyGroundSet and EmptyCandidateSet.
ComplianceReport compare(const PetriNet& ground, const PetriNet& candidate, const EventAlignment& align,
                         const CompareOptions& options = {});

}  // namespace contractcheck
