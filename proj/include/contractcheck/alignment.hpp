#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "contractcheck/diagnostic.hpp"
#include "contractcheck/petri_net.hpp"
#include "contractcheck/reachability.hpp"

namespace contractcheck {

/// Correspondence between a candidate net and a ground (reference) net.
struct EventAlignment {
    std::string name;
    /// candidate label -> ground label; many-to-one allowed.
    std::map<EventLabel, EventLabel> event_map;
    /// Candidate labels with no legal meaning; dropped before matching.
    std::set<EventLabel> irrelevant;
    /// candidate place -> ground legal place; injective.
    std::map<std::string, std::string> legal_map;
    /// Ground-label sequences whose contiguous occurrence marks a behavior illegal.
    std::vector<std::vector<EventLabel>> illegal_sequences;

    bool operator==(const EventAlignment&) const = default;
};

/// Every label maps to itself and every legal place to itself.
EventAlignment identity_alignment(const PetriNet& net);

/// Codes: E_UNKNOWN_CANDIDATE_EVENT, E_UNKNOWN_GROUND_EVENT, E_EVENT_IRRELEVANT_OVERLAP,
/// E_UNKNOWN_CANDIDATE_PLACE, E_UNKNOWN_GROUND_PLACE, E_LEGAL_TARGET, E_LEGAL_NOT_INJECTIVE,
/// E_EMPTY_ILLEGAL_SEQ, W_UNKNOWN_ILLEGAL_EVENT, W_UNMAPPED_LEGAL, W_UNMAPPED_EVENT.
std::vector<Diagnostic> validate_alignment(const EventAlignment& align, const PetriNet& ground,
                                           const PetriNet& candidate);

/// Tokens on the net's legal places (legal_kind != none), keyed by place id.
using LegalState = std::map<std::string, Tokens>;

LegalState legal_state(const PetriNet& net, const Marking& m);

/// Compares a ground legal state with a candidate marking through the
/// alignment's legal_map. Ground positions with no candidate counterpart
/// count as unmarked on the candidate side. Places in `exempt` are skipped.
bool legal_equivalent(const LegalState& ground, const Marking& candidate_marking,
                      const PetriNet& candidate, const EventAlignment& align,
                      const std::set<std::string>& exempt = {});

enum class MatchFailure {
    order_violation,
    missing_event,
    extra_mid_sequence_event,
    legal_state_mismatch,
    unmapped_event,
    pruned,
};

const char* to_string(MatchFailure reason);

/// Ground event `ground_event` is realised by candidate events [first, last].
struct BlockWitness {
    std::size_t ground_event = 0;
    std::size_t first = 0;
    std::size_t last = 0;

    bool operator==(const BlockWitness&) const = default;
};

struct MatchResult {
    bool matched = false;
    std::optional<std::vector<BlockWitness>> witness;  // present iff matched
    std::optional<MatchFailure> reason;                // present iff !matched

    static MatchResult success(std::vector<BlockWitness> w) { return {true, std::move(w), std::nullopt}; }
    static MatchResult failure(MatchFailure r) { return {false, std::nullopt, r}; }
};

struct NetPair {
    const PetriNet& ground;
    const PetriNet& candidate;
};

/// Precomputed alignment lookups for repeated matching between two nets.
///
/// Behaviors are turned into profiles once (mapped label ids, legal
/// projections, temporal exemptions) so each pairwise match is a small
/// dynamic program over integers.
class Matcher {
public:
    static constexpr int kUnmapped = -1;
    static constexpr int kIrrelevant = -2;

    struct GroundProfile {
        std::vector<int> labels;                    // ground label id per event
        std::vector<bool> temporal;                 // per event
        std::vector<std::vector<Tokens>> legal;     // legal projection after k events, k = 0..n
        std::vector<std::vector<bool>> exempt;      // temporal-only positions after k events
    };

    struct CandidateProfile {
        std::vector<int> mapped;                    // ground label id, kUnmapped or kIrrelevant
        std::vector<Tokens> final_legal;            // candidate tokens per ground legal place
    };

    Matcher(const EventAlignment& align, const PetriNet& ground, const PetriNet& candidate);

    GroundProfile profile_ground(const Behavior& gb) const;
    CandidateProfile profile_candidate(const Behavior& cb) const;

    /// Strict event equivalence: one non-empty block of candidate events per
    /// non-temporal ground event, in order, optional trailing extras, and
    /// equivalent final legal states.
    MatchResult strict(const GroundProfile& g, const CandidateProfile& c) const;
    /// Non-strict: equivalent final legal states; the witness is a maximal
    /// order-preserving partial event mapping.
    MatchResult covering(const GroundProfile& g, const CandidateProfile& c) const;
    /// Every candidate event is mapped or irrelevant, the collapsed mapped
    /// sequence embeds in order into the ground behavior, and the candidate's
    /// final legal state equals the ground state after the last embedded event.
    MatchResult embedding(const CandidateProfile& c, const GroundProfile& g) const;

    /// Ground label id for a candidate event label.
    int map_label(const EventLabel& candidate_label) const;
    const std::vector<std::string>& ground_legal_places() const noexcept { return legal_places_; }

private:
    bool legal_equal(const std::vector<Tokens>& ground, const std::vector<bool>& exempt,
                     const std::vector<Tokens>& candidate) const;

    const PetriNet* ground_;
    const PetriNet* candidate_;
    std::vector<EventLabel> ground_labels_;                 // sorted, id = position
    std::vector<int> candidate_transition_map_;             // per candidate transition
    std::vector<std::size_t> legal_rows_;                   // ground place index per legal place
    std::vector<std::string> legal_places_;
    std::vector<std::optional<std::size_t>> candidate_rows_;  // candidate place per legal place
    std::map<EventLabel, int> candidate_label_map_;
};

MatchResult strict_match(const Behavior& gb, const Behavior& cb, const EventAlignment& align, NetPair nets);
MatchResult covering_match(const Behavior& gb, const Behavior& cb, const EventAlignment& align,
                           NetPair nets);
MatchResult embedding_match(const Behavior& cb, const Behavior& gb, const EventAlignment& align,
                            NetPair nets);

struct PruneResult {
    BehaviorSet kept;
    BehaviorSet pruned;
    std::vector<std::size_t> kept_indices;    // into the input set
    std::vector<std::size_t> pruned_indices;
};

/// Splits behaviors on whether their mapped ground-event sequence (irrelevant
/// events dropped, consecutive duplicates collapsed) contains any illegal
/// sequence contiguously.
PruneResult prune_illegal(const BehaviorSet& behaviors, const EventAlignment& align);

}  // namespace contractcheck
