#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "contractcheck/diagnostic.hpp"

namespace contractcheck {

using Tokens = std::int64_t;
using TokenVector = Eigen::Matrix<Tokens, Eigen::Dynamic, 1>;
/// Places are rows, transitions are columns.
using IncidenceMatrix = Eigen::Matrix<Tokens, Eigen::Dynamic, Eigen::Dynamic>;

/// Who did what. Both parts take part in equality: the same action by a
/// different actor is a different event.
struct EventLabel {
    std::string actor;
    std::string action;

    auto operator<=>(const EventLabel&) const = default;
    std::string str() const { return actor + ":" + action; }
};

enum class LegalKind { none, power, obligation };

const char* to_string(LegalKind kind);

struct Place {
    std::string id;
    Tokens initial_tokens = 0;
    LegalKind legal_kind = LegalKind::none;
    bool is_lcp = false;

    bool operator==(const Place&) const = default;
};

struct Transition {
    std::string id;
    EventLabel label;
    bool temporal = false;

    bool operator==(const Transition&) const = default;
};

enum class ArcKind { normal, inhibitor, bidirectional };

/// For normal arcs `from`/`to` give the direction. Inhibitor and
/// bidirectional arcs always store the place in `from` and the transition in `to`.
struct Arc {
    ArcKind kind = ArcKind::normal;
    std::string from;
    std::string to;

    auto operator<=>(const Arc&) const = default;
};

/// Token count per place, indexed by the owning net's (sorted) place order.
class Marking {
public:
    Marking() = default;
    explicit Marking(TokenVector tokens) : tokens_(std::move(tokens)) {}

    const TokenVector& tokens() const noexcept { return tokens_; }
    Tokens operator[](std::size_t place) const { return tokens_(static_cast<Eigen::Index>(place)); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(tokens_.size()); }

    bool operator==(const Marking& other) const;
    std::strong_ordering operator<=>(const Marking& other) const;
    std::size_t hash() const noexcept;

private:
    TokenVector tokens_;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept { return m.hash(); }
};

/// Immutable place/transition net. Places, transitions and arcs are kept in
/// canonical (sorted) order; the incidence matrices follow that order.
///
/// Construction never throws on malformed input so that `validate_net` can
/// report every problem; arcs with unresolvable endpoints are left out of
/// the matrices.
class PetriNet {
public:
    PetriNet() = default;
    PetriNet(std::string name, std::vector<Place> places, std::vector<Transition> transitions,
             std::vector<Arc> arcs);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Place>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    std::optional<std::size_t> place_index(std::string_view id) const;
    std::optional<std::size_t> transition_index(std::string_view id) const;

    /// Tokens consumed from each place by each transition (normal in-arcs plus bidirectional).
    const IncidenceMatrix& consume() const noexcept { return consume_; }
    /// Tokens produced into each place (normal out-arcs plus bidirectional).
    const IncidenceMatrix& produce() const noexcept { return produce_; }
    /// Non-zero where an inhibitor arc connects place and transition.
    const IncidenceMatrix& inhibit() const noexcept { return inhibit_; }

    Marking initial_marking() const;
    /// Throws UnknownPlace for places that are not part of the net.
    Marking marking_from(const std::map<std::string, Tokens>& tokens) const;
    /// Non-zero entries only.
    std::map<std::string, Tokens> to_map(const Marking& m) const;

    bool operator==(const PetriNet& other) const;

private:
    std::string name_;
    std::vector<Place> places_;
    std::vector<Transition> transitions_;
    std::vector<Arc> arcs_;
    std::unordered_map<std::string, std::size_t> place_lookup_;
    std::unordered_map<std::string, std::size_t> transition_lookup_;
    IncidenceMatrix consume_;
    IncidenceMatrix produce_;
    IncidenceMatrix inhibit_;
};

/// Empty iff the net is well formed. Codes: E_EMPTY_ID, E_DUP_ID,
/// E_UNKNOWN_NODE, E_ARC_ENDPOINTS, E_NEGATIVE_TOKENS, E_LCP_TOKENS,
/// E_LCP_LEGAL, E_NO_INITIAL_TOKENS, E_EMPTY_LABEL.
std::vector<Diagnostic> validate_net(const PetriNet& net);

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t transition);

/// Transition ids enabled in `m`, sorted by id.
std::vector<std::string> enabled_transitions(const PetriNet& net, const Marking& m);
/// Throws UnknownPlace if `m` names a place outside the net.
std::vector<std::string> enabled_transitions(const PetriNet& net,
                                             const std::map<std::string, Tokens>& m);

/// Pure token-game step. Throws NotEnabled.
Marking fire(const PetriNet& net, const Marking& m, std::size_t transition);
Marking fire(const PetriNet& net, const Marking& m, std::string_view transition);

/// True if the transition consumes from and produces to the same place.
bool has_self_loop(const PetriNet& net, std::size_t transition);
/// True if some LCP place is in the transition's postset and inhibits it.
bool has_loop_control(const PetriNet& net, std::size_t transition);

/// Adds a fresh empty LCP place plus `t -> q` and `q -o t` for every
/// self-looping transition that lacks one. Idempotent.
PetriNet insert_loop_controls(const PetriNet& net);

}  // namespace contractcheck
