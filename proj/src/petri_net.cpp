#include "contractcheck/petri_net.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "contractcheck/errors.hpp"

namespace contractcheck {

const char* to_string(LegalKind kind) {
    switch (kind) {
        case LegalKind::power: return "power";
        case LegalKind::obligation: return "obligation";
        case LegalKind::none: break;
    }
    return "none";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (d.span) out += std::to_string(d.span->line) + ":" + std::to_string(d.span->column) + ": ";
    out += to_string(d.severity);
    out += " ";
    out += d.code;
    out += ": ";
    out += d.message;
    if (!d.subject.empty()) out += " [" + d.subject + "]";
    return out;
}

// --- Marking ----------------------------------------------------------------

bool Marking::operator==(const Marking& other) const {
    return tokens_.size() == other.tokens_.size() && tokens_ == other.tokens_;
}

std::strong_ordering Marking::operator<=>(const Marking& other) const {
    const auto* a = tokens_.data();
    const auto* b = other.tokens_.data();
    return std::lexicographical_compare_three_way(a, a + tokens_.size(), b, b + other.tokens_.size());
}

std::size_t Marking::hash() const noexcept {
    std::size_t h = static_cast<std::size_t>(tokens_.size());
    for (Eigen::Index i = 0; i < tokens_.size(); ++i) {
        auto v = static_cast<std::uint64_t>(tokens_(i));
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

// --- PetriNet ---------------------------------------------------------------

PetriNet::PetriNet(std::string name, std::vector<Place> places, std::vector<Transition> transitions,
                   std::vector<Arc> arcs)
    : name_(std::move(name)), places_(std::move(places)), transitions_(std::move(transitions)),
      arcs_(std::move(arcs)) {
    std::stable_sort(places_.begin(), places_.end(),
                     [](const Place& a, const Place& b) { return a.id < b.id; });
    std::stable_sort(transitions_.begin(), transitions_.end(),
                     [](const Transition& a, const Transition& b) { return a.id < b.id; });
    std::sort(arcs_.begin(), arcs_.end());

    for (std::size_t i = 0; i < places_.size(); ++i) place_lookup_.try_emplace(places_[i].id, i);
    for (std::size_t i = 0; i < transitions_.size(); ++i)
        transition_lookup_.try_emplace(transitions_[i].id, i);

    const auto np = static_cast<Eigen::Index>(places_.size());
    const auto nt = static_cast<Eigen::Index>(transitions_.size());
    consume_ = IncidenceMatrix::Zero(np, nt);
    produce_ = IncidenceMatrix::Zero(np, nt);
    inhibit_ = IncidenceMatrix::Zero(np, nt);

    for (const auto& arc : arcs_) {
        auto p_from = place_index(arc.from);
        auto t_from = transition_index(arc.from);
        auto p_to = place_index(arc.to);
        auto t_to = transition_index(arc.to);
        switch (arc.kind) {
            case ArcKind::normal:
                if (p_from && t_to && !t_from && !p_to)
                    consume_(static_cast<Eigen::Index>(*p_from), static_cast<Eigen::Index>(*t_to)) += 1;
                else if (t_from && p_to && !p_from && !t_to)
                    produce_(static_cast<Eigen::Index>(*p_to), static_cast<Eigen::Index>(*t_from)) += 1;
                break;
            case ArcKind::bidirectional:
                if (p_from && t_to && !t_from && !p_to) {
                    consume_(static_cast<Eigen::Index>(*p_from), static_cast<Eigen::Index>(*t_to)) += 1;
                    produce_(static_cast<Eigen::Index>(*p_from), static_cast<Eigen::Index>(*t_to)) += 1;
                }
                break;
            case ArcKind::inhibitor:
                if (p_from && t_to && !t_from && !p_to)
                    inhibit_(static_cast<Eigen::Index>(*p_from), static_cast<Eigen::Index>(*t_to)) += 1;
                break;
        }
    }
}

std::optional<std::size_t> PetriNet::place_index(std::string_view id) const {
    auto it = place_lookup_.find(std::string(id));
    if (it == place_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> PetriNet::transition_index(std::string_view id) const {
    auto it = transition_lookup_.find(std::string(id));
    if (it == transition_lookup_.end()) return std::nullopt;
    return it->second;
}

Marking PetriNet::initial_marking() const {
    TokenVector v(static_cast<Eigen::Index>(places_.size()));
    for (std::size_t i = 0; i < places_.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = places_[i].initial_tokens;
    return Marking(std::move(v));
}

Marking PetriNet::marking_from(const std::map<std::string, Tokens>& tokens) const {
    TokenVector v = TokenVector::Zero(static_cast<Eigen::Index>(places_.size()));
    for (const auto& [id, count] : tokens) {
        auto idx = place_index(id);
        if (!idx) throw UnknownPlace(id);
        v(static_cast<Eigen::Index>(*idx)) = count;
    }
    return Marking(std::move(v));
}

std::map<std::string, Tokens> PetriNet::to_map(const Marking& m) const {
    std::map<std::string, Tokens> out;
    for (std::size_t i = 0; i < places_.size() && i < m.size(); ++i)
        if (m[i] != 0) out[places_[i].id] = m[i];
    return out;
}

bool PetriNet::operator==(const PetriNet& other) const {
    return name_ == other.name_ && places_ == other.places_ && transitions_ == other.transitions_ &&
           arcs_ == other.arcs_;
}

// --- validation -------------------------------------------------------------

std::vector<Diagnostic> validate_net(const PetriNet& net) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string code, std::string message, std::string subject) {
        out.push_back({std::move(code), Severity::error, std::move(message), std::move(subject), {}});
    };

    std::set<std::string> seen;
    for (const auto& p : net.places()) {
        if (p.id.empty()) error("E_EMPTY_ID", "place with empty identifier", "");
        else if (!seen.insert(p.id).second) error("E_DUP_ID", "duplicate identifier", p.id);
        if (p.initial_tokens < 0)
            error("E_NEGATIVE_TOKENS", "negative initial token count", p.id);
        if (p.is_lcp && p.initial_tokens != 0)
            error("E_LCP_TOKENS", "loop-control place must start empty", p.id);
        if (p.is_lcp && p.legal_kind != LegalKind::none)
            error("E_LCP_LEGAL", "loop-control place cannot be a legal position", p.id);
    }
    for (const auto& t : net.transitions()) {
        if (t.id.empty()) error("E_EMPTY_ID", "transition with empty identifier", "");
        else if (!seen.insert(t.id).second) error("E_DUP_ID", "duplicate identifier", t.id);
        if (t.label.actor.empty() || t.label.action.empty())
            error("E_EMPTY_LABEL", "transition label needs both actor and action", t.id);
    }

    for (const auto& arc : net.arcs()) {
        const bool from_p = net.place_index(arc.from).has_value();
        const bool from_t = net.transition_index(arc.from).has_value();
        const bool to_p = net.place_index(arc.to).has_value();
        const bool to_t = net.transition_index(arc.to).has_value();
        const std::string subject = arc.from + "," + arc.to;
        if ((!from_p && !from_t) || (!to_p && !to_t)) {
            error("E_UNKNOWN_NODE", "arc endpoint does not exist", subject);
            continue;
        }
        const bool place_to_transition = from_p && to_t;
        const bool transition_to_place = from_t && to_p;
        switch (arc.kind) {
            case ArcKind::normal:
                if (!place_to_transition && !transition_to_place)
                    error("E_ARC_ENDPOINTS", "arcs connect places and transitions only", subject);
                break;
            case ArcKind::inhibitor:
                if (!place_to_transition)
                    error("E_ARC_ENDPOINTS", "inhibitor arcs run from a place to a transition", subject);
                break;
            case ArcKind::bidirectional:
                if (!place_to_transition)
                    error("E_ARC_ENDPOINTS", "bidirectional arcs join a place and a transition", subject);
                break;
        }
    }

    const bool marked = std::any_of(net.places().begin(), net.places().end(),
                                    [](const Place& p) { return p.initial_tokens > 0; });
    if (!marked) error("E_NO_INITIAL_TOKENS", "no place holds an initial token", net.name());
    return out;
}

// --- token game -------------------------------------------------------------

namespace {

void check_dimension(const PetriNet& net, const Marking& m) {
    if (m.size() != net.places().size())
        throw std::invalid_argument("marking size does not match net '" + net.name() + "'");
}

}  // namespace

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t transition) {
    const auto t = static_cast<Eigen::Index>(transition);
    const auto& tokens = m.tokens().array();
    const bool preset_ok = (tokens >= net.consume().col(t).array()).all();
    const bool not_inhibited = ((net.inhibit().col(t).array() == 0) || (tokens == 0)).all();
    return preset_ok && not_inhibited;
}

std::vector<std::string> enabled_transitions(const PetriNet& net, const Marking& m) {
    check_dimension(net, m);
    std::vector<std::string> out;
    for (std::size_t t = 0; t < net.transitions().size(); ++t)
        if (is_enabled(net, m, t)) out.push_back(net.transitions()[t].id);
    return out;
}

std::vector<std::string> enabled_transitions(const PetriNet& net,
                                             const std::map<std::string, Tokens>& m) {
    return enabled_transitions(net, net.marking_from(m));
}

Marking fire(const PetriNet& net, const Marking& m, std::size_t transition) {
    check_dimension(net, m);
    if (transition >= net.transitions().size()) throw UnknownTransition(std::to_string(transition));
    if (!is_enabled(net, m, transition)) throw NotEnabled(net.transitions()[transition].id);
    const auto t = static_cast<Eigen::Index>(transition);
    return Marking(m.tokens() - net.consume().col(t) + net.produce().col(t));
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view transition) {
    auto idx = net.transition_index(transition);
    if (!idx) throw UnknownTransition(std::string(transition));
    return fire(net, m, *idx);
}

// --- loop-control places ----------------------------------------------------

bool has_self_loop(const PetriNet& net, std::size_t transition) {
    const auto t = static_cast<Eigen::Index>(transition);
    return ((net.consume().col(t).array() > 0) && (net.produce().col(t).array() > 0)).any();
}

bool has_loop_control(const PetriNet& net, std::size_t transition) {
    const auto t = static_cast<Eigen::Index>(transition);
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        const auto row = static_cast<Eigen::Index>(p);
        if (net.places()[p].is_lcp && net.produce()(row, t) > 0 && net.inhibit()(row, t) > 0)
            return true;
    }
    return false;
}

PetriNet insert_loop_controls(const PetriNet& net) {
    std::vector<Place> places = net.places();
    std::vector<Arc> arcs = net.arcs();
    std::set<std::string> taken;
    for (const auto& p : net.places()) taken.insert(p.id);
    for (const auto& t : net.transitions()) taken.insert(t.id);

    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        if (!has_self_loop(net, t) || has_loop_control(net, t)) continue;
        const auto& tid = net.transitions()[t].id;
        std::string id = "lcp_" + tid;
        for (int suffix = 2; taken.count(id) != 0; ++suffix)
            id = "lcp_" + tid + "_" + std::to_string(suffix);
        taken.insert(id);
        places.push_back({id, 0, LegalKind::none, true});
        arcs.push_back({ArcKind::normal, tid, id});
        arcs.push_back({ArcKind::inhibitor, id, tid});
    }
    return PetriNet(net.name(), std::move(places), net.transitions(), std::move(arcs));
}

}  // namespace contractcheck
