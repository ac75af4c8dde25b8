#include "contractcheck/alignment.hpp"

#include <algorithm>

namespace contractcheck {

const char* to_string(MatchFailure reason) {
    switch (reason) {
        case MatchFailure::order_violation: return "order-violation";
        case MatchFailure::missing_event: return "missing-event";
        case MatchFailure::extra_mid_sequence_event: return "extra-mid-sequence-event";
        case MatchFailure::legal_state_mismatch: return "legal-state-mismatch";
        case MatchFailure::unmapped_event: return "unmapped-event";
        case MatchFailure::pruned: return "pruned";
    }
    return "unknown";
}

EventAlignment identity_alignment(const PetriNet& net) {
    EventAlignment align;
    align.name = net.name() + "-identity";
    for (const auto& t : net.transitions()) align.event_map[t.label] = t.label;
    for (const auto& p : net.places())
        if (p.legal_kind != LegalKind::none) align.legal_map[p.id] = p.id;
    return align;
}

std::vector<Diagnostic> validate_alignment(const EventAlignment& align, const PetriNet& ground,
                                           const PetriNet& candidate) {
    std::vector<Diagnostic> out;
    auto add = [&](const char* code, Severity sev, std::string message, std::string subject) {
        out.push_back({code, sev, std::move(message), std::move(subject), {}});
    };

    std::set<EventLabel> ground_labels, candidate_labels;
    for (const auto& t : ground.transitions()) ground_labels.insert(t.label);
    for (const auto& t : candidate.transitions()) candidate_labels.insert(t.label);

    for (const auto& [from, to] : align.event_map) {
        if (!candidate_labels.count(from))
            add("E_UNKNOWN_CANDIDATE_EVENT", Severity::error, "mapped event not in candidate net", from.str());
        if (!ground_labels.count(to))
            add("E_UNKNOWN_GROUND_EVENT", Severity::error, "mapping target not in ground net", to.str());
        if (align.irrelevant.count(from))
            add("E_EVENT_IRRELEVANT_OVERLAP", Severity::error, "event is both mapped and irrelevant",
                from.str());
    }
    for (const auto& label : align.irrelevant)
        if (!candidate_labels.count(label))
            add("E_UNKNOWN_CANDIDATE_EVENT", Severity::error, "irrelevant event not in candidate net",
                label.str());
    for (const auto& label : candidate_labels)
        if (!align.event_map.count(label) && !align.irrelevant.count(label))
            add("W_UNMAPPED_EVENT", Severity::warning, "candidate event has no ground counterpart",
                label.str());

    std::map<std::string, std::string> seen_targets;
    for (const auto& [cplace, gplace] : align.legal_map) {
        if (!candidate.place_index(cplace))
            add("E_UNKNOWN_CANDIDATE_PLACE", Severity::error, "legal mapping from unknown place", cplace);
        auto gidx = ground.place_index(gplace);
        if (!gidx) {
            add("E_UNKNOWN_GROUND_PLACE", Severity::error, "legal mapping to unknown place", gplace);
        } else if (ground.places()[*gidx].legal_kind == LegalKind::none) {
            add("E_LEGAL_TARGET", Severity::error, "legal mapping must target a power or obligation",
                gplace);
        }
        auto [it, fresh] = seen_targets.emplace(gplace, cplace);
        if (!fresh)
            add("E_LEGAL_NOT_INJECTIVE", Severity::error,
                "ground place mapped from both '" + it->second + "' and '" + cplace + "'", gplace);
    }
    for (const auto& p : ground.places())
        if (p.legal_kind != LegalKind::none && !seen_targets.count(p.id))
            add("W_UNMAPPED_LEGAL", Severity::warning,
                "ground legal position has no candidate counterpart; treated as never marked", p.id);

    for (const auto& seq : align.illegal_sequences) {
        if (seq.empty()) {
            add("E_EMPTY_ILLEGAL_SEQ", Severity::error, "illegal sequence must not be empty", "");
            continue;
        }
        for (const auto& label : seq)
            if (!ground_labels.count(label))
                add("W_UNKNOWN_ILLEGAL_EVENT", Severity::warning, "illegal sequence names an unknown event",
                    label.str());
    }
    return out;
}

LegalState legal_state(const PetriNet& net, const Marking& m) {
    LegalState out;
    for (std::size_t i = 0; i < net.places().size(); ++i)
        if (net.places()[i].legal_kind != LegalKind::none) out[net.places()[i].id] = i < m.size() ? m[i] : 0;
    return out;
}

bool legal_equivalent(const LegalState& ground, const Marking& candidate_marking,
                      const PetriNet& candidate, const EventAlignment& align,
                      const std::set<std::string>& exempt) {
    std::map<std::string, std::string> inverse;
    for (const auto& [cplace, gplace] : align.legal_map) inverse.emplace(gplace, cplace);
    for (const auto& [place, tokens] : ground) {
        if (exempt.count(place)) continue;
        Tokens other = 0;
        if (auto it = inverse.find(place); it != inverse.end())
            if (auto idx = candidate.place_index(it->second); idx && *idx < candidate_marking.size())
                other = candidate_marking[*idx];
        if (other != tokens) return false;
    }
    return true;
}

// --- Matcher ------------------------------------------------------------------

Matcher::Matcher(const EventAlignment& align, const PetriNet& ground, const PetriNet& candidate)
    : ground_(&ground), candidate_(&candidate) {
    for (const auto& t : ground.transitions()) ground_labels_.push_back(t.label);
    for (const auto& [from, to] : align.event_map) ground_labels_.push_back(to);
    std::sort(ground_labels_.begin(), ground_labels_.end());
    ground_labels_.erase(std::unique(ground_labels_.begin(), ground_labels_.end()), ground_labels_.end());

    auto ground_id = [&](const EventLabel& label) {
        auto it = std::lower_bound(ground_labels_.begin(), ground_labels_.end(), label);
        return static_cast<int>(it - ground_labels_.begin());
    };
    for (const auto& label : align.irrelevant) candidate_label_map_[label] = kIrrelevant;
    for (const auto& [from, to] : align.event_map) candidate_label_map_[from] = ground_id(to);
    for (const auto& t : candidate.transitions()) candidate_transition_map_.push_back(map_label(t.label));

    std::map<std::string, std::string> inverse;
    for (const auto& [cplace, gplace] : align.legal_map) inverse.emplace(gplace, cplace);
    for (std::size_t i = 0; i < ground.places().size(); ++i) {
        const auto& p = ground.places()[i];
        if (p.legal_kind == LegalKind::none) continue;
        legal_rows_.push_back(i);
        legal_places_.push_back(p.id);
        std::optional<std::size_t> row;
        if (auto it = inverse.find(p.id); it != inverse.end()) row = candidate.place_index(it->second);
        candidate_rows_.push_back(row);
    }
}

int Matcher::map_label(const EventLabel& candidate_label) const {
    auto it = candidate_label_map_.find(candidate_label);
    return it == candidate_label_map_.end() ? kUnmapped : it->second;
}

Matcher::GroundProfile Matcher::profile_ground(const Behavior& gb) const {
    GroundProfile g;
    const std::size_t nl = legal_rows_.size();
    Marking m = ground_->initial_marking();
    std::vector<Tokens> temporal_delta(nl, 0);

    auto snapshot = [&] {
        std::vector<Tokens> legal(nl);
        std::vector<bool> exempt(nl);
        for (std::size_t k = 0; k < nl; ++k) {
            legal[k] = m[legal_rows_[k]];
            exempt[k] = temporal_delta[k] != 0;
        }
        g.legal.push_back(std::move(legal));
        g.exempt.push_back(std::move(exempt));
    };

    snapshot();
    for (auto t : gb.path) {
        const auto& tr = ground_->transitions()[t];
        auto it = std::lower_bound(ground_labels_.begin(), ground_labels_.end(), tr.label);
        g.labels.push_back(static_cast<int>(it - ground_labels_.begin()));
        g.temporal.push_back(tr.temporal);
        if (tr.temporal) {
            const auto col = static_cast<Eigen::Index>(t);
            for (std::size_t k = 0; k < nl; ++k) {
                const auto row = static_cast<Eigen::Index>(legal_rows_[k]);
                temporal_delta[k] += ground_->produce()(row, col) - ground_->consume()(row, col);
            }
        }
        m = fire(*ground_, m, t);
        snapshot();
    }
    return g;
}

Matcher::CandidateProfile Matcher::profile_candidate(const Behavior& cb) const {
    CandidateProfile c;
    c.mapped.reserve(cb.path.size());
    for (auto t : cb.path) c.mapped.push_back(candidate_transition_map_[t]);
    c.final_legal.reserve(candidate_rows_.size());
    for (const auto& row : candidate_rows_)
        c.final_legal.push_back(row && *row < cb.final_marking.size() ? cb.final_marking[*row] : 0);
    return c;
}

bool Matcher::legal_equal(const std::vector<Tokens>& ground, const std::vector<bool>& exempt,
                          const std::vector<Tokens>& candidate) const {
    for (std::size_t k = 0; k < ground.size(); ++k)
        if (!exempt[k] && ground[k] != candidate[k]) return false;
    return true;
}

namespace {

/// Candidate events with irrelevant ones removed, keeping original positions.
struct Filtered {
    std::vector<int> ids;
    std::vector<std::size_t> positions;
};

Filtered drop_irrelevant(const std::vector<int>& mapped) {
    Filtered f;
    for (std::size_t i = 0; i < mapped.size(); ++i) {
        if (mapped[i] == Matcher::kIrrelevant) continue;
        f.ids.push_back(mapped[i]);
        f.positions.push_back(i);
    }
    return f;
}

MatchFailure classify_strict_failure(const std::vector<int>& ground, const std::vector<bool>& optional,
                                     const std::vector<int>& cand) {
    for (std::size_t i = 0; i < ground.size(); ++i)
        if (!optional[i] && std::find(cand.begin(), cand.end(), ground[i]) == cand.end())
            return MatchFailure::missing_event;

    std::size_t next = 0;  // next ground event to open
    bool open = false;     // whether event next-1 has a block to extend
    for (int id : cand) {
        if (open && id == ground[next - 1]) continue;
        std::size_t probe = next;
        while (probe < ground.size() && optional[probe] && ground[probe] != id) ++probe;
        if (probe < ground.size() && ground[probe] == id) {
            next = probe + 1;
            open = true;
            continue;
        }
        bool remaining_required = false;
        for (std::size_t i = next; i < ground.size(); ++i) remaining_required |= !optional[i];
        if (!remaining_required) break;  // trailing extras
        if (id == Matcher::kUnmapped) return MatchFailure::unmapped_event;
        for (std::size_t i = next; i < ground.size(); ++i)
            if (ground[i] == id) return MatchFailure::order_violation;
        return MatchFailure::extra_mid_sequence_event;
    }
    return MatchFailure::missing_event;
}

}  // namespace

MatchResult Matcher::strict(const GroundProfile& g, const CandidateProfile& c) const {
    const Filtered f = drop_irrelevant(c.mapped);
    const std::size_t n = g.labels.size();
    const std::size_t m = f.ids.size();
    const std::size_t width = m + 1;

    // ok: blocks for ground events [0, i) cover candidate events [0, j).
    // ext: additionally, the block of ground event i-1 is non-empty and ends at j.
    enum Step : unsigned char { none, skip, start, extend };
    std::vector<unsigned char> ok((n + 1) * width, 0), ext((n + 1) * width, 0);
    std::vector<Step> how_ok((n + 1) * width, none), how_ext((n + 1) * width, none);
    auto at = [width](std::size_t i, std::size_t j) { return i * width + j; };

    ok[at(0, 0)] = 1;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            const std::size_t here = at(i, j);
            if (ext[here] && j < m && f.ids[j] == g.labels[i - 1]) {
                const std::size_t next = at(i, j + 1);
                if (!ext[next]) {
                    ext[next] = ok[next] = 1;
                    how_ext[next] = extend;
                }
            }
            if (!ok[here] || i == n) continue;
            if (g.temporal[i] && !ok[at(i + 1, j)]) {
                ok[at(i + 1, j)] = 1;
                how_ok[at(i + 1, j)] = skip;
            }
            if (j < m && f.ids[j] == g.labels[i]) {
                const std::size_t next = at(i + 1, j + 1);
                if (!ext[next]) {
                    ext[next] = ok[next] = 1;
                    how_ext[next] = start;
                }
            }
        }
    }

    std::optional<std::size_t> end;
    for (std::size_t j = m + 1; j-- > 0;)
        if (ok[at(n, j)]) {
            end = j;
            break;
        }
    if (!end) return MatchResult::failure(classify_strict_failure(g.labels, g.temporal, f.ids));
    if (!legal_equal(g.legal.back(), g.exempt.back(), c.final_legal))
        return MatchResult::failure(MatchFailure::legal_state_mismatch);

    std::vector<BlockWitness> witness;
    std::size_t i = n, j = *end;
    bool in_ext = ext[at(i, j)] != 0;
    std::optional<std::size_t> block_last;
    while (i > 0 || j > 0) {
        if (in_ext) {
            if (!block_last) block_last = j - 1;
            if (how_ext[at(i, j)] == start) {
                witness.push_back({i - 1, f.positions[j - 1], f.positions[*block_last]});
                block_last.reset();
                --i;
                --j;
                in_ext = ext[at(i, j)] != 0;
            } else {
                --j;
                in_ext = true;
            }
        } else {
            --i;  // skipped optional event
            in_ext = ext[at(i, j)] != 0;
        }
    }
    std::reverse(witness.begin(), witness.end());
    return MatchResult::success(std::move(witness));
}

MatchResult Matcher::covering(const GroundProfile& g, const CandidateProfile& c) const {
    if (!legal_equal(g.legal.back(), g.exempt.back(), c.final_legal))
        return MatchResult::failure(MatchFailure::legal_state_mismatch);

    const Filtered f = drop_irrelevant(c.mapped);
    const std::size_t n = g.labels.size();
    const std::size_t m = f.ids.size();
    std::vector<std::size_t> lcs((n + 1) * (m + 1), 0);
    auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[at(i, j)] = g.labels[i] == f.ids[j] ? lcs[at(i + 1, j + 1)] + 1
                                                    : std::max(lcs[at(i + 1, j)], lcs[at(i, j + 1)]);

    std::vector<BlockWitness> witness;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (g.labels[i] == f.ids[j] && lcs[at(i, j)] == lcs[at(i + 1, j + 1)] + 1) {
            std::size_t last = j;
            while (last + 1 < m && f.ids[last + 1] == f.ids[j] &&
                   (i + 1 >= n || g.labels[i + 1] != f.ids[j]))
                ++last;
            witness.push_back({i, f.positions[j], f.positions[last]});
            ++i;
            j = last + 1;
        } else if (lcs[at(i + 1, j)] >= lcs[at(i, j + 1)]) {
            ++i;
        } else {
            ++j;
        }
    }
    return MatchResult::success(std::move(witness));
}

MatchResult Matcher::embedding(const CandidateProfile& c, const GroundProfile& g) const {
    // Collapse consecutive duplicates into runs of candidate positions.
    struct Run {
        int id;
        std::size_t first;
        std::size_t last;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k < c.mapped.size(); ++k) {
        const int id = c.mapped[k];
        if (id == kIrrelevant) continue;
        if (id == kUnmapped) return MatchResult::failure(MatchFailure::unmapped_event);
        if (!runs.empty() && runs.back().id == id)
            runs.back().last = k;
        else
            runs.push_back({id, k, k});
    }

    const std::size_t n = g.labels.size();
    if (runs.empty()) {
        if (!legal_equal(g.legal.front(), g.exempt.front(), c.final_legal))
            return MatchResult::failure(MatchFailure::legal_state_mismatch);
        return MatchResult::success({});
    }

    for (const auto& r : runs)
        if (std::find(g.labels.begin(), g.labels.end(), r.id) == g.labels.end())
            return MatchResult::failure(MatchFailure::missing_event);

    // Earliest positions for every run but the last; the last one may land
    // anywhere after, and the legal state is compared right after it.
    std::vector<std::size_t> positions;
    std::size_t cursor = 0;
    for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
        while (cursor < n && g.labels[cursor] != runs[r].id) ++cursor;
        if (cursor == n) return MatchResult::failure(MatchFailure::order_violation);
        positions.push_back(cursor++);
    }
    bool placed = false;
    for (std::size_t j = cursor; j < n; ++j) {
        if (g.labels[j] != runs.back().id) continue;
        placed = true;
        if (!legal_equal(g.legal[j + 1], g.exempt[j + 1], c.final_legal)) continue;
        positions.push_back(j);
        std::vector<BlockWitness> witness;
        for (std::size_t r = 0; r < runs.size(); ++r) witness.push_back({positions[r], runs[r].first, runs[r].last});
        return MatchResult::success(std::move(witness));
    }
    return MatchResult::failure(placed ? MatchFailure::legal_state_mismatch : MatchFailure::order_violation);
}

MatchResult strict_match(const Behavior& gb, const Behavior& cb, const EventAlignment& align, NetPair nets) {
    const Matcher m(align, nets.ground, nets.candidate);
    return m.strict(m.profile_ground(gb), m.profile_candidate(cb));
}

MatchResult covering_match(const Behavior& gb, const Behavior& cb, const EventAlignment& align,
                           NetPair nets) {
    const Matcher m(align, nets.ground, nets.candidate);
    return m.covering(m.profile_ground(gb), m.profile_candidate(cb));
}

MatchResult embedding_match(const Behavior& cb, const Behavior& gb, const EventAlignment& align,
                            NetPair nets) {
    const Matcher m(align, nets.ground, nets.candidate);
    return m.embedding(m.profile_candidate(cb), m.profile_ground(gb));
}

// --- pruning ------------------------------------------------------------------

PruneResult prune_illegal(const BehaviorSet& behaviors, const EventAlignment& align) {
    auto collapse = [](std::vector<std::optional<EventLabel>> seq) {
        seq.erase(std::unique(seq.begin(), seq.end(),
                              [](const auto& a, const auto& b) { return a && b && *a == *b; }),
                  seq.end());
        return seq;
    };

    std::vector<std::vector<std::optional<EventLabel>>> patterns;
    for (const auto& illegal : align.illegal_sequences) {
        if (illegal.empty()) continue;
        patterns.push_back(collapse({illegal.begin(), illegal.end()}));
    }

    PruneResult result;
    for (std::size_t b = 0; b < behaviors.size(); ++b) {
        std::vector<std::optional<EventLabel>> mapped;
        for (auto t : behaviors[b].path) {
            const auto& label = behaviors.transitions()[t].label;
            if (align.irrelevant.count(label)) continue;
            auto it = align.event_map.find(label);
            mapped.push_back(it == align.event_map.end() ? std::nullopt : std::optional(it->second));
        }
        mapped = collapse(std::move(mapped));
        bool illegal = false;
        for (const auto& pattern : patterns) {
            auto hit = std::search(mapped.begin(), mapped.end(), pattern.begin(), pattern.end());
            if (hit != mapped.end()) {
                illegal = true;
                break;
            }
        }
        (illegal ? result.pruned_indices : result.kept_indices).push_back(b);
    }
    result.kept = behaviors.subset(result.kept_indices);
    result.pruned = behaviors.subset(result.pruned_indices);
    return result;
}

}  // namespace contractcheck
