#include "contractcheck/metrics.hpp"

#include <chrono>
#include <ctime>

#include "contractcheck/errors.hpp"

namespace contractcheck {

std::string Ratio::rounded(int digits) const {
    if (digits < 0) digits = 0;
    std::size_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    const std::size_t den = denominator == 0 ? 1 : denominator;
    const std::size_t scaled = (2 * numerator * scale + den) / (2 * den);  // half-up
    std::string out = std::to_string(scaled / scale);
    if (digits > 0) {
        std::string frac = std::to_string(scaled % scale);
        out += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
    }
    return out;
}

const char* to_string(CandidateStatus status) {
    switch (status) {
        case CandidateStatus::embedded: return "embedded";
        case CandidateStatus::pruned: return "pruned";
        case CandidateStatus::unmatched: break;
    }
    return "unmatched";
}

namespace {

int closeness(MatchFailure reason) {
    switch (reason) {
        case MatchFailure::legal_state_mismatch: return 0;
        case MatchFailure::order_violation: return 1;
        case MatchFailure::extra_mid_sequence_event: return 2;
        case MatchFailure::missing_event: return 3;
        case MatchFailure::unmapped_event: return 4;
        case MatchFailure::pruned: return 5;
    }
    return 6;
}

void keep_closest(std::optional<MatchFailure>& slot, const MatchResult& r) {
    if (!r.reason) return;
    if (!slot || closeness(*r.reason) < closeness(*slot)) slot = r.reason;
}

}  // namespace

ComplianceEvaluator::ComplianceEvaluator(const BehaviorSet& ground, const BehaviorSet& candidate,
                                         const EventAlignment& align, NetPair nets, std::vector<bool> excluded)
    : ground_(&ground), candidate_(&candidate), matcher_(align, nets.ground, nets.candidate),
      excluded_(std::move(excluded)) {
    excluded_.resize(candidate.size(), false);
    ground_profiles_.reserve(ground.size());
    for (const auto& b : ground.behaviors()) ground_profiles_.push_back(matcher_.profile_ground(b));
    candidate_profiles_.reserve(candidate.size());
    for (const auto& b : candidate.behaviors()) candidate_profiles_.push_back(matcher_.profile_candidate(b));
}

MetricResult ComplianceEvaluator::fitness() const {
    if (ground_->empty()) throw EmptyGroundSet();
    MetricResult out;
    out.witnesses.resize(ground_->size());
    out.reasons.resize(ground_->size());
    for (std::size_t g = 0; g < ground_->size(); ++g) {
        for (std::size_t c = 0; c < candidate_->size(); ++c) {
            if (excluded_[c]) continue;
            ++out.comparisons;
            auto r = matcher_.strict(ground_profiles_[g], candidate_profiles_[c]);
            if (r.matched) {
                if (!out.witnesses[g]) out.witnesses[g] = BehaviorWitness{c, std::move(r)};
            } else {
                keep_closest(out.reasons[g], r);
            }
        }
        if (out.witnesses[g]) {
            out.reasons[g].reset();
            ++out.ratio.numerator;
        }
    }
    out.ratio.denominator = ground_->size();
    return out;
}

MetricResult ComplianceEvaluator::fes() const {
    if (ground_->empty()) throw EmptyGroundSet();
    MetricResult out;
    out.witnesses.resize(ground_->size());
    out.reasons.resize(ground_->size());
    for (std::size_t g = 0; g < ground_->size(); ++g) {
        for (std::size_t c = 0; c < candidate_->size(); ++c) {
            if (excluded_[c]) continue;
            ++out.comparisons;
            auto r = matcher_.covering(ground_profiles_[g], candidate_profiles_[c]);
            if (r.matched) {
                if (!out.witnesses[g]) out.witnesses[g] = BehaviorWitness{c, std::move(r)};
            } else {
                keep_closest(out.reasons[g], r);
            }
        }
        if (out.witnesses[g]) {
            out.reasons[g].reset();
            ++out.ratio.numerator;
        }
    }
    out.ratio.denominator = ground_->size();
    return out;
}

MetricResult ComplianceEvaluator::precision() const {
    if (candidate_->empty()) throw EmptyCandidateSet();
    MetricResult out;
    out.witnesses.resize(candidate_->size());
    out.reasons.resize(candidate_->size());
    for (std::size_t c = 0; c < candidate_->size(); ++c) {
        if (excluded_[c]) {
            out.reasons[c] = MatchFailure::pruned;
            continue;
        }
        for (std::size_t g = 0; g < ground_->size(); ++g) {
            ++out.comparisons;
            auto r = matcher_.embedding(candidate_profiles_[c], ground_profiles_[g]);
            if (r.matched) {
                if (!out.witnesses[c]) out.witnesses[c] = BehaviorWitness{g, std::move(r)};
            } else {
                keep_closest(out.reasons[c], r);
            }
        }
        if (out.witnesses[c]) {
            out.reasons[c].reset();
            ++out.ratio.numerator;
        }
    }
    out.ratio.denominator = candidate_->size();
    return out;
}

MetricResult fitness(const BehaviorSet& ground, const BehaviorSet& candidate, const EventAlignment& align,
                     NetPair nets) {
    if (ground.empty()) throw EmptyGroundSet();
    return ComplianceEvaluator(ground, candidate, align, nets).fitness();
}

MetricResult precision(const BehaviorSet& ground, const BehaviorSet& candidate,
                       const EventAlignment& align, NetPair nets) {
    if (candidate.empty()) throw EmptyCandidateSet();
    return ComplianceEvaluator(ground, candidate, align, nets).precision();
}

MetricResult fes(const BehaviorSet& ground, const BehaviorSet& candidate, const EventAlignment& align,
                 NetPair nets) {
    if (ground.empty()) throw EmptyGroundSet();
    return ComplianceEvaluator(ground, candidate, align, nets).fes();
}

// --- end-to-end comparison ------------------------------------------------------

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void require_valid(const PetriNet& net, const char* role) {
    auto diags = validate_net(net);
    if (has_errors(diags))
        throw ValidationFailed(std::string(role) + " net '" + net.name() + "' is invalid", std::move(diags));
}

BehaviorSet explore(const PetriNet& net, const CompareOptions& options, std::vector<Diagnostic>& diags) {
    auto rg = build_reachability_graph(net, options.limits);
    for (const auto& dead : find_dead_transitions(net, rg))
        diags.push_back({"W_DEAD_TRANSITION", Severity::warning, "transition never fires in net '" + net.name() + "'",
                         dead, {}});
    auto behaviors = enumerate_behaviors(rg, options.limits, {options.allow_no_terminal});
    if (behaviors.depth_truncated() > 0)
        diags.push_back({"W_DEPTH_TRUNCATED", Severity::warning,
                         std::to_string(behaviors.depth_truncated()) + " path(s) exceeded max_depth and were dropped",
                         net.name(), {}});
    return behaviors;
}

std::vector<std::string> event_strings(const BehaviorSet& set, const Behavior& b) {
    std::vector<std::string> out;
    for (const auto& label : set.labels(b)) out.push_back(label.str());
    return out;
}

}  // namespace

ComplianceReport compare(const PetriNet& ground_in, const PetriNet& candidate_in, const EventAlignment& align,
                         const CompareOptions& options) {
    const PetriNet ground = options.lcp_auto ? insert_loop_controls(ground_in) : ground_in;
    const PetriNet candidate = options.lcp_auto ? insert_loop_controls(candidate_in) : candidate_in;
    require_valid(ground, "ground");
    require_valid(candidate, "candidate");

    ComplianceReport report;
    report.metadata.ground_net = ground.name();
    report.metadata.candidate_net = candidate.name();
    report.metadata.alignment = align.name;
    report.metadata.limits = options.limits;
    report.metadata.options = options;
    report.metadata.generated_at = utc_now();

    auto align_diags = validate_alignment(align, ground, candidate);
    if (has_errors(align_diags))
        throw ValidationFailed("alignment '" + align.name + "' is invalid", std::move(align_diags));
    report.diagnostics = std::move(align_diags);

    const BehaviorSet ground_set = explore(ground, options, report.diagnostics);
    const BehaviorSet all_candidates = explore(candidate, options, report.diagnostics);
    if (ground_set.empty()) throw EmptyGroundSet();

    std::vector<std::size_t> pruned_indices;
    if (options.prune && !align.illegal_sequences.empty())
        pruned_indices = prune_illegal(all_candidates, align).pruned_indices;

    // Candidate set actually scored, and a map back to the full enumeration.
    std::vector<std::size_t> scored_to_full;
    std::vector<bool> excluded;
    BehaviorSet scored;
    if (options.exclude_pruned) {
        std::vector<bool> is_pruned(all_candidates.size(), false);
        for (auto i : pruned_indices) is_pruned[i] = true;
        for (std::size_t i = 0; i < all_candidates.size(); ++i)
            if (!is_pruned[i]) scored_to_full.push_back(i);
        scored = all_candidates.subset(scored_to_full);
    } else {
        scored = all_candidates;
        for (std::size_t i = 0; i < all_candidates.size(); ++i) scored_to_full.push_back(i);
        excluded.assign(all_candidates.size(), false);
        for (auto i : pruned_indices) excluded[i] = true;
    }
    if (scored.empty()) throw EmptyCandidateSet();

    const ComplianceEvaluator evaluator(ground_set, scored, align, {ground, candidate}, excluded);
    const MetricResult fit = evaluator.fitness();
    const MetricResult prec = evaluator.precision();
    const MetricResult cover = evaluator.fes();

    auto& counts = report.metrics.counts;
    report.metrics.fitness = fit.ratio;
    report.metrics.precision = prec.ratio;
    report.metrics.fes = cover.ratio;
    counts.ground_total = ground_set.size();
    counts.candidate_total = scored.size();
    counts.ground_strictly_matched = fit.ratio.numerator;
    counts.ground_covered = cover.ratio.numerator;
    counts.candidate_embedded = prec.ratio.numerator;
    counts.pruned = pruned_indices.size();
    counts.comparisons = fit.comparisons + prec.comparisons + cover.comparisons;
    counts.comparisons_skipped = 3 * pruned_indices.size() * ground_set.size();

    if (!pruned_indices.empty())
        report.diagnostics.push_back(
            {"W_PRUNED_BEHAVIORS", Severity::warning,
             std::to_string(pruned_indices.size()) + " candidate behavior(s) contain an illegal sequence; skipped " +
                 std::to_string(counts.comparisons_skipped) + " matcher comparison(s)",
             candidate.name(), {}});

    auto remap = [&](std::optional<BehaviorWitness> w) {
        if (w) w->other = scored_to_full[w->other];
        return w;
    };
    for (std::size_t g = 0; g < ground_set.size(); ++g) {
        GroundRecord rec;
        rec.index = g;
        rec.transitions = ground_set.transition_ids(ground_set[g]);
        rec.events = event_strings(ground_set, ground_set[g]);
        rec.strict = remap(fit.witnesses[g]);
        rec.covering = remap(cover.witnesses[g]);
        if (rec.strict) rec.best_candidate = rec.strict->other;
        else if (rec.covering) rec.best_candidate = rec.covering->other;
        rec.reason = fit.reasons[g];
        report.ground.push_back(std::move(rec));
    }

    std::vector<std::optional<std::size_t>> full_to_scored(all_candidates.size());
    for (std::size_t s = 0; s < scored_to_full.size(); ++s) full_to_scored[scored_to_full[s]] = s;
    for (std::size_t c = 0; c < all_candidates.size(); ++c) {
        CandidateRecord rec;
        rec.index = c;
        rec.transitions = all_candidates.transition_ids(all_candidates[c]);
        rec.events = event_strings(all_candidates, all_candidates[c]);
        if (!full_to_scored[c]) {
            rec.status = CandidateStatus::pruned;
            rec.reason = MatchFailure::pruned;
        } else {
            const std::size_t s = *full_to_scored[c];
            if (prec.witnesses[s]) {
                rec.status = CandidateStatus::embedded;
                rec.embedding = prec.witnesses[s];
            } else {
                rec.status = prec.reasons[s] == MatchFailure::pruned ? CandidateStatus::pruned
                                                                     : CandidateStatus::unmatched;
                rec.reason = prec.reasons[s];
            }
        }
        report.candidates.push_back(std::move(rec));
    }
    return report;
}

}  // namespace contractcheck
