#include "contractcheck/reachability.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "contractcheck/errors.hpp"

namespace contractcheck {

ReachabilityGraph::ReachabilityGraph(std::string net_name,
                                     std::shared_ptr<const std::vector<Transition>> transitions,
                                     std::vector<Marking> nodes, std::vector<RgEdge> edges)
    : net_name_(std::move(net_name)), transitions_(std::move(transitions)), nodes_(std::move(nodes)),
      edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    offsets_.assign(nodes_.size() + 1, 0);
    for (const auto& e : edges_) ++offsets_[e.source + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    for (std::size_t n = 0; n < nodes_.size(); ++n)
        if (offsets_[n] == offsets_[n + 1]) terminals_.push_back(n);
}

ReachabilityGraph build_reachability_graph(const PetriNet& net, const ExplorationLimits& limits,
                                           ExplorationOrder order) {
    std::vector<Marking> nodes;
    std::vector<RgEdge> edges;
    std::unordered_map<Marking, std::size_t, MarkingHash> index;

    auto intern = [&](Marking m) -> std::size_t {
        auto it = index.find(m);
        if (it != index.end()) return it->second;
        if (nodes.size() >= limits.max_states) throw StateExplosion(net.name(), limits.max_states);
        const std::size_t id = nodes.size();
        index.emplace(m, id);
        nodes.push_back(std::move(m));
        return id;
    };

    std::deque<std::size_t> frontier;
    frontier.push_back(intern(net.initial_marking()));
    const std::size_t nt = net.transitions().size();
    while (!frontier.empty()) {
        std::size_t current;
        if (order == ExplorationOrder::breadth_first) {
            current = frontier.front();
            frontier.pop_front();
        } else {
            current = frontier.back();
            frontier.pop_back();
        }
        for (std::size_t t = 0; t < nt; ++t) {
            if (!is_enabled(net, nodes[current], t)) continue;
            const std::size_t before = nodes.size();
            const std::size_t target = intern(fire(net, nodes[current], t));
            if (target == before) frontier.push_back(target);
            edges.push_back({current, t, target});
        }
    }
    auto table = std::make_shared<const std::vector<Transition>>(net.transitions());
    return ReachabilityGraph(net.name(), std::move(table), std::move(nodes), std::move(edges));
}

std::vector<EventLabel> BehaviorSet::labels(const Behavior& b) const {
    std::vector<EventLabel> out;
    out.reserve(b.path.size());
    for (auto t : b.path) out.push_back((*transitions_)[t].label);
    return out;
}

std::vector<std::string> BehaviorSet::transition_ids(const Behavior& b) const {
    std::vector<std::string> out;
    out.reserve(b.path.size());
    for (auto t : b.path) out.push_back((*transitions_)[t].id);
    return out;
}

BehaviorSet BehaviorSet::with_order(const std::vector<std::size_t>& permutation) const {
    std::vector<Behavior> reordered;
    reordered.reserve(permutation.size());
    for (auto i : permutation) reordered.push_back(behaviors_.at(i));
    return BehaviorSet(source_net_, transitions_, std::move(reordered), depth_truncated_);
}

BehaviorSet enumerate_behaviors(const ReachabilityGraph& rg, const ExplorationLimits& limits,
                                EnumerationOptions options) {
    if (rg.terminals().empty()) {
        if (!options.allow_no_terminal) throw NoTerminalMarkings(rg.net_name());
        return BehaviorSet(rg.net_name(), rg.transition_table(), {});
    }

    struct Frame {
        std::size_t node;
        std::size_t cursor;
        std::size_t end;
    };

    std::vector<Behavior> out;
    std::size_t truncated = 0;
    std::vector<bool> on_path(rg.nodes().size(), false);
    std::vector<std::size_t> path;
    std::vector<Frame> stack;

    auto push = [&](std::size_t node) {
        auto [first, last] = rg.out_edges(node);
        on_path[node] = true;
        stack.push_back({node, first, last});
        if (first == last) {
            if (out.size() >= limits.max_paths) throw PathExplosion(rg.net_name(), limits.max_paths);
            out.push_back({path, rg.nodes()[node]});
        }
    };

    push(rg.root_index());
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.cursor == top.end || path.size() >= limits.max_depth) {
            if (top.cursor != top.end) ++truncated;
            on_path[top.node] = false;
            stack.pop_back();
            if (!path.empty()) path.pop_back();
            continue;
        }
        const RgEdge& edge = rg.edges()[top.cursor++];
        if (on_path[edge.target]) continue;
        path.push_back(edge.transition);
        push(edge.target);
    }
    return BehaviorSet(rg.net_name(), rg.transition_table(), std::move(out), truncated);
}

std::set<std::string> find_dead_transitions(const PetriNet& net, const ReachabilityGraph& rg) {
    std::vector<bool> fired(net.transitions().size(), false);
    for (const auto& e : rg.edges())
        if (e.transition < fired.size()) fired[e.transition] = true;
    std::set<std::string> dead;
    for (std::size_t t = 0; t < fired.size(); ++t)
        if (!fired[t]) dead.insert(net.transitions()[t].id);
    return dead;
}

}  // namespace contractcheck
