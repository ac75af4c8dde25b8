#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "contractcheck/petri_net.hpp"

namespace contractcheck {

struct ExplorationLimits {
    std::size_t max_states = 100000;
    std::size_t max_paths = 100000;
    std::size_t max_depth = 10000;

    bool valid() const noexcept { return max_states > 0 && max_paths > 0 && max_depth > 0; }
};

enum class ExplorationOrder { breadth_first, depth_first };

struct RgEdge {
    std::size_t source = 0;
    std::size_t transition = 0;  // index into transitions()
    std::size_t target = 0;

    auto operator<=>(const RgEdge&) const = default;
};

/// Markings reachable from the initial marking. Node 0 is the root; edges are
/// sorted by (source, transition) and every node's out-edges are contiguous.
class ReachabilityGraph {
public:
    ReachabilityGraph(std::string net_name, std::shared_ptr<const std::vector<Transition>> transitions,
                      std::vector<Marking> nodes, std::vector<RgEdge> edges);

    const std::string& net_name() const noexcept { return net_name_; }
    const std::vector<Transition>& transitions() const noexcept { return *transitions_; }
    const std::shared_ptr<const std::vector<Transition>>& transition_table() const noexcept {
        return transitions_;
    }
    const std::vector<Marking>& nodes() const noexcept { return nodes_; }
    const std::vector<RgEdge>& edges() const noexcept { return edges_; }
    const Marking& root() const { return nodes_.front(); }
    std::size_t root_index() const noexcept { return 0; }
    /// Nodes without outgoing edges, ascending.
    const std::vector<std::size_t>& terminals() const noexcept { return terminals_; }

    /// Out-edges of `node` as a [first, last) range into edges().
    std::pair<std::size_t, std::size_t> out_edges(std::size_t node) const {
        return {offsets_[node], offsets_[node + 1]};
    }

private:
    std::string net_name_;
    std::shared_ptr<const std::vector<Transition>> transitions_;
    std::vector<Marking> nodes_;
    std::vector<RgEdge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> terminals_;
};

/// Fixpoint of fire/enabled_transitions from the initial marking.
/// Throws StateExplosion when more than `limits.max_states` markings are reachable.
ReachabilityGraph build_reachability_graph(const PetriNet& net, const ExplorationLimits& limits = {},
                                           ExplorationOrder order = ExplorationOrder::breadth_first);

/// A simple RG path from the root to a dead marking.
struct Behavior {
    std::vector<std::size_t> path;  // transition indices in firing order
    Marking final_marking;
};

class BehaviorSet {
public:
    BehaviorSet() = default;
    BehaviorSet(std::string source_net, std::shared_ptr<const std::vector<Transition>> transitions,
                std::vector<Behavior> behaviors, std::size_t depth_truncated = 0)
        : source_net_(std::move(source_net)), transitions_(std::move(transitions)),
          behaviors_(std::move(behaviors)), depth_truncated_(depth_truncated) {}

    const std::string& source_net() const noexcept { return source_net_; }
    const std::vector<Behavior>& behaviors() const noexcept { return behaviors_; }
    const std::vector<Transition>& transitions() const noexcept { return *transitions_; }
    const std::shared_ptr<const std::vector<Transition>>& transition_table() const noexcept {
        return transitions_;
    }
    std::size_t size() const noexcept { return behaviors_.size(); }
    bool empty() const noexcept { return behaviors_.empty(); }
    const Behavior& operator[](std::size_t i) const { return behaviors_[i]; }

    const Transition& event(const Behavior& b, std::size_t i) const { return (*transitions_)[b.path[i]]; }
    std::vector<EventLabel> labels(const Behavior& b) const;
    std::vector<std::string> transition_ids(const Behavior& b) const;

    /// Paths that reached max_depth before a terminal and were dropped.
    std::size_t depth_truncated() const noexcept { return depth_truncated_; }

    /// Same behaviors in a different order; metrics must not care.
    BehaviorSet with_order(const std::vector<std::size_t>& permutation) const;
    BehaviorSet subset(const std::vector<std::size_t>& indices) const { return with_order(indices); }

private:
    std::string source_net_;
    std::shared_ptr<const std::vector<Transition>> transitions_ =
        std::make_shared<const std::vector<Transition>>();
    std::vector<Behavior> behaviors_;
    std::size_t depth_truncated_ = 0;
};

struct EnumerationOptions {
    bool allow_no_terminal = false;
};

/// All simple root-to-terminal paths, ordered lexicographically by
/// transition-id sequence. Throws PathExplosion and NoTerminalMarkings.
BehaviorSet enumerate_behaviors(const ReachabilityGraph& rg, const ExplorationLimits& limits = {},
                                EnumerationOptions options = {});

/// Transitions that label no RG edge, sorted by id.
std::set<std::string> find_dead_transitions(const PetriNet& net, const ReachabilityGraph& rg);

}  // namespace contractcheck
