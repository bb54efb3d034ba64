#pragma once

#include <cstddef>
#include <vector>

#include "petri/core.hpp"

namespace petri {

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(std::size_t cap);
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

struct RgEdge {
    std::size_t from = 0;
    TransitionIndex transition;
    std::size_t to = 0;

    bool operator==(const RgEdge&) const = default;
};

struct ReachabilityGraph {
    std::vector<Marking> vertices;  // index 0 is the initial marking
    std::vector<RgEdge> edges;
    std::size_t initial = 0;
    std::vector<std::size_t> finals;  // vertices with no enabled transition

    std::size_t vertex_count() const noexcept { return vertices.size(); }
    std::size_t edge_count() const noexcept { return edges.size(); }
    std::vector<std::vector<std::size_t>> successors() const;
};

/// Breadth-first exploration under safe semantics. Throws CapExceeded when
/// more than `cap` distinct markings would be discovered.
ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t cap = kDefaultStateCap);

struct SccDecomposition {
    std::vector<std::size_t> component_of;
    std::size_t component_count = 0;
    std::vector<std::size_t> component_sizes;  // indexed by component id

    std::size_t largest() const;
};

/// Iterative Tarjan. Components are numbered in order of their smallest vertex.
SccDecomposition scc_decompose(const ReachabilityGraph& rg);

struct SoundnessReport {
    bool sound = false;
    std::vector<TransitionIndex> dead_transitions;
    std::vector<std::size_t> nonterminating_states;  // cannot reach the sink-only marking
    std::vector<std::size_t> improper_completions;   // sink marked alongside other tokens
};

SoundnessReport soundness_check(const WorkflowNet& wf, const ReachabilityGraph& rg);
SoundnessReport soundness_check(const WorkflowNet& wf, std::size_t cap = kDefaultStateCap);

inline constexpr std::size_t kBruteForcePlaceLimit = 20;

/// Reachable set by fixpoint iteration over the full 2^|P| marking lattice.
/// Shares no code with reachability_graph; used as a test oracle.
/// Throws NetError(TooManyPlaces) above kBruteForcePlaceLimit places.
std::vector<Marking> brute_force_reachable(const PetriNet& net);

/// Largest set of transitions enabled together at one reachable marking whose
/// input place sets are pairwise disjoint, i.e. that can fire as one step.
std::size_t max_concurrent_enabled(const PetriNet& net, const ReachabilityGraph& rg);

}  // namespace petri
