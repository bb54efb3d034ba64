#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "petri/core.hpp"
#include "petri/state_space.hpp"

namespace petri {

using Rational = boost::rational<std::int64_t>;

/// Decimal rendering with three fractional digits, rounding half away from zero.
std::string format_fixed3(const Rational& value);
double to_double(const Rational& value);

enum class MetricsErrorCode {
    DegenerateNet,
    MismatchedInputs,
    StaleMatch,
    NotSound,
    NoProgress,
};

std::string_view to_string(MetricsErrorCode code);

class MetricsError : public std::runtime_error {
public:
    MetricsError(MetricsErrorCode code, const std::string& detail);
    MetricsErrorCode code() const noexcept { return code_; }

private:
    MetricsErrorCode code_;
};

/// |A| / (2 |P| |T|), exact.
Rational density(const PetriNet& net);

/// |E| - |V| + |SCC| of a reachability graph.
std::int64_t extended_cyclomatic(const ReachabilityGraph& rg, const SccDecomposition& scc);

// ---------------------------------------------------------------------------
// Structuredness

/// Listed in match priority order.
enum class ComponentKind {
    Sequence,
    Choice,
    While,
    MarkedGraph,
    StateMachine,
    WellStructured,
    Unstructured,
};

inline constexpr std::size_t kComponentKindCount = 7;
inline constexpr std::array<ComponentKind, kComponentKindCount> kAllComponentKinds = {
    ComponentKind::Sequence,     ComponentKind::Choice,         ComponentKind::While,
    ComponentKind::MarkedGraph,  ComponentKind::StateMachine,   ComponentKind::WellStructured,
    ComponentKind::Unstructured,
};

std::string_view to_string(ComponentKind kind);

/// Weight multiplier per kind (before the diff factor).
std::int64_t kind_factor(ComponentKind kind);

/// Balance of split and join nodes: 1 when perfectly matched.
Rational diff_value(std::size_t splits, std::size_t joins);

/// Working state of the fold algorithm: a workflow net whose transitions carry
/// weights (1 for original transitions) and nesting tiers (0 for originals).
struct FoldState {
    WorkflowNet wf;
    std::vector<Rational> weights;
    std::vector<int> tiers;
    int macros_created = 0;

    static FoldState from(const WorkflowNet& wf);
    Rational weight(TransitionIndex t) const { return weights.at(t.value); }
    /// True once a single transition connects source to sink.
    bool terminal() const;
};

/// How a component is replaced by its macro transition.
enum class FoldShape {
    Region,    // interior removed, macro wired entry -> exit
    LoopSplit, // self-loops on entry removed, macro wired entry -> fresh exit place
};

struct ComponentMatch {
    ComponentKind kind = ComponentKind::Unstructured;
    FoldShape shape = FoldShape::Region;
    std::string entry;                        // entry place id
    std::string exit;                         // exit place id (== entry for loop splits)
    std::vector<std::string> place_set;       // interior place ids, canonical order
    std::vector<std::string> transition_set;  // contained transition ids, canonical order
    std::size_t split_count = 0;
    std::size_t join_count = 0;
    Rational diff{1};
    Rational inner_weight{0};  // sum of contained transition weights
    Rational weight{0};        // factor * diff * inner_weight
    int tier = 1;
    std::string folded_into;  // macro transition id; set when folded
    std::size_t net_fingerprint = 0;

    std::size_t node_count() const { return place_set.size() + transition_set.size(); }
};

/// Structural fingerprint of a net; used to reject stale matches.
std::size_t net_fingerprint(const PetriNet& net);

/// All foldable components of the current net, sorted by (kind priority,
/// node count, smallest canonical transition).
std::vector<ComponentMatch> match_components(const FoldState& state);
std::vector<ComponentMatch> match_components(const WorkflowNet& wf);

struct FoldResult {
    FoldState state;
    TransitionIndex macro;
    ComponentMatch match;  // with folded_into filled in
};

FoldResult fold_component(const FoldState& state, const ComponentMatch& match);

struct StructurednessResult {
    Rational value{0};
    std::vector<ComponentMatch> trace;
};

/// Repeatedly folds the highest-priority component until one transition
/// remains between source and sink. Requires a sound workflow net.
StructurednessResult structuredness(const WorkflowNet& wf, std::size_t cap = kDefaultStateCap);

/// Re-applies a recorded trace to `wf`; returns the terminal state.
FoldState replay_trace(const WorkflowNet& wf, const std::vector<ComponentMatch>& trace);

// ---------------------------------------------------------------------------

struct StateSpaceStats {
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    std::size_t scc_count = 0;
    std::size_t largest_scc = 0;
};

struct MetricsReport {
    ElementCensus census;
    Rational density{0};
    std::int64_t extended_cyclomatic = 0;
    Rational structuredness{0};
    std::array<std::size_t, kComponentKindCount> component_census{};
    std::vector<ComponentMatch> fold_trace;
    StateSpaceStats state_space;
};

MetricsReport full_report(const WorkflowNet& wf, std::size_t cap = kDefaultStateCap);

}  // namespace petri
