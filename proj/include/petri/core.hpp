#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace petri {

enum class ErrorCode {
    DuplicateId,
    DanglingArc,
    NonBipartiteArc,
    NonUnitWeight,
    DuplicateArc,
    EmptyLabel,
    MarkingDomainMismatch,
    UnsafeMarking,
    NotEnabled,
    UnknownNode,
    NoSource,
    MultipleSources,
    NoSink,
    MultipleSinks,
    NodeOffPath,
    BadInitialMarking,
    EmptyNet,
    TooManyPlaces,
};

std::string_view to_string(ErrorCode code);

/// Raised for every structural or semantic violation in the net model.
class NetError : public std::runtime_error {
public:
    NetError(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Dense indices into a net's canonical place/transition order.
struct PlaceIndex {
    std::uint32_t value = 0;
    auto operator<=>(const PlaceIndex&) const = default;
};

struct TransitionIndex {
    std::uint32_t value = 0;
    auto operator<=>(const TransitionIndex&) const = default;
};

using NodeRef = std::variant<PlaceIndex, TransitionIndex>;

struct NodeInfo {
    std::string id;
    std::optional<std::string> label;

    bool operator==(const NodeInfo&) const = default;
    /// The label if present, otherwise the id.
    const std::string& display() const { return label ? *label : id; }
};

struct Arc {
    NodeRef source;
    NodeRef target;
    int weight = 1;

    bool operator==(const Arc&) const = default;
};

/// A 1-safe marking stored as a bit-vector over the canonical place order.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t place_count);

    std::size_t size() const noexcept { return size_; }
    bool marked(PlaceIndex p) const;
    void set(PlaceIndex p, bool value);
    std::size_t token_count() const noexcept;
    std::vector<PlaceIndex> marked_places() const;
    /// "010011..." in canonical place order.
    std::string bit_string() const;
    std::size_t hash() const noexcept;

    bool operator==(const Marking&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept { return m.hash(); }
};

struct ArcSpec {
    std::string source;
    std::string target;
    int weight = 1;
};

/// Immutable place/transition net with unit arcs and a 1-safe initial marking.
class PetriNet {
public:
    PetriNet() = default;

    std::size_t place_count() const noexcept { return places_.size(); }
    std::size_t transition_count() const noexcept { return transitions_.size(); }
    std::size_t arc_count() const noexcept { return arcs_.size(); }

    const std::vector<NodeInfo>& places() const noexcept { return places_; }
    const std::vector<NodeInfo>& transitions() const noexcept { return transitions_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    const Marking& initial_marking() const noexcept { return initial_; }

    const NodeInfo& place(PlaceIndex p) const { return places_.at(p.value); }
    const NodeInfo& transition(TransitionIndex t) const { return transitions_.at(t.value); }

    // Pre/post sets, sorted in canonical order.
    std::span<const PlaceIndex> inputs(TransitionIndex t) const { return pre_.at(t.value); }
    std::span<const PlaceIndex> outputs(TransitionIndex t) const { return post_.at(t.value); }
    std::span<const TransitionIndex> producers(PlaceIndex p) const { return producers_.at(p.value); }
    std::span<const TransitionIndex> consumers(PlaceIndex p) const { return consumers_.at(p.value); }

    std::optional<NodeRef> find(std::string_view id) const;
    std::optional<PlaceIndex> find_place(std::string_view id) const;
    std::optional<TransitionIndex> find_transition(std::string_view id) const;
    /// First transition whose label (or id, when unlabeled) equals `name`.
    std::optional<TransitionIndex> find_transition_by_label(std::string_view name) const;

    const std::string& id_of(NodeRef node) const;

    /// True for transitions whose input and output place sets coincide.
    bool is_self_loop(TransitionIndex t) const;

    bool operator==(const PetriNet& other) const;

private:
    friend PetriNet build_net(std::vector<NodeInfo>, std::vector<NodeInfo>, const std::vector<ArcSpec>&,
                              const std::map<std::string, int>&);

    std::vector<NodeInfo> places_;
    std::vector<NodeInfo> transitions_;
    std::vector<Arc> arcs_;
    Marking initial_;
    std::vector<std::vector<PlaceIndex>> pre_;
    std::vector<std::vector<PlaceIndex>> post_;
    std::vector<std::vector<TransitionIndex>> producers_;
    std::vector<std::vector<TransitionIndex>> consumers_;
    std::unordered_map<std::string, NodeRef> index_;
};

/// Builds and validates a net. `initial_marking` must map every place id to 0 or 1.
PetriNet build_net(std::vector<NodeInfo> places, std::vector<NodeInfo> transitions,
                   const std::vector<ArcSpec>& arcs, const std::map<std::string, int>& initial_marking);

/// Convenience overload: every place listed in `marked` carries one token, all others none.
PetriNet build_net(std::vector<NodeInfo> places, std::vector<NodeInfo> transitions,
                   const std::vector<ArcSpec>& arcs, const std::vector<std::string>& marked);

bool is_enabled(const PetriNet& net, const Marking& m, TransitionIndex t);

/// Transitions enabled at `m` under safe semantics, in canonical order.
std::vector<TransitionIndex> enabled(const PetriNet& net, const Marking& m);

Marking fire(const PetriNet& net, const Marking& m, TransitionIndex t);

Marking marking_of(const PetriNet& net, std::span<const std::string> marked_ids);

struct WorkflowNet {
    PetriNet net;
    PlaceIndex source;
    PlaceIndex sink;

    /// Token on the sink only.
    Marking final_marking() const;
};

WorkflowNet validate_workflow(PetriNet net);

struct ElementCensus {
    std::size_t places = 0;
    std::size_t transitions = 0;
    std::size_t arcs = 0;

    std::size_t total() const noexcept { return places + transitions + arcs; }
    double place_share() const;
    double transition_share() const;
    double arc_share() const;
};

ElementCensus census(const PetriNet& net);

}  // namespace petri
