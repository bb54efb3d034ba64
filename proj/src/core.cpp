#include "petri/core.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <sstream>

namespace petri {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingArc: return "DanglingArc";
    case ErrorCode::NonBipartiteArc: return "NonBipartiteArc";
    case ErrorCode::NonUnitWeight: return "NonUnitWeight";
    case ErrorCode::DuplicateArc: return "DuplicateArc";
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::MarkingDomainMismatch: return "MarkingDomainMismatch";
    case ErrorCode::UnsafeMarking: return "UnsafeMarking";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NoSource: return "NoSource";
    case ErrorCode::MultipleSources: return "MultipleSources";
    case ErrorCode::NoSink: return "NoSink";
    case ErrorCode::MultipleSinks: return "MultipleSinks";
    case ErrorCode::NodeOffPath: return "NodeOffPath";
    case ErrorCode::BadInitialMarking: return "BadInitialMarking";
    case ErrorCode::EmptyNet: return "EmptyNet";
    case ErrorCode::TooManyPlaces: return "TooManyPlaces";
    }
    return "Unknown";
}

NetError::NetError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

// ---------------------------------------------------------------------------
// Marking

Marking::Marking(std::size_t place_count) : size_(place_count), words_((place_count + 63) / 64, 0) {}

bool Marking::marked(PlaceIndex p) const {
    if (p.value >= size_) {
        throw NetError(ErrorCode::UnknownNode, "place index out of range");
    }
    return (words_[p.value / 64] >> (p.value % 64)) & 1U;
}

void Marking::set(PlaceIndex p, bool value) {
    if (p.value >= size_) {
        throw NetError(ErrorCode::UnknownNode, "place index out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << (p.value % 64);
    if (value) {
        words_[p.value / 64] |= bit;
    } else {
        words_[p.value / 64] &= ~bit;
    }
}

std::size_t Marking::token_count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::vector<PlaceIndex> Marking::marked_places() const {
    std::vector<PlaceIndex> out;
    for (std::uint32_t i = 0; i < size_; ++i) {
        if (marked(PlaceIndex{i})) {
            out.push_back(PlaceIndex{i});
        }
    }
    return out;
}

std::string Marking::bit_string() const {
    std::string s(size_, '0');
    for (std::uint32_t i = 0; i < size_; ++i) {
        if (marked(PlaceIndex{i})) {
            s[i] = '1';
        }
    }
    return s;
}

std::size_t Marking::hash() const noexcept {
    // FNV-1a over the words; stable across runs.
    std::uint64_t h = 1469598103934665603ULL ^ size_;
    for (auto w : words_) {
        for (int k = 0; k < 8; ++k) {
            h ^= (w >> (8 * k)) & 0xFFU;
            h *= 1099511628211ULL;
        }
    }
    return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// PetriNet

std::optional<NodeRef> PetriNet::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<PlaceIndex> PetriNet::find_place(std::string_view id) const {
    auto node = find(id);
    if (node && std::holds_alternative<PlaceIndex>(*node)) {
        return std::get<PlaceIndex>(*node);
    }
    return std::nullopt;
}

std::optional<TransitionIndex> PetriNet::find_transition(std::string_view id) const {
    auto node = find(id);
    if (node && std::holds_alternative<TransitionIndex>(*node)) {
        return std::get<TransitionIndex>(*node);
    }
    return std::nullopt;
}

std::optional<TransitionIndex> PetriNet::find_transition_by_label(std::string_view name) const {
    for (std::uint32_t i = 0; i < transitions_.size(); ++i) {
        if (transitions_[i].display() == name) {
            return TransitionIndex{i};
        }
    }
    return std::nullopt;
}

const std::string& PetriNet::id_of(NodeRef node) const {
    if (auto p = std::get_if<PlaceIndex>(&node)) {
        return place(*p).id;
    }
    return transition(std::get<TransitionIndex>(node)).id;
}

bool PetriNet::is_self_loop(TransitionIndex t) const {
    auto in = inputs(t);
    auto out = outputs(t);
    return std::equal(in.begin(), in.end(), out.begin(), out.end());
}

bool PetriNet::operator==(const PetriNet& other) const {
    return places_ == other.places_ && transitions_ == other.transitions_ && arcs_ == other.arcs_ &&
           initial_ == other.initial_;
}

namespace {

void check_label(const NodeInfo& n) {
    if (n.label && n.label->empty()) {
        throw NetError(ErrorCode::EmptyLabel, "node '" + n.id + "' has an empty label");
    }
}

}  // namespace

PetriNet build_net(std::vector<NodeInfo> places, std::vector<NodeInfo> transitions, const std::vector<ArcSpec>& arcs,
                   const std::map<std::string, int>& initial_marking) {
    PetriNet net;
    for (std::uint32_t i = 0; i < places.size(); ++i) {
        check_label(places[i]);
        if (!net.index_.emplace(places[i].id, PlaceIndex{i}).second) {
            throw NetError(ErrorCode::DuplicateId, "id '" + places[i].id + "' is declared twice");
        }
    }
    for (std::uint32_t i = 0; i < transitions.size(); ++i) {
        check_label(transitions[i]);
        if (!net.index_.emplace(transitions[i].id, TransitionIndex{i}).second) {
            throw NetError(ErrorCode::DuplicateId, "id '" + transitions[i].id + "' is declared twice");
        }
    }
    net.places_ = std::move(places);
    net.transitions_ = std::move(transitions);
    net.pre_.resize(net.transitions_.size());
    net.post_.resize(net.transitions_.size());
    net.producers_.resize(net.places_.size());
    net.consumers_.resize(net.places_.size());

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& spec : arcs) {
        auto src = net.find(spec.source);
        auto dst = net.find(spec.target);
        if (!src || !dst) {
            throw NetError(ErrorCode::DanglingArc,
                           "arc " + spec.source + " -> " + spec.target + " references an undeclared node");
        }
        if (src->index() == dst->index()) {
            throw NetError(ErrorCode::NonBipartiteArc,
                           "arc " + spec.source + " -> " + spec.target + " connects two nodes of the same kind");
        }
        if (spec.weight != 1) {
            throw NetError(ErrorCode::NonUnitWeight,
                           "arc " + spec.source + " -> " + spec.target + " has weight " + std::to_string(spec.weight));
        }
        if (!seen.emplace(spec.source, spec.target).second) {
            throw NetError(ErrorCode::DuplicateArc, "arc " + spec.source + " -> " + spec.target + " is declared twice");
        }
        net.arcs_.push_back(Arc{*src, *dst, 1});
        if (auto in = std::get_if<PlaceIndex>(&*src)) {
            auto t = std::get<TransitionIndex>(*dst);
            net.pre_[t.value].push_back(*in);
            net.consumers_[in->value].push_back(t);
        } else {
            auto t = std::get<TransitionIndex>(*src);
            auto p = std::get<PlaceIndex>(*dst);
            net.post_[t.value].push_back(p);
            net.producers_[p.value].push_back(t);
        }
    }
    for (auto& v : net.pre_) std::sort(v.begin(), v.end());
    for (auto& v : net.post_) std::sort(v.begin(), v.end());
    for (auto& v : net.producers_) std::sort(v.begin(), v.end());
    for (auto& v : net.consumers_) std::sort(v.begin(), v.end());

    if (initial_marking.size() != net.places_.size()) {
        throw NetError(ErrorCode::MarkingDomainMismatch, "initial marking covers " +
                                                             std::to_string(initial_marking.size()) + " places, net has " +
                                                             std::to_string(net.places_.size()));
    }
    net.initial_ = Marking(net.places_.size());
    for (const auto& [id, count] : initial_marking) {
        auto p = net.find_place(id);
        if (!p) {
            throw NetError(ErrorCode::MarkingDomainMismatch, "initial marking names unknown place '" + id + "'");
        }
        if (count != 0 && count != 1) {
            throw NetError(ErrorCode::UnsafeMarking,
                           "place '" + id + "' holds " + std::to_string(count) + " tokens; only 0 or 1 allowed");
        }
        net.initial_.set(*p, count == 1);
    }
    return net;
}

PetriNet build_net(std::vector<NodeInfo> places, std::vector<NodeInfo> transitions, const std::vector<ArcSpec>& arcs,
                   const std::vector<std::string>& marked) {
    std::map<std::string, int> m;
    for (const auto& p : places) {
        m[p.id] = 0;
    }
    for (const auto& id : marked) {
        auto it = m.find(id);
        if (it == m.end()) {
            throw NetError(ErrorCode::MarkingDomainMismatch, "initial marking names unknown place '" + id + "'");
        }
        it->second = 1;
    }
    return build_net(std::move(places), std::move(transitions), arcs, m);
}

// ---------------------------------------------------------------------------
// Token game

bool is_enabled(const PetriNet& net, const Marking& m, TransitionIndex t) {
    auto in = net.inputs(t);
    for (auto p : in) {
        if (!m.marked(p)) {
            return false;
        }
    }
    // Safe semantics: an output place that is not also consumed must be empty.
    for (auto p : net.outputs(t)) {
        if (m.marked(p) && !std::binary_search(in.begin(), in.end(), p)) {
            return false;
        }
    }
    return true;
}

std::vector<TransitionIndex> enabled(const PetriNet& net, const Marking& m) {
    if (m.size() != net.place_count()) {
        throw NetError(ErrorCode::MarkingDomainMismatch, "marking size differs from place count");
    }
    std::vector<TransitionIndex> out;
    for (std::uint32_t i = 0; i < net.transition_count(); ++i) {
        if (is_enabled(net, m, TransitionIndex{i})) {
            out.push_back(TransitionIndex{i});
        }
    }
    return out;
}

Marking fire(const PetriNet& net, const Marking& m, TransitionIndex t) {
    if (t.value >= net.transition_count()) {
        throw NetError(ErrorCode::UnknownNode, "transition index out of range");
    }
    if (m.size() != net.place_count()) {
        throw NetError(ErrorCode::MarkingDomainMismatch, "marking size differs from place count");
    }
    if (!is_enabled(net, m, t)) {
        throw NetError(ErrorCode::NotEnabled, "transition '" + net.transition(t).id + "' is not enabled");
    }
    Marking next = m;
    for (auto p : net.inputs(t)) {
        next.set(p, false);
    }
    for (auto p : net.outputs(t)) {
        next.set(p, true);
    }
    return next;
}

Marking marking_of(const PetriNet& net, std::span<const std::string> marked_ids) {
    Marking m(net.place_count());
    for (const auto& id : marked_ids) {
        auto p = net.find_place(id);
        if (!p) {
            throw NetError(ErrorCode::UnknownNode, "no place named '" + id + "'");
        }
        m.set(*p, true);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Workflow nets

Marking WorkflowNet::final_marking() const {
    Marking m(net.place_count());
    m.set(sink, true);
    return m;
}

namespace {

// Node numbering for path checks: places [0, P), transitions [P, P+T), short-circuit P+T.
std::vector<bool> reach_from(std::size_t start, const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

WorkflowNet validate_workflow(PetriNet net) {
    std::vector<PlaceIndex> sources;
    std::vector<PlaceIndex> sinks;
    for (std::uint32_t i = 0; i < net.place_count(); ++i) {
        PlaceIndex p{i};
        if (net.producers(p).empty()) sources.push_back(p);
        if (net.consumers(p).empty()) sinks.push_back(p);
    }
    auto names = [&](const std::vector<PlaceIndex>& ps) {
        std::string s;
        for (auto p : ps) {
            s += (s.empty() ? "" : ", ") + net.place(p).id;
        }
        return s;
    };
    if (sources.empty()) throw NetError(ErrorCode::NoSource, "no place without incoming arcs");
    if (sources.size() > 1) throw NetError(ErrorCode::MultipleSources, "candidate sources: " + names(sources));
    if (sinks.empty()) throw NetError(ErrorCode::NoSink, "no place without outgoing arcs");
    if (sinks.size() > 1) throw NetError(ErrorCode::MultipleSinks, "candidate sinks: " + names(sinks));
    const PlaceIndex source = sources.front();
    const PlaceIndex sink = sinks.front();
    if (source == sink) {
        throw NetError(ErrorCode::NodeOffPath, "source and sink coincide at '" + net.place(source).id + "'");
    }

    // Every node must lie on a source-to-sink path: equivalently, the net
    // short-circuited by an extra sink->source transition is strongly connected.
    const std::size_t P = net.place_count();
    const std::size_t T = net.transition_count();
    const std::size_t shortcut = P + T;
    std::vector<std::vector<std::size_t>> fwd(P + T + 1);
    std::vector<std::vector<std::size_t>> bwd(P + T + 1);
    for (const auto& arc : net.arcs()) {
        auto node = [&](const NodeRef& r) -> std::size_t {
            if (auto p = std::get_if<PlaceIndex>(&r)) return p->value;
            return P + std::get<TransitionIndex>(r).value;
        };
        fwd[node(arc.source)].push_back(node(arc.target));
        bwd[node(arc.target)].push_back(node(arc.source));
    }
    fwd[sink.value].push_back(shortcut);
    bwd[shortcut].push_back(sink.value);
    fwd[shortcut].push_back(source.value);
    bwd[source.value].push_back(shortcut);
    auto down = reach_from(source.value, fwd);
    auto up = reach_from(source.value, bwd);
    for (std::size_t u = 0; u < P + T; ++u) {
        if (!down[u] || !up[u]) {
            std::string id = u < P ? net.place(PlaceIndex{static_cast<std::uint32_t>(u)}).id
                                   : net.transition(TransitionIndex{static_cast<std::uint32_t>(u - P)}).id;
            throw NetError(ErrorCode::NodeOffPath, "node '" + id + "' is not on a path from source to sink");
        }
    }

    const Marking& m0 = net.initial_marking();
    if (m0.token_count() != 1 || !m0.marked(source)) {
        throw NetError(ErrorCode::BadInitialMarking,
                       "initial marking must hold exactly one token, on '" + net.place(source).id + "'");
    }
    return WorkflowNet{std::move(net), source, sink};
}

// ---------------------------------------------------------------------------
// Census

double ElementCensus::place_share() const {
    return static_cast<double>(places) / static_cast<double>(total());
}

double ElementCensus::transition_share() const {
    return static_cast<double>(transitions) / static_cast<double>(total());
}

double ElementCensus::arc_share() const {
    return static_cast<double>(arcs) / static_cast<double>(total());
}

ElementCensus census(const PetriNet& net) {
    ElementCensus c{net.place_count(), net.transition_count(), net.arc_count()};
    if (c.total() == 0) {
        throw NetError(ErrorCode::EmptyNet, "net has no elements");
    }
    return c;
}

}  // namespace petri
