#include "petri/metrics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace petri {

// ---------------------------------------------------------------------------
// Presentation

std::string format_fixed3(const Rational& value) {
    const bool negative = value < 0;
    const Rational magnitude = negative ? -value : value;
    // round(magnitude * 1000), halves away from zero
    const std::int64_t num = magnitude.numerator() * 1000;
    const std::int64_t den = magnitude.denominator();
    const std::int64_t scaled = (2 * num + den) / (2 * den);
    std::string frac = std::to_string(scaled % 1000);
    frac.insert(0, 3 - frac.size(), '0');
    std::string out = std::to_string(scaled / 1000) + "." + frac;
    if (negative && scaled != 0) {
        out.insert(0, "-");
    }
    return out;
}

double to_double(const Rational& value) {
    return boost::rational_cast<double>(value);
}

std::string_view to_string(MetricsErrorCode code) {
    switch (code) {
    case MetricsErrorCode::DegenerateNet: return "DegenerateNet";
    case MetricsErrorCode::MismatchedInputs: return "MismatchedInputs";
    case MetricsErrorCode::StaleMatch: return "StaleMatch";
    case MetricsErrorCode::NotSound: return "NotSound";
    case MetricsErrorCode::NoProgress: return "NoProgress";
    }
    return "Unknown";
}

MetricsError::MetricsError(MetricsErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

// ---------------------------------------------------------------------------
// Density and extended cyclomatic

Rational density(const PetriNet& net) {
    if (net.place_count() == 0 || net.transition_count() == 0) {
        throw MetricsError(MetricsErrorCode::DegenerateNet, "density needs at least one place and one transition");
    }
    const auto max_arcs = static_cast<std::int64_t>(2 * net.place_count() * net.transition_count());
    return Rational(static_cast<std::int64_t>(net.arc_count()), max_arcs);
}

std::int64_t extended_cyclomatic(const ReachabilityGraph& rg, const SccDecomposition& scc) {
    if (scc.component_of.size() != rg.vertex_count()) {
        throw MetricsError(MetricsErrorCode::MismatchedInputs,
                           "SCC decomposition covers " + std::to_string(scc.component_of.size()) +
                               " vertices, graph has " + std::to_string(rg.vertex_count()));
    }
    return static_cast<std::int64_t>(rg.edge_count()) - static_cast<std::int64_t>(rg.vertex_count()) +
           static_cast<std::int64_t>(scc.component_count);
}

// ---------------------------------------------------------------------------
// Component kinds and weights

std::string_view to_string(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::Sequence: return "Sequence";
    case ComponentKind::Choice: return "Choice";
    case ComponentKind::While: return "While";
    case ComponentKind::MarkedGraph: return "MarkedGraph";
    case ComponentKind::StateMachine: return "StateMachine";
    case ComponentKind::WellStructured: return "WellStructured";
    case ComponentKind::Unstructured: return "Unstructured";
    }
    return "Unknown";
}

std::int64_t kind_factor(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::Sequence: return 1;
    case ComponentKind::Choice: return 2;
    case ComponentKind::While: return 2;
    case ComponentKind::MarkedGraph: return 2;
    case ComponentKind::StateMachine: return 2;
    case ComponentKind::WellStructured: return 3;
    case ComponentKind::Unstructured: return 4;
    }
    return 4;
}

Rational diff_value(std::size_t splits, std::size_t joins) {
    if (splits == 0 && joins == 0) {
        return Rational(1);
    }
    const auto hi = static_cast<std::int64_t>(std::max(splits, joins));
    const auto lo = static_cast<std::int64_t>(std::min(splits, joins));
    if (lo > 0) {
        return Rational(hi, lo);
    }
    return Rational(1 + hi);
}

namespace {

bool kind_uses_diff(ComponentKind kind) {
    return kind == ComponentKind::MarkedGraph || kind == ComponentKind::StateMachine;
}

}  // namespace

FoldState FoldState::from(const WorkflowNet& wf) {
    FoldState s{wf, std::vector<Rational>(wf.net.transition_count(), Rational(1)),
                std::vector<int>(wf.net.transition_count(), 0), 0};
    return s;
}

bool FoldState::terminal() const {
    const auto& net = wf.net;
    if (net.transition_count() != 1) return false;
    auto in = net.inputs(TransitionIndex{0});
    auto out = net.outputs(TransitionIndex{0});
    return in.size() == 1 && out.size() == 1 && in[0] == wf.source && out[0] == wf.sink;
}

std::size_t net_fingerprint(const PetriNet& net) {
    std::string key;
    for (const auto& p : net.places()) key += "P" + p.id + "\n";
    for (const auto& t : net.transitions()) key += "T" + t.id + "\n";
    for (const auto& a : net.arcs()) key += "A" + net.id_of(a.source) + ">" + net.id_of(a.target) + "\n";
    return std::hash<std::string>{}(key);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct Candidate {
    ComponentKind kind;
    FoldShape shape;
    PlaceIndex entry;
    PlaceIndex exit;
    std::vector<PlaceIndex> places;
    std::vector<TransitionIndex> transitions;
};

bool single(std::span<const PlaceIndex> s) { return s.size() == 1; }

bool simple_transition(const PetriNet& net, TransitionIndex t) {
    return single(net.inputs(t)) && single(net.outputs(t));
}

// Maximal chains p0 -t1-> p1 -t2-> ... -tk-> pk with k >= 2, where every
// transition has one input and one output and every interior place has one
// producer and one consumer.
std::vector<Candidate> find_sequences(const PetriNet& net) {
    std::vector<Candidate> out;
    const std::size_t T = net.transition_count();
    std::vector<bool> taken(T, false);
    auto chainable = [&](TransitionIndex t) { return simple_transition(net, t) && !net.is_self_loop(t); };
    auto interior = [&](PlaceIndex p) { return net.producers(p).size() == 1 && net.consumers(p).size() == 1; };

    for (std::uint32_t i = 0; i < T; ++i) {
        TransitionIndex start{i};
        if (taken[i] || !chainable(start)) continue;
        std::deque<TransitionIndex> chain{start};
        std::set<TransitionIndex> members{start};
        // backward
        while (true) {
            PlaceIndex p = net.inputs(chain.front())[0];
            if (!interior(p)) break;
            TransitionIndex u = net.producers(p)[0];
            if (!chainable(u) || members.count(u)) break;
            chain.push_front(u);
            members.insert(u);
        }
        // forward
        while (true) {
            PlaceIndex p = net.outputs(chain.back())[0];
            if (!interior(p)) break;
            TransitionIndex v = net.consumers(p)[0];
            if (!chainable(v) || members.count(v)) break;
            chain.push_back(v);
            members.insert(v);
        }
        for (auto t : chain) taken[t.value] = true;
        if (chain.size() < 2) continue;
        Candidate c{ComponentKind::Sequence, FoldShape::Region, net.inputs(chain.front())[0],
                    net.outputs(chain.back())[0], {}, {}};
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            c.places.push_back(net.outputs(chain[k])[0]);
        }
        c.transitions.assign(chain.begin(), chain.end());
        std::sort(c.places.begin(), c.places.end());
        std::sort(c.transitions.begin(), c.transitions.end());
        out.push_back(std::move(c));
    }
    return out;
}

// Two or more transitions with the same single input and single output place.
std::vector<Candidate> find_choices(const PetriNet& net) {
    std::map<std::pair<PlaceIndex, PlaceIndex>, std::vector<TransitionIndex>> groups;
    for (std::uint32_t i = 0; i < net.transition_count(); ++i) {
        TransitionIndex t{i};
        if (!simple_transition(net, t) || net.is_self_loop(t)) continue;
        groups[{net.inputs(t)[0], net.outputs(t)[0]}].push_back(t);
    }
    std::vector<Candidate> out;
    for (auto& [key, ts] : groups) {
        if (ts.size() < 2) continue;
        out.push_back(Candidate{ComponentKind::Choice, FoldShape::Region, key.first, key.second, {}, ts});
    }
    return out;
}

// Self-loops on a single place, and do-while pairs: forward transitions e->x
// (the only consumers of e and only producers of x) with back transitions x->e.
std::vector<Candidate> find_whiles(const PetriNet& net) {
    std::vector<Candidate> out;
    for (std::uint32_t i = 0; i < net.place_count(); ++i) {
        PlaceIndex p{i};
        std::vector<TransitionIndex> loops;
        for (auto t : net.consumers(p)) {
            if (simple_transition(net, t) && net.outputs(t)[0] == p) loops.push_back(t);
        }
        if (!loops.empty()) {
            out.push_back(Candidate{ComponentKind::While, FoldShape::LoopSplit, p, p, {}, loops});
        }
    }
    for (std::uint32_t i = 0; i < net.place_count(); ++i) {
        PlaceIndex e{i};
        auto consumers = net.consumers(e);
        if (consumers.empty()) continue;
        const auto first = consumers[0];
        if (!simple_transition(net, first)) continue;
        const PlaceIndex x = net.outputs(first)[0];
        if (x == e) continue;
        bool forward_ok = std::all_of(consumers.begin(), consumers.end(), [&](TransitionIndex t) {
            return simple_transition(net, t) && net.outputs(t)[0] == x;
        });
        if (!forward_ok) continue;
        auto producers = net.producers(x);
        if (!std::equal(producers.begin(), producers.end(), consumers.begin(), consumers.end())) continue;
        std::vector<TransitionIndex> back;
        for (auto t : net.consumers(x)) {
            if (simple_transition(net, t) && net.outputs(t)[0] == e) back.push_back(t);
        }
        if (back.empty()) continue;
        std::vector<TransitionIndex> all(consumers.begin(), consumers.end());
        all.insert(all.end(), back.begin(), back.end());
        std::sort(all.begin(), all.end());
        out.push_back(Candidate{ComponentKind::While, FoldShape::Region, e, x, {}, all});
    }
    return out;
}

struct Adjacency {
    // Node numbering: places [0,P), transitions [P,P+T).
    std::size_t P = 0;
    std::vector<std::vector<std::size_t>> fwd;
    std::vector<std::vector<std::size_t>> bwd;

    explicit Adjacency(const PetriNet& net) : P(net.place_count()) {
        const std::size_t n = net.place_count() + net.transition_count();
        fwd.resize(n);
        bwd.resize(n);
        for (const auto& a : net.arcs()) {
            auto s = id(a.source);
            auto d = id(a.target);
            fwd[s].push_back(d);
            bwd[d].push_back(s);
        }
    }
    std::size_t id(const NodeRef& r) const {
        if (auto p = std::get_if<PlaceIndex>(&r)) return p->value;
        return P + std::get<TransitionIndex>(r).value;
    }
    std::vector<bool> closure(std::size_t from, std::size_t barrier, bool forward) const {
        const auto& g = forward ? fwd : bwd;
        std::vector<bool> seen(g.size(), false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : g[u]) {
                if (seen[v] || v == barrier) continue;
                seen[v] = true;
                stack.push_back(v);
            }
        }
        return seen;
    }
};

bool has_cycle(const PetriNet& net, const Candidate& c) {
    // DFS over component transitions via interior places.
    std::set<TransitionIndex> members(c.transitions.begin(), c.transitions.end());
    std::set<PlaceIndex> inner(c.places.begin(), c.places.end());
    std::map<TransitionIndex, int> state;  // 0 new, 1 active, 2 done
    std::function<bool(TransitionIndex)> visit = [&](TransitionIndex t) {
        state[t] = 1;
        for (auto p : net.outputs(t)) {
            if (!inner.count(p)) continue;
            for (auto u : net.consumers(p)) {
                if (!members.count(u)) continue;
                if (state[u] == 1) return true;
                if (state[u] == 0 && visit(u)) return true;
            }
        }
        state[t] = 2;
        return false;
    };
    for (auto t : c.transitions) {
        if (state[t] == 0 && visit(t)) return true;
    }
    return false;
}

struct DegreeCounts {
    std::size_t and_splits = 0, and_joins = 0, xor_splits = 0, xor_joins = 0;
    std::size_t splits() const { return and_splits + xor_splits; }
    std::size_t joins() const { return and_joins + xor_joins; }
};

// Degrees restricted to arcs inside the component (entry/exit included).
DegreeCounts degree_counts(const PetriNet& net, const Candidate& c) {
    std::set<TransitionIndex> members(c.transitions.begin(), c.transitions.end());
    std::set<PlaceIndex> nodes(c.places.begin(), c.places.end());
    nodes.insert(c.entry);
    nodes.insert(c.exit);
    std::map<PlaceIndex, std::pair<std::size_t, std::size_t>> place_deg;  // in, out
    DegreeCounts d;
    for (auto t : members) {
        std::size_t in = 0, out = 0;
        for (auto p : net.inputs(t)) {
            if (nodes.count(p)) {
                ++in;
                ++place_deg[p].second;
            }
        }
        for (auto p : net.outputs(t)) {
            if (nodes.count(p)) {
                ++out;
                ++place_deg[p].first;
            }
        }
        if (out > 1) ++d.and_splits;
        if (in > 1) ++d.and_joins;
    }
    for (auto& [p, deg] : place_deg) {
        if (deg.second > 1) ++d.xor_splits;
        if (deg.first > 1) ++d.xor_joins;
    }
    return d;
}

// Runs the component on its own, one token on entry, and checks that it always
// delivers exactly one token to exit with nothing left behind.
bool sound_in_isolation(const PetriNet& net, const Candidate& c) {
    std::vector<NodeInfo> places{net.place(c.entry)};
    for (auto p : c.places) places.push_back(net.place(p));
    places.push_back(net.place(c.exit));
    std::vector<NodeInfo> transitions;
    std::vector<ArcSpec> arcs;
    std::set<PlaceIndex> nodes(c.places.begin(), c.places.end());
    nodes.insert(c.entry);
    nodes.insert(c.exit);
    for (auto t : c.transitions) {
        transitions.push_back(net.transition(t));
        for (auto p : net.inputs(t)) arcs.push_back({net.place(p).id, net.transition(t).id, 1});
        for (auto p : net.outputs(t)) arcs.push_back({net.transition(t).id, net.place(p).id, 1});
    }
    try {
        auto sub = validate_workflow(build_net(places, transitions, arcs, {net.place(c.entry).id}));
        return soundness_check(sub, 100'000).sound;
    } catch (const NetError&) {
        return false;
    } catch (const CapExceeded&) {
        return false;
    }
}

std::vector<Candidate> find_regions(const PetriNet& net) {
    const Adjacency adj(net);
    const std::size_t P = net.place_count();
    std::vector<Candidate> out;
    for (std::uint32_t ei = 0; ei < P; ++ei) {
        if (net.consumers(PlaceIndex{ei}).empty()) continue;
        auto down = adj.closure(ei, std::size_t(-1), true);
        for (std::uint32_t xi = 0; xi < P; ++xi) {
            if (xi == ei || !down[xi] || net.producers(PlaceIndex{xi}).empty()) continue;
            auto fwd = adj.closure(ei, xi, true);
            auto bwd = adj.closure(xi, ei, false);
            Candidate c{ComponentKind::Unstructured, FoldShape::Region, PlaceIndex{ei}, PlaceIndex{xi}, {}, {}};
            for (std::uint32_t p = 0; p < P; ++p) {
                if (p != ei && p != xi && fwd[p] && bwd[p]) c.places.push_back(PlaceIndex{p});
            }
            for (std::uint32_t t = 0; t < net.transition_count(); ++t) {
                if (fwd[P + t] && bwd[P + t]) c.transitions.push_back(TransitionIndex{t});
            }
            if (c.transitions.size() < 2) continue;
            std::set<TransitionIndex> members(c.transitions.begin(), c.transitions.end());
            std::set<PlaceIndex> inner(c.places.begin(), c.places.end());
            bool closed = true;
            for (auto p : c.places) {
                for (auto t : net.producers(p)) closed = closed && members.count(t);
                for (auto t : net.consumers(p)) closed = closed && members.count(t);
            }
            for (auto t : c.transitions) {
                for (auto p : net.inputs(t)) closed = closed && (inner.count(p) || p == c.entry);
                for (auto p : net.outputs(t)) closed = closed && (inner.count(p) || p == c.exit);
            }
            if (!closed || !sound_in_isolation(net, c)) continue;
            out.push_back(std::move(c));
        }
    }
    return out;
}

ComponentKind classify_region(const PetriNet& net, const Candidate& c) {
    std::set<TransitionIndex> members(c.transitions.begin(), c.transitions.end());
    auto count_in = [&](std::span<const TransitionIndex> ts) {
        return std::count_if(ts.begin(), ts.end(), [&](TransitionIndex t) { return members.count(t) > 0; });
    };
    const bool acyclic = !has_cycle(net, c);
    bool marked_graph = acyclic && count_in(net.consumers(c.entry)) == 1 && count_in(net.producers(c.exit)) == 1;
    for (auto p : c.places) {
        marked_graph = marked_graph && net.producers(p).size() == 1 && net.consumers(p).size() == 1;
    }
    if (marked_graph) return ComponentKind::MarkedGraph;
    bool state_machine = std::all_of(c.transitions.begin(), c.transitions.end(),
                                     [&](TransitionIndex t) { return simple_transition(net, t); });
    if (state_machine) return ComponentKind::StateMachine;
    const auto d = degree_counts(net, c);
    if (acyclic && d.and_splits == d.and_joins && d.xor_splits == d.xor_joins) {
        return ComponentKind::WellStructured;
    }
    return ComponentKind::Unstructured;
}

ComponentMatch describe(const FoldState& state, const Candidate& c, std::size_t fingerprint) {
    const auto& net = state.wf.net;
    ComponentMatch m;
    m.kind = c.kind;
    m.shape = c.shape;
    m.entry = net.place(c.entry).id;
    m.exit = net.place(c.exit).id;
    for (auto p : c.places) m.place_set.push_back(net.place(p).id);
    int tier = 0;
    for (auto t : c.transitions) {
        m.transition_set.push_back(net.transition(t).id);
        m.inner_weight += state.weight(t);
        tier = std::max(tier, state.tiers.at(t.value));
    }
    m.tier = tier + 1;
    const auto d = degree_counts(net, c);
    m.split_count = d.splits();
    m.join_count = d.joins();
    m.diff = kind_uses_diff(c.kind) ? diff_value(m.split_count, m.join_count) : Rational(1);
    m.weight = Rational(kind_factor(c.kind)) * m.diff * m.inner_weight;
    m.net_fingerprint = fingerprint;
    return m;
}

}  // namespace

std::vector<ComponentMatch> match_components(const FoldState& state) {
    const auto& net = state.wf.net;
    std::vector<Candidate> all = find_sequences(net);
    for (auto& c : find_choices(net)) all.push_back(std::move(c));
    for (auto& c : find_whiles(net)) all.push_back(std::move(c));

    std::set<std::vector<TransitionIndex>> known;
    for (const auto& c : all) known.insert(c.transitions);

    auto regions = find_regions(net);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        auto& r = regions[i];
        if (known.count(r.transitions)) continue;
        // keep only minimal regions
        bool minimal = true;
        for (std::size_t j = 0; j < regions.size() && minimal; ++j) {
            const auto& o = regions[j];
            if (i == j || o.transitions.size() >= r.transitions.size()) continue;
            minimal = !std::includes(r.transitions.begin(), r.transitions.end(), o.transitions.begin(),
                                     o.transitions.end());
        }
        if (!minimal) continue;
        r.kind = classify_region(net, r);
        known.insert(r.transitions);
        all.push_back(std::move(r));
    }

    const std::size_t fp = net_fingerprint(net);
    std::vector<std::pair<Candidate, ComponentMatch>> described;
    for (auto& c : all) {
        auto m = describe(state, c, fp);
        described.emplace_back(std::move(c), std::move(m));
    }
    std::stable_sort(described.begin(), described.end(), [](const auto& a, const auto& b) {
        const auto& ca = a.first;
        const auto& cb = b.first;
        if (ca.kind != cb.kind) return ca.kind < cb.kind;
        if (a.second.node_count() != b.second.node_count()) return a.second.node_count() < b.second.node_count();
        return ca.transitions < cb.transitions;
    });
    std::vector<ComponentMatch> out;
    for (auto& [c, m] : described) out.push_back(std::move(m));
    return out;
}

std::vector<ComponentMatch> match_components(const WorkflowNet& wf) {
    return match_components(FoldState::from(wf));
}

// ---------------------------------------------------------------------------
// Folding

namespace {

std::string fresh_id(const PetriNet& net, const std::string& stem) {
    if (!net.find(stem)) return stem;
    for (int k = 1;; ++k) {
        std::string id = stem + "_" + std::to_string(k);
        if (!net.find(id)) return id;
    }
}

}  // namespace

FoldResult fold_component(const FoldState& state, const ComponentMatch& match) {
    const auto& net = state.wf.net;
    if (match.net_fingerprint != net_fingerprint(net)) {
        throw MetricsError(MetricsErrorCode::StaleMatch, "net changed since the component was matched");
    }
    auto entry = net.find_place(match.entry);
    auto exit = net.find_place(match.exit);
    if (!entry || !exit) {
        throw MetricsError(MetricsErrorCode::StaleMatch, "component entry/exit no longer present");
    }
    std::set<std::string> removed_t(match.transition_set.begin(), match.transition_set.end());
    std::set<std::string> removed_p(match.place_set.begin(), match.place_set.end());

    const std::string macro_id = fresh_id(net, "macro" + std::to_string(state.macros_created + 1));
    std::string exit_id = match.exit;
    std::string split_place;  // new place created by a loop split
    if (match.shape == FoldShape::LoopSplit) {
        split_place = fresh_id(net, match.entry + "_after");
        exit_id = split_place;
    }

    std::vector<NodeInfo> places;
    for (const auto& p : net.places()) {
        if (!removed_p.count(p.id)) places.push_back(p);
    }
    if (!split_place.empty()) places.push_back(NodeInfo{split_place, std::nullopt});

    std::vector<NodeInfo> transitions;
    FoldState next;
    for (std::uint32_t i = 0; i < net.transition_count(); ++i) {
        const auto& t = net.transitions()[i];
        if (removed_t.count(t.id)) continue;
        transitions.push_back(t);
        next.weights.push_back(state.weights[i]);
        next.tiers.push_back(state.tiers[i]);
    }
    transitions.push_back(NodeInfo{macro_id, std::string(to_string(match.kind)) + " macro"});
    next.weights.push_back(match.weight);
    next.tiers.push_back(match.tier);

    std::vector<ArcSpec> arcs;
    for (const auto& a : net.arcs()) {
        std::string s = net.id_of(a.source);
        std::string d = net.id_of(a.target);
        if (removed_t.count(s) || removed_t.count(d) || removed_p.count(s) || removed_p.count(d)) continue;
        if (!split_place.empty() && s == match.entry) {
            s = split_place;  // remaining consumers of the looped place move past the macro
        }
        arcs.push_back({s, d, 1});
    }
    arcs.push_back({match.entry, macro_id, 1});
    arcs.push_back({macro_id, exit_id, 1});

    std::vector<std::string> marked;
    for (auto p : net.initial_marking().marked_places()) marked.push_back(net.place(p).id);

    next.wf = validate_workflow(build_net(std::move(places), std::move(transitions), arcs, marked));
    next.macros_created = state.macros_created + 1;

    FoldResult result{std::move(next), TransitionIndex{}, match};
    result.macro = *result.state.wf.net.find_transition(macro_id);
    result.match.folded_into = macro_id;
    return result;
}

StructurednessResult structuredness(const WorkflowNet& wf, std::size_t cap) {
    if (!soundness_check(wf, cap).sound) {
        throw MetricsError(MetricsErrorCode::NotSound, "structuredness is defined for sound workflow nets only");
    }
    StructurednessResult result;
    FoldState state = FoldState::from(wf);
    // Each fold strictly lowers 2|T| + |self-loops|, so this bound is never hit.
    const std::size_t max_steps = 4 * wf.net.transition_count() + 4;
    for (std::size_t step = 0; !state.terminal(); ++step) {
        auto candidates = match_components(state);
        if (candidates.empty() || step > max_steps) {
            throw MetricsError(MetricsErrorCode::NoProgress,
                               "no foldable component in a net with " +
                                   std::to_string(state.wf.net.transition_count()) + " transitions");
        }
        auto folded = fold_component(state, candidates.front());
        result.trace.push_back(folded.match);
        state = std::move(folded.state);
    }
    result.value = state.weights.front();
    return result;
}

FoldState replay_trace(const WorkflowNet& wf, const std::vector<ComponentMatch>& trace) {
    FoldState state = FoldState::from(wf);
    for (const auto& recorded : trace) {
        ComponentMatch m = recorded;
        m.net_fingerprint = net_fingerprint(state.wf.net);
        state = fold_component(state, m).state;
    }
    return state;
}

// ---------------------------------------------------------------------------

MetricsReport full_report(const WorkflowNet& wf, std::size_t cap) {
    MetricsReport r;
    r.census = census(wf.net);
    r.density = density(wf.net);
    const auto rg = reachability_graph(wf.net, cap);
    const auto scc = scc_decompose(rg);
    r.extended_cyclomatic = extended_cyclomatic(rg, scc);
    r.state_space = {rg.vertex_count(), rg.edge_count(), scc.component_count, scc.largest()};
    auto sm = structuredness(wf, cap);
    r.structuredness = sm.value;
    for (const auto& m : sm.trace) {
        ++r.component_census[static_cast<std::size_t>(m.kind)];
    }
    r.fold_trace = std::move(sm.trace);
    return r;
}

}  // namespace petri
