#include "petri/state_space.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace petri {

CapExceeded::CapExceeded(std::size_t cap)
    : std::runtime_error("state space exceeds cap of " + std::to_string(cap) + " markings"), cap_(cap) {}

std::vector<std::vector<std::size_t>> ReachabilityGraph::successors() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (const auto& e : edges) {
        adj[e.from].push_back(e.to);
    }
    return adj;
}

ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t cap) {
    if (cap == 0) {
        throw std::invalid_argument("state cap must be at least 1");
    }
    ReachabilityGraph rg;
    std::unordered_map<Marking, std::size_t, MarkingHash> index;
    rg.vertices.push_back(net.initial_marking());
    index.emplace(net.initial_marking(), 0);

    // Vertex indices double as the BFS queue.
    for (std::size_t u = 0; u < rg.vertices.size(); ++u) {
        const auto fireable = enabled(net, rg.vertices[u]);
        if (fireable.empty()) {
            rg.finals.push_back(u);
        }
        for (auto t : fireable) {
            Marking next = fire(net, rg.vertices[u], t);
            auto [it, inserted] = index.try_emplace(std::move(next), rg.vertices.size());
            if (inserted) {
                if (rg.vertices.size() >= cap) {
                    throw CapExceeded(cap);
                }
                rg.vertices.push_back(it->first);
            }
            rg.edges.push_back(RgEdge{u, t, it->second});
        }
    }
    return rg;
}

// ---------------------------------------------------------------------------

std::size_t SccDecomposition::largest() const {
    if (component_sizes.empty()) return 0;
    return *std::max_element(component_sizes.begin(), component_sizes.end());
}

SccDecomposition scc_decompose(const ReachabilityGraph& rg) {
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = rg.vertex_count();
    const auto adj = rg.successors();

    std::vector<std::size_t> order(n, kUnvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> raw_component(n, kUnvisited);
    std::size_t raw_count = 0;
    std::size_t counter = 0;

    struct Frame {
        std::size_t vertex;
        std::size_t next_edge;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (order[root] != kUnvisited) continue;
        call.push_back({root, 0});
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            auto& frame = call.back();
            const std::size_t v = frame.vertex;
            if (frame.next_edge < adj[v].size()) {
                const std::size_t w = adj[v][frame.next_edge++];
                if (order[w] == kUnvisited) {
                    order[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], order[w]);
                }
                continue;
            }
            if (low[v] == order[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    raw_component[w] = raw_count;
                } while (w != v);
                ++raw_count;
            }
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back().vertex;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }

    // Renumber so component ids follow their smallest vertex index.
    SccDecomposition out;
    out.component_of.assign(n, 0);
    std::vector<std::size_t> renumber(raw_count, kUnvisited);
    for (std::size_t v = 0; v < n; ++v) {
        auto& id = renumber[raw_component[v]];
        if (id == kUnvisited) {
            id = out.component_count++;
            out.component_sizes.push_back(0);
        }
        out.component_of[v] = id;
        ++out.component_sizes[id];
    }
    return out;
}

// ---------------------------------------------------------------------------

SoundnessReport soundness_check(const WorkflowNet& wf, const ReachabilityGraph& rg) {
    SoundnessReport report;
    const Marking final_marking = wf.final_marking();
    const std::size_t n = rg.vertex_count();

    std::vector<std::vector<std::size_t>> reverse(n);
    std::vector<bool> used(wf.net.transition_count(), false);
    for (const auto& e : rg.edges) {
        reverse[e.to].push_back(e.from);
        used[e.transition.value] = true;
    }

    std::vector<bool> completes(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v) {
        if (rg.vertices[v] == final_marking) {
            completes[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto u : reverse[v]) {
            if (!completes[u]) {
                completes[u] = true;
                queue.push_back(u);
            }
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        if (!completes[v]) {
            report.nonterminating_states.push_back(v);
        }
        const auto& m = rg.vertices[v];
        if (m.marked(wf.sink) && m.token_count() > 1) {
            report.improper_completions.push_back(v);
        }
    }
    for (std::uint32_t t = 0; t < used.size(); ++t) {
        if (!used[t]) {
            report.dead_transitions.push_back(TransitionIndex{t});
        }
    }
    report.sound =
        report.dead_transitions.empty() && report.nonterminating_states.empty() && report.improper_completions.empty();
    return report;
}

SoundnessReport soundness_check(const WorkflowNet& wf, std::size_t cap) {
    return soundness_check(wf, reachability_graph(wf.net, cap));
}

// ---------------------------------------------------------------------------

std::vector<Marking> brute_force_reachable(const PetriNet& net) {
    const std::size_t P = net.place_count();
    if (P > kBruteForcePlaceLimit) {
        throw NetError(ErrorCode::TooManyPlaces,
                       std::to_string(P) + " places exceed the lattice limit of " +
                           std::to_string(kBruteForcePlaceLimit));
    }
    using Mask = std::uint32_t;
    struct Rule {
        Mask pre = 0;
        Mask post = 0;
    };
    std::vector<Rule> rules(net.transition_count());
    for (const auto& arc : net.arcs()) {
        if (auto p = std::get_if<PlaceIndex>(&arc.source)) {
            rules[std::get<TransitionIndex>(arc.target).value].pre |= Mask{1} << p->value;
        } else {
            rules[std::get<TransitionIndex>(arc.source).value].post |= Mask{1} << std::get<PlaceIndex>(arc.target).value;
        }
    }
    Mask initial = 0;
    for (std::uint32_t i = 0; i < P; ++i) {
        if (net.initial_marking().marked(PlaceIndex{i})) initial |= Mask{1} << i;
    }

    std::vector<bool> reached(std::size_t{1} << P, false);
    reached[initial] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t m = 0; m < reached.size(); ++m) {
            if (!reached[m]) continue;
            const Mask marking = static_cast<Mask>(m);
            for (const auto& r : rules) {
                const bool inputs_marked = (marking & r.pre) == r.pre;
                const bool outputs_free = (marking & r.post & ~r.pre) == 0;
                if (inputs_marked && outputs_free) {
                    const Mask next = (marking & ~r.pre) | r.post;
                    if (!reached[next]) {
                        reached[next] = true;
                        changed = true;
                    }
                }
            }
        }
    }

    std::vector<Marking> out;
    for (std::size_t m = 0; m < reached.size(); ++m) {
        if (!reached[m]) continue;
        Marking marking(P);
        for (std::uint32_t i = 0; i < P; ++i) {
            if ((m >> i) & 1U) marking.set(PlaceIndex{i}, true);
        }
        out.push_back(std::move(marking));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

bool disjoint_inputs(const PetriNet& net, TransitionIndex a, TransitionIndex b) {
    auto x = net.inputs(a);
    auto y = net.inputs(b);
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
    }
    return true;
}

// Maximum clique in the "can fire together" graph; enabled sets are tiny.
std::size_t max_independent(const PetriNet& net, const std::vector<TransitionIndex>& ts, std::size_t from,
                            std::vector<TransitionIndex>& chosen) {
    std::size_t best = chosen.size();
    for (std::size_t k = from; k < ts.size(); ++k) {
        bool ok = std::all_of(chosen.begin(), chosen.end(),
                              [&](TransitionIndex c) { return disjoint_inputs(net, c, ts[k]); });
        if (!ok) continue;
        chosen.push_back(ts[k]);
        best = std::max(best, max_independent(net, ts, k + 1, chosen));
        chosen.pop_back();
    }
    return best;
}

}  // namespace

std::size_t max_concurrent_enabled(const PetriNet& net, const ReachabilityGraph& rg) {
    std::size_t best = 0;
    for (const auto& m : rg.vertices) {
        auto ts = enabled(net, m);
        if (ts.size() <= best) continue;
        std::vector<TransitionIndex> chosen;
        best = std::max(best, max_independent(net, ts, 0, chosen));
    }
    return best;
}

}  // namespace petri
