#include "petri/fixtures.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include "petri/metrics.hpp"
#include "petri/state_space.hpp"

namespace petri {

namespace {

struct Step {
    const char* label;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

// Transitions get ids t1..tN in the given order and carry the step label.
WorkflowNet assemble(const std::vector<std::string>& place_ids, const std::vector<Step>& steps) {
    std::vector<NodeInfo> places;
    for (const auto& p : place_ids) places.push_back(NodeInfo{p, std::nullopt});
    std::vector<NodeInfo> transitions;
    std::vector<ArcSpec> arcs;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string id = "t" + std::to_string(k + 1);
        transitions.push_back(NodeInfo{id, std::string(steps[k].label)});
        for (const auto& p : steps[k].inputs) arcs.push_back({p, id, 1});
        for (const auto& p : steps[k].outputs) arcs.push_back({id, p, 1});
    }
    return validate_workflow(build_net(std::move(places), std::move(transitions), arcs, {place_ids.front()}));
}

std::vector<std::string> labels_of(const PetriNet& net) {
    std::vector<std::string> out;
    for (const auto& t : net.transitions()) out.push_back(t.display());
    return out;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i];
    }
    return out + "]";
}

template <typename T>
void expect(ConformanceReport& r, const std::string& field, const T& expected, const T& computed) {
    std::ostringstream e, c;
    e << expected;
    c << computed;
    r.items.push_back({field, e.str(), c.str(), expected == computed});
}

void expect_list(ConformanceReport& r, const std::string& field, const std::vector<std::string>& expected,
                 const std::vector<std::string>& computed) {
    r.items.push_back({field, join(expected), join(computed), expected == computed});
}

}  // namespace

bool ConformanceReport::all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.pass; });
}

std::vector<ConformanceItem> ConformanceReport::failures() const {
    std::vector<ConformanceItem> out;
    std::copy_if(items.begin(), items.end(), std::back_inserter(out), [](const auto& i) { return !i.pass; });
    return out;
}

std::string ConformanceReport::to_text() const {
    std::string out;
    for (const auto& i : items) {
        out += std::string(i.pass ? "PASS " : "FAIL ") + fixture + " " + i.field + " expected=" + i.expected +
               " computed=" + i.computed + "\n";
    }
    return out;
}

std::pair<std::size_t, std::size_t> arcs_around(const PetriNet& net, TransitionIndex fire) {
    // Backward closure over nodes, starting at the fire transition.
    std::set<NodeRef> cone{fire};
    std::deque<NodeRef> queue{fire};
    while (!queue.empty()) {
        NodeRef n = queue.front();
        queue.pop_front();
        if (auto t = std::get_if<TransitionIndex>(&n)) {
            for (auto p : net.inputs(*t)) {
                if (cone.insert(p).second) queue.push_back(p);
            }
        } else {
            for (auto t : net.producers(std::get<PlaceIndex>(n))) {
                if (cone.insert(t).second) queue.push_back(t);
            }
        }
    }
    std::size_t before = 0;
    for (const auto& a : net.arcs()) {
        if (cone.count(a.target)) ++before;
    }
    return {before, net.arc_count() - before};
}

std::size_t states_before(const PetriNet& net, TransitionIndex fire) {
    std::unordered_set<Marking, MarkingHash> seen{net.initial_marking()};
    std::deque<Marking> queue{net.initial_marking()};
    while (!queue.empty()) {
        Marking m = std::move(queue.front());
        queue.pop_front();
        for (auto t : enabled(net, m)) {
            if (t == fire) continue;
            Marking next = petri::fire(net, m, t);
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
    return seen.size();
}

ConformanceReport check_manifest(const WorkflowNet& wf, const FixtureManifest& m) {
    const auto& net = wf.net;
    ConformanceReport r;
    r.fixture = m.name;
    expect(r, "places", m.place_count, net.place_count());
    expect(r, "transitions", m.transition_count, net.transition_count());
    expect(r, "arcs", m.arc_count, net.arc_count());
    const std::string density_text =
        (net.place_count() && net.transition_count()) ? format_fixed3(density(net)) : std::string("undefined");
    expect(r, "density", m.expected_density, density_text);
    if (!m.transition_labels.empty()) expect_list(r, "transition_labels", m.transition_labels, labels_of(net));

    std::vector<std::string> loops;
    for (std::uint32_t i = 0; i < net.transition_count(); ++i) {
        if (net.is_self_loop(TransitionIndex{i})) loops.push_back(net.transition(TransitionIndex{i}).display());
    }
    expect_list(r, "self_loops", m.self_loop_labels, loops);

    std::optional<TransitionIndex> fire;
    if (m.fire_transition_label) {
        fire = net.find_transition_by_label(*m.fire_transition_label);
        r.items.push_back({"fire_transition", *m.fire_transition_label, fire ? "found" : "missing", fire.has_value()});
    }
    if (fire) {
        auto [before, after] = arcs_around(net, *fire);
        if (m.arcs_before_fire) expect(r, "arcs_before_fire", *m.arcs_before_fire, before);
        if (m.arcs_after_fire) expect(r, "arcs_after_fire", *m.arcs_after_fire, after);
        if (m.states_before_fire) expect(r, "states_before_fire", *m.states_before_fire, states_before(net, *fire));
    }

    const bool needs_graph =
        m.expected_ecym || m.expected_state_count || m.largest_scc_size || m.max_concurrent_enabled;
    if (needs_graph) {
        const auto rg = reachability_graph(net);
        const auto scc = scc_decompose(rg);
        if (m.expected_state_count) expect(r, "states", *m.expected_state_count, rg.vertex_count());
        if (m.expected_ecym) expect(r, "ecym", *m.expected_ecym, extended_cyclomatic(rg, scc));
        if (m.largest_scc_size) expect(r, "largest_scc", *m.largest_scc_size, scc.largest());
        if (m.max_concurrent_enabled) {
            expect(r, "max_concurrent_enabled", *m.max_concurrent_enabled, max_concurrent_enabled(net, rg));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

WorkflowNet figure1_net() {
    std::vector<NodeInfo> places;
    for (int i = 1; i <= 6; ++i) places.push_back(NodeInfo{"p" + std::to_string(i), std::nullopt});
    std::vector<NodeInfo> transitions;
    for (int i = 1; i <= 4; ++i) transitions.push_back(NodeInfo{"t" + std::to_string(i), std::nullopt});
    const std::vector<ArcSpec> arcs = {
        {"p1", "t1", 1}, {"t1", "p2", 1}, {"t1", "p3", 1}, {"p2", "t2", 1}, {"p3", "t3", 1},
        {"t2", "p4", 1}, {"t3", "p5", 1}, {"p4", "t4", 1}, {"p5", "t4", 1}, {"t4", "p6", 1},
    };
    return validate_workflow(build_net(std::move(places), std::move(transitions), arcs, {"p1"}));
}

// Preparation runs two branches in parallel (bark, rock) that meet at "Light bark".
// The fire phase is a single-token cycle: the lit bark is grabbed and placed,
// may move (back to grabbing) or go out (reignite), and condensing holds the
// bark in a self-loop until it stops.
WorkflowNet condensation_net() {
    return assemble({"i", "a", "b", "a1", "b1", "q1", "q2", "q3", "q4", "q5", "q6", "q7", "o"},
                    {
                        {"Start", {"i"}, {"a", "b"}},
                        {"Tear bark", {"a"}, {"a1"}},
                        {"Place rock", {"b"}, {"b1"}},
                        {"Light bark", {"a1", "b1"}, {"q1"}},
                        {"Grab", {"q1"}, {"q2"}},
                        {"Reignite", {"q4"}, {"q1"}},
                        {"Place lit bark", {"q2"}, {"q3"}},
                        {"Bark moves", {"q3"}, {"q1"}},
                        {"Bark extinguishes", {"q3"}, {"q4"}},
                        {"Start condense", {"q3"}, {"q5"}},
                        {"Hold bark", {"q5"}, {"q5"}},
                        {"Stop condense", {"q5"}, {"q6"}},
                        {"Scrape", {"q6"}, {"q7"}},
                        {"Store", {"q7"}, {"o"}},
                    });
}

// Three preparation branches: soil (clean, dig), cup, roll. The cup is placed
// once the hole is dug, then the roll on top; embers close the preparation.
// After fire the pit may be reheated after digging, giving one 2-state cycle.
WorkflowNet pit_roll_net() {
    return assemble({"i", "a0", "a1", "a2", "b0", "b1", "c0", "c1", "d", "r", "e1", "e2", "e3", "e4", "o"},
                    {
                        {"Start", {"i"}, {"a0", "b0", "c0"}},
                        {"Clean soil", {"a0"}, {"a1"}},
                        {"Make cup", {"b0"}, {"b1"}},
                        {"Make roll", {"c0"}, {"c1"}},
                        {"Dig", {"a1"}, {"a2"}},
                        {"Place cup", {"a2", "b1"}, {"d"}},
                        {"Place roll", {"d", "c1"}, {"r"}},
                        {"Place embers", {"r"}, {"e1"}},
                        {"Fan embers", {"e1"}, {"e1"}},
                        {"Cool pit", {"e1"}, {"e2"}},
                        {"Dig roll & cup", {"e2"}, {"e3"}},
                        {"Reheat roll", {"e3"}, {"e2"}},
                        {"Collect tar", {"e3"}, {"e4"}},
                        {"Store", {"e4"}, {"o"}},
                    });
}

// Roll, pit and cup are prepared in parallel; net and pebbles go in after the
// cup, then the roll joins. During fire the dome is fixed and firewood added
// in self-loops; once the fire stops the dome is opened and closed while it
// fumes (the 4-state cycle), then everything is taken apart in sequence.
WorkflowNet raised_structure_net() {
    return assemble({"i", "r0", "k0", "c0", "r1", "k1", "c1", "u", "v", "w", "x", "y", "z",
                     "B", "H", "K", "O", "F", "S", "S2", "S3", "S4", "S5", "S6", "o"},
                    {
                        {"Start", {"i"}, {"r0", "k0", "c0"}},
                        {"Make roll", {"r0"}, {"r1"}},
                        {"Dig pit", {"k0"}, {"k1"}},
                        {"Make cup", {"c0"}, {"c1"}},
                        {"Place cup", {"k1", "c1"}, {"u"}},
                        {"Place net", {"u"}, {"v"}},
                        {"Place pebbles", {"v"}, {"w"}},
                        {"Place roll", {"w", "r1"}, {"x"}},
                        {"Make dome", {"x"}, {"y"}},
                        {"Fix dome", {"y"}, {"y"}},
                        {"Place firewood", {"y"}, {"z"}},
                        {"Light dome", {"z"}, {"B"}},
                        {"Add firewood", {"B"}, {"B"}},
                        {"Fix dome2", {"B"}, {"B"}},
                        {"Fire stops", {"B"}, {"H"}},
                        {"Cool dome", {"H"}, {"K"}},
                        {"Open dome", {"K"}, {"O"}},
                        {"Dome fumes", {"O"}, {"F"}},
                        {"Close dome", {"F"}, {"H"}},
                        {"Fuming stops", {"F"}, {"S"}},
                        {"Remove dome", {"S"}, {"S2"}},
                        {"Remove roll", {"S2"}, {"S3"}},
                        {"Remove net & pebbles", {"S3"}, {"S4"}},
                        {"Remove cup", {"S4"}, {"S5"}},
                        {"Collect tar", {"S5"}, {"S6"}},
                        {"Store", {"S6"}, {"o"}},
                    });
}

// ---------------------------------------------------------------------------

FixtureManifest figure1_manifest() {
    FixtureManifest m;
    m.name = "figure1";
    m.place_count = 6;
    m.transition_count = 4;
    m.arc_count = 10;
    m.expected_density = "0.208";
    m.expected_ecym = 6;
    m.expected_state_count = 6;
    m.largest_scc_size = 1;
    m.max_concurrent_enabled = 2;
    m.transition_labels = {"t1", "t2", "t3", "t4"};
    return m;
}

FixtureManifest condensation_manifest() {
    FixtureManifest m;
    m.name = "condensation";
    m.place_count = 13;
    m.transition_count = 14;
    m.arc_count = 30;
    m.fire_transition_label = "Light bark";
    m.arcs_before_fire = 9;
    m.arcs_after_fire = 21;
    m.expected_density = "0.082";
    m.expected_ecym = 13;
    m.expected_state_count = 13;
    m.states_before_fire = 5;
    m.largest_scc_size = 4;
    m.max_concurrent_enabled = 2;
    m.self_loop_labels = {"Hold bark"};
    m.transition_labels = {"Start",         "Tear bark",         "Place rock",     "Light bark", "Grab",
                           "Reignite",      "Place lit bark",    "Bark moves",     "Bark extinguishes",
                           "Start condense", "Hold bark",        "Stop condense",  "Scrape",     "Store"};
    return m;
}

FixtureManifest pit_roll_manifest() {
    FixtureManifest m;
    m.name = "pit_roll";
    m.place_count = 15;
    m.transition_count = 14;
    m.arc_count = 32;
    m.fire_transition_label = "Place embers";
    m.arcs_before_fire = 19;
    m.arcs_after_fire = 13;
    m.expected_density = "0.076";
    m.expected_ecym = 31;
    m.expected_state_count = 21;
    m.states_before_fire = 16;
    m.largest_scc_size = 2;
    m.max_concurrent_enabled = 3;
    m.self_loop_labels = {"Fan embers"};
    m.transition_labels = {"Start",      "Clean soil",   "Make cup",       "Make roll",   "Dig",
                           "Place cup",  "Place roll",   "Place embers",   "Fan embers",  "Cool pit",
                           "Dig roll & cup", "Reheat roll", "Collect tar", "Store"};
    return m;
}

FixtureManifest raised_structure_manifest() {
    FixtureManifest m;
    m.name = "raised_structure";
    m.place_count = 25;
    m.transition_count = 26;
    m.arc_count = 56;
    m.fire_transition_label = "Light dome";
    m.arcs_before_fire = 27;
    m.arcs_after_fire = 29;
    m.expected_density = "0.043";
    m.expected_ecym = 38;
    m.expected_state_count = 34;
    m.states_before_fire = 18;
    m.largest_scc_size = 4;
    m.max_concurrent_enabled = 3;
    m.self_loop_labels = {"Fix dome", "Add firewood", "Fix dome2"};
    m.transition_labels = {"Start",        "Make roll",     "Dig pit",       "Make cup",
                           "Place cup",    "Place net",     "Place pebbles", "Place roll",
                           "Make dome",    "Fix dome",      "Place firewood", "Light dome",
                           "Add firewood", "Fix dome2",     "Fire stops",    "Cool dome",
                           "Open dome",    "Dome fumes",    "Close dome",    "Fuming stops",
                           "Remove dome",  "Remove roll",   "Remove net & pebbles",
                           "Remove cup",   "Collect tar",   "Store"};
    return m;
}

std::vector<Fixture> all_fixtures() {
    return {
        {"figure1", figure1_net(), figure1_manifest()},
        {"condensation", condensation_net(), condensation_manifest()},
        {"pit_roll", pit_roll_net(), pit_roll_manifest()},
        {"raised_structure", raised_structure_net(), raised_structure_manifest()},
    };
}

}  // namespace petri
