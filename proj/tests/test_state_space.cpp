#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "petri/fixtures.hpp"
#include "petri/state_space.hpp"

using namespace petri;

namespace {

std::set<std::string> bit_strings(const std::vector<Marking>& ms) {
    std::set<std::string> out;
    for (const auto& m : ms) out.insert(m.bit_string());
    return out;
}

ReachabilityGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    ReachabilityGraph g;
    for (std::size_t v = 0; v < n; ++v) g.vertices.push_back(Marking(1));
    for (std::size_t k = 0; k < m; ++k) {
        g.edges.push_back({rng() % n, TransitionIndex{0}, rng() % n});
    }
    return g;
}

}  // namespace

TEST(Reachability, Figure1) {
    const auto net = figure1_net().net;
    const auto rg = reachability_graph(net);
    EXPECT_EQ(rg.vertex_count(), 6u);
    EXPECT_EQ(rg.edge_count(), 6u);
    EXPECT_EQ(rg.initial, 0u);
    EXPECT_EQ(rg.vertices[0], net.initial_marking());
    ASSERT_EQ(rg.finals.size(), 1u);
    EXPECT_EQ(rg.vertices[rg.finals[0]].bit_string(), "000001");
    // BFS order with canonical transition order inside a level
    std::vector<std::string> order;
    for (const auto& v : rg.vertices) order.push_back(v.bit_string());
    EXPECT_EQ(order, (std::vector<std::string>{"100000", "011000", "001100", "010010", "000110", "000001"}));
}

TEST(Reachability, NoTransitions) {
    const auto net = build_net({{"p", std::nullopt}}, {}, {}, {"p"});
    const auto rg = reachability_graph(net);
    EXPECT_EQ(rg.vertex_count(), 1u);
    EXPECT_EQ(rg.edge_count(), 0u);
    EXPECT_EQ(brute_force_reachable(net).size(), 1u);
}

TEST(Reachability, PitRollStates) {
    EXPECT_EQ(reachability_graph(pit_roll_net().net).vertex_count(), 21u);
}

TEST(Reachability, CapExceeded) {
    const auto net = figure1_net().net;
    EXPECT_THROW(reachability_graph(net, 5), CapExceeded);
    EXPECT_NO_THROW(reachability_graph(net, 6));
}

TEST(Reachability, CapPrefixStable) {
    petri::testing::NetGenerator gen(5);
    for (int n = 0; n < 20; ++n) {
        const auto net = gen.perturbed(12, 2).build().net;
        const auto full = reachability_graph(net);
        for (std::size_t cap = 1; cap < full.vertex_count(); ++cap) {
            try {
                reachability_graph(net, cap);
                ADD_FAILURE() << "cap " << cap << " below " << full.vertex_count() << " did not trip";
            } catch (const CapExceeded& e) {
                EXPECT_EQ(e.cap(), cap);
            }
        }
        // a larger cap never reorders what a smaller one would have found
        const auto again = reachability_graph(net, full.vertex_count() + 10);
        EXPECT_EQ(again.vertices, full.vertices);
        EXPECT_EQ(again.edge_count(), full.edge_count());
    }
}

TEST(Reachability, EdgesReplayThroughFire) {
    petri::testing::NetGenerator gen(11);
    for (int n = 0; n < 50; ++n) {
        const auto net = gen.perturbed(12, 3).build().net;
        const auto rg = reachability_graph(net);
        for (const auto& e : rg.edges) {
            ASSERT_TRUE(is_enabled(net, rg.vertices[e.from], e.transition));
            EXPECT_EQ(fire(net, rg.vertices[e.from], e.transition), rg.vertices[e.to]);
        }
        // every vertex appears once
        EXPECT_EQ(bit_strings(rg.vertices).size(), rg.vertex_count());
    }
}

TEST(BruteForce, Figure1MatchesCaption) {
    EXPECT_EQ(bit_strings(brute_force_reachable(figure1_net().net)),
              (std::set<std::string>{"100000", "011000", "001100", "010010", "000110", "000001"}));
}

TEST(BruteForce, TooManyPlaces) {
    std::vector<NodeInfo> places;
    for (int i = 0; i < 21; ++i) places.push_back({"p" + std::to_string(i), std::nullopt});
    const auto net = build_net(places, {}, {}, {"p0"});
    try {
        brute_force_reachable(net);
        FAIL();
    } catch (const NetError& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooManyPlaces);
    }
}

TEST(BruteForce, AgreesWithBfsOnRandomNets) {
    petri::testing::NetGenerator gen(2024);
    for (int n = 0; n < 150; ++n) {
        const auto net = (n % 2 ? gen.perturbed(12, 1 + n % 4) : gen.structured(8 + n % 5)).build().net;
        ASSERT_LE(net.place_count(), 12u);
        EXPECT_EQ(bit_strings(reachability_graph(net).vertices), bit_strings(brute_force_reachable(net)))
            << "net #" << n;
    }
}

TEST(Scc, Figure1AllSingletons) {
    const auto scc = scc_decompose(reachability_graph(figure1_net().net));
    EXPECT_EQ(scc.component_count, 6u);
    EXPECT_EQ(scc.largest(), 1u);
}

TEST(Scc, SelfLoopVertex) {
    ReachabilityGraph g;
    g.vertices.push_back(Marking(1));
    g.edges.push_back({0, TransitionIndex{0}, 0});
    const auto scc = scc_decompose(g);
    EXPECT_EQ(scc.component_count, 1u);
    EXPECT_EQ(scc.component_sizes, (std::vector<std::size_t>{1}));
}

TEST(Scc, CondensationLargestComponent) {
    EXPECT_EQ(scc_decompose(reachability_graph(condensation_net().net)).largest(), 4u);
}

TEST(Scc, AgreesWithNaiveOracle) {
    std::mt19937_64 rng(77);
    for (int n = 0; n < 200; ++n) {
        const std::size_t v = 1 + rng() % 50;
        const auto g = random_graph(rng, v, rng() % (3 * v));
        const auto scc = scc_decompose(g);
        const auto expected = petri::testing::naive_scc(v, g.successors());
        const std::size_t next_id = expected.empty() ? 0 : *std::max_element(expected.begin(), expected.end()) + 1;
        EXPECT_EQ(scc.component_of, expected) << "graph #" << n;
        EXPECT_EQ(scc.component_count, next_id);
    }
}

TEST(Scc, DeepChainDoesNotRecurse) {
    ReachabilityGraph g;
    const std::size_t n = 200000;
    for (std::size_t v = 0; v < n; ++v) g.vertices.push_back(Marking(1));
    for (std::size_t v = 0; v + 1 < n; ++v) g.edges.push_back({v, TransitionIndex{0}, v + 1});
    g.edges.push_back({n - 1, TransitionIndex{0}, 0});
    const auto scc = scc_decompose(g);
    EXPECT_EQ(scc.component_count, 1u);
    EXPECT_EQ(scc.largest(), n);
}

// ---------------------------------------------------------------------------
// Soundness

namespace {

WorkflowNet net_of(std::vector<std::string> places, std::vector<std::string> transitions,
                   std::vector<std::pair<std::string, std::string>> arcs) {
    std::vector<NodeInfo> ps, ts;
    for (auto& p : places) ps.push_back({p, std::nullopt});
    for (auto& t : transitions) ts.push_back({t, std::nullopt});
    std::vector<ArcSpec> as;
    for (auto& [s, d] : arcs) as.push_back({s, d, 1});
    return validate_workflow(build_net(ps, ts, as, {places.front()}));
}

}  // namespace

TEST(Soundness, AllFixturesSound) {
    for (const auto& f : all_fixtures()) {
        const auto s = soundness_check(f.net);
        EXPECT_TRUE(s.sound) << f.name;
    }
}

TEST(Soundness, DeadTransition) {
    // XOR between two branches; t_dead would need both branch tokens at once.
    const auto wf = net_of({"i", "a", "c", "o"}, {"t1", "t2", "t3", "t4", "t_dead"},
                           {{"i", "t1"}, {"t1", "a"}, {"a", "t2"}, {"t2", "o"}, {"i", "t3"}, {"t3", "c"},
                            {"c", "t4"}, {"t4", "o"}, {"a", "t_dead"}, {"c", "t_dead"}, {"t_dead", "o"}});
    const auto s = soundness_check(wf);
    EXPECT_FALSE(s.sound);
    ASSERT_EQ(s.dead_transitions.size(), 1u);
    EXPECT_EQ(wf.net.transition(s.dead_transitions[0]).id, "t_dead");
    EXPECT_TRUE(s.nonterminating_states.empty());
    EXPECT_TRUE(s.improper_completions.empty());
}

TEST(Soundness, ImproperCompletion) {
    // AND-split whose branches both end in the sink.
    const auto wf = net_of({"i", "a", "b", "o"}, {"t1", "t2", "t3"},
                           {{"i", "t1"}, {"t1", "a"}, {"t1", "b"}, {"a", "t2"}, {"t2", "o"}, {"b", "t3"}, {"t3", "o"}});
    const auto s = soundness_check(wf);
    EXPECT_FALSE(s.sound);
    EXPECT_FALSE(s.improper_completions.empty());
}

TEST(Soundness, NonterminatingState) {
    // XOR-split into an AND-join: either branch alone deadlocks.
    const auto wf = net_of({"i", "a", "b", "o"}, {"t1", "t2", "t3"},
                           {{"i", "t1"}, {"t1", "a"}, {"i", "t2"}, {"t2", "b"}, {"a", "t3"}, {"b", "t3"}, {"t3", "o"}});
    const auto s = soundness_check(wf);
    EXPECT_FALSE(s.sound);
    EXPECT_FALSE(s.nonterminating_states.empty());
}

TEST(Soundness, StructuredNetsAreSound) {
    petri::testing::NetGenerator gen(8);
    for (int n = 0; n < 60; ++n) {
        const auto wf = gen.structured(12).build();
        EXPECT_TRUE(soundness_check(wf).sound) << "net #" << n;
    }
}

TEST(MaxConcurrent, Fixtures) {
    for (const auto& f : all_fixtures()) {
        const auto rg = reachability_graph(f.net.net);
        EXPECT_EQ(max_concurrent_enabled(f.net.net, rg), *f.manifest.max_concurrent_enabled) << f.name;
    }
}

TEST(MaxConcurrent, ConflictingTransitionsDoNotCount) {
    // two transitions competing for the same token
    const auto wf = net_of({"i", "o"}, {"a", "b"}, {{"i", "a"}, {"a", "o"}, {"i", "b"}, {"b", "o"}});
    EXPECT_EQ(max_concurrent_enabled(wf.net, reachability_graph(wf.net)), 1u);
}
