// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero if any line fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "petri/fixtures.hpp"
#include "petri/metrics.hpp"
#include "petri/pnml.hpp"
#include "petri/state_space.hpp"

using namespace petri;

namespace {

constexpr double kFigure1BudgetSeconds = 1.0;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kShareTolerance = 0.03;
constexpr int kOracleNets = 120;
constexpr int kOracleGraphs = 200;
constexpr int kGeneratedNets = 100;

class Criterion {
public:
    template <class A, class B>
    void equal(const std::string& what, const A& got, const B& want) {
        if (!(got == want)) {
            std::ostringstream s;
            s << what << " got " << got << " want " << want;
            misses_.push_back(s.str());
        }
    }
    void check(const std::string& what, bool ok) {
        if (!ok) misses_.push_back(what);
    }
    void note(const std::string& text) { notes_.push_back(text); }
    bool ok() const { return misses_.empty(); }
    std::string detail() const {
        std::string out;
        for (const auto& m : misses_) out += (out.empty() ? "" : "; ") + m;
        for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
        return out;
    }

private:
    std::vector<std::string> misses_;
    std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::set<std::string> bit_strings(const std::vector<Marking>& ms) {
    std::set<std::string> out;
    for (const auto& m : ms) out.insert(m.bit_string());
    return out;
}

std::vector<WorkflowNet> generated_nets(std::uint64_t seed, int count) {
    petri::testing::NetGenerator gen(seed);
    std::vector<WorkflowNet> out;
    for (int n = 0; n < count; ++n) out.push_back((n % 2 ? gen.perturbed(12, 1 + n % 3) : gen.structured(12)).build());
    return out;
}

WorkflowNet net_of(std::vector<std::string> places, std::vector<std::string> transitions,
                   std::vector<std::pair<std::string, std::string>> arcs) {
    std::vector<NodeInfo> ps, ts;
    for (auto& p : places) ps.push_back({p, std::nullopt});
    for (auto& t : transitions) ts.push_back({t, std::nullopt});
    std::vector<ArcSpec> as;
    for (auto& [s, d] : arcs) as.push_back({s, d, 1});
    return validate_workflow(build_net(ps, ts, as, {places.front()}));
}

void figure1_golden(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    const auto wf = figure1_net();
    const auto d = density(wf.net);
    c.equal("density", d, Rational(10, 48));
    c.equal("printed density", format_fixed3(d), "0.208");
    const auto rg = reachability_graph(wf.net);
    const auto scc = scc_decompose(rg);
    c.equal("vertices", rg.vertex_count(), 6u);
    c.equal("edges", rg.edge_count(), 6u);
    c.equal("sccs", scc.component_count, 6u);
    c.equal("largest scc", scc.largest(), 1u);
    c.equal("ecym", extended_cyclomatic(rg, scc), 6);
    const auto sm = structuredness(wf);
    c.equal("structuredness", sm.value, Rational(8));
    c.equal("fold steps", sm.trace.size(), 1u);
    if (!sm.trace.empty()) {
        c.check("single marked graph", sm.trace[0].kind == ComponentKind::MarkedGraph);
        c.equal("diff", sm.trace[0].diff, Rational(1));
    }
    const double took = seconds_since(start);
    c.check("over time budget", took < kFigure1BudgetSeconds);
}

void census_density(Criterion& c) {
    const std::map<std::string, std::tuple<std::size_t, std::size_t, std::size_t, std::string>> want{
        {"condensation", {13, 14, 30, "0.082"}},
        {"pit_roll", {15, 14, 32, "0.076"}},
        {"raised_structure", {25, 26, 56, "0.043"}},
    };
    for (const auto& f : all_fixtures()) {
        const auto it = want.find(f.name);
        if (it == want.end()) continue;
        const auto& [p, t, a, printed] = it->second;
        const auto e = census(f.net.net);
        c.equal(f.name + " places", e.places, p);
        c.equal(f.name + " transitions", e.transitions, t);
        c.equal(f.name + " arcs", e.arcs, a);
        c.equal(f.name + " density", format_fixed3(density(f.net.net)), printed);
        c.check(f.name + " place share", std::abs(e.place_share() - 0.24) <= kShareTolerance);
        c.check(f.name + " transition share", std::abs(e.transition_share() - 0.24) <= kShareTolerance);
        c.check(f.name + " arc share", std::abs(e.arc_share() - 0.52) <= kShareTolerance);
    }
}

void state_space(Criterion& c) {
    const std::map<std::string, std::tuple<std::size_t, std::int64_t, std::size_t, std::size_t>> want{
        {"condensation", {13, 13, 4, 2}},
        {"pit_roll", {21, 31, 2, 3}},
        {"raised_structure", {34, 38, 4, 3}},
    };
    for (const auto& f : all_fixtures()) {
        const auto it = want.find(f.name);
        if (it == want.end()) continue;
        const auto& [states, ecym, largest, concurrent] = it->second;
        const auto& net = f.net.net;
        const auto rg = reachability_graph(net);
        const auto scc = scc_decompose(rg);
        c.equal(f.name + " states", rg.vertex_count(), states);
        c.equal(f.name + " ecym", extended_cyclomatic(rg, scc), ecym);
        c.equal(f.name + " largest scc", scc.largest(), largest);
        c.equal(f.name + " max concurrent", max_concurrent_enabled(net, rg), concurrent);
        std::set<std::string> loops;
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (net.is_self_loop(TransitionIndex{t})) loops.insert(net.transition(TransitionIndex{t}).display());
        }
        const auto& listed = f.manifest.self_loop_labels;
        c.check(f.name + " self-loop set differs from manifest",
                loops == std::set<std::string>(listed.begin(), listed.end()));
    }
}

void orderings(Criterion& c) {
    const auto cr = full_report(condensation_net());
    const auto pr = full_report(pit_roll_net());
    const auto rr = full_report(raised_structure_net());
    c.check("density not decreasing", cr.density > pr.density && pr.density > rr.density);
    c.check("ecym not increasing", cr.extended_cyclomatic < pr.extended_cyclomatic &&
                                       pr.extended_cyclomatic < rr.extended_cyclomatic);
    c.check("structuredness not increasing", cr.structuredness < pr.structuredness &&
                                                 pr.structuredness < rr.structuredness);
    std::ostringstream s;
    s << "structuredness " << format_fixed3(cr.structuredness) << " / " << format_fixed3(pr.structuredness) << " / "
      << format_fixed3(rr.structuredness) << " (published 38 / 102 / 132, not gating)";
    c.note(s.str());
}

void oracle_equivalence(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    petri::testing::NetGenerator gen(2718);
    for (int n = 0; n < kOracleNets; ++n) {
        const auto net = (n % 2 ? gen.perturbed(12, 1 + n % 4) : gen.structured(12)).build().net;
        c.check("net over 12 places", net.place_count() <= 12);
        if (bit_strings(reachability_graph(net).vertices) != bit_strings(brute_force_reachable(net))) {
            c.check("bfs differs from brute force on net " + std::to_string(n), false);
        }
    }
    std::mt19937_64 rng(31);
    for (int n = 0; n < kOracleGraphs; ++n) {
        const std::size_t v = 1 + rng() % 50;
        ReachabilityGraph g;
        for (std::size_t k = 0; k < v; ++k) g.vertices.push_back(Marking(1));
        const std::size_t m = rng() % (3 * v);
        for (std::size_t k = 0; k < m; ++k) g.edges.push_back({rng() % v, TransitionIndex{0}, rng() % v});
        if (scc_decompose(g).component_of != petri::testing::naive_scc(v, g.successors())) {
            c.check("tarjan differs from naive oracle on graph " + std::to_string(n), false);
        }
    }
    const double took = seconds_since(start);
    c.check("over time budget", took <= kOracleBudgetSeconds);
    std::ostringstream s;
    s << kOracleNets << " nets, " << kOracleGraphs << " graphs in " << static_cast<int>(took * 1000) << " ms";
    c.note(s.str());
}

void round_trip(Criterion& c) {
    std::vector<std::pair<std::string, PetriNet>> nets;
    for (const auto& f : all_fixtures()) nets.push_back({f.name, f.net.net});
    int n = 0;
    for (const auto& wf : generated_nets(99, kGeneratedNets)) nets.push_back({"generated " + std::to_string(n++), wf.net});
    for (const auto& [name, net] : nets) {
        const auto text = write_pnml(net, "net");
        const auto back = parse_pnml(text);
        c.check(name + " not isomorphic after round trip", isomorphic(back, net));
        c.check(name + " write not deterministic", write_pnml(net, "net") == text && write_pnml(back, "net") == text);
    }
}

void soundness(Criterion& c) {
    for (const auto& f : all_fixtures()) c.check(f.name + " unsound", soundness_check(f.net).sound);
    const auto dead = soundness_check(net_of({"i", "a", "c", "o"}, {"t1", "t2", "t3", "t4", "t_dead"},
                                             {{"i", "t1"}, {"t1", "a"}, {"a", "t2"}, {"t2", "o"}, {"i", "t3"},
                                              {"t3", "c"}, {"c", "t4"}, {"t4", "o"}, {"a", "t_dead"},
                                              {"c", "t_dead"}, {"t_dead", "o"}}));
    c.check("dead transition not found", !dead.sound && !dead.dead_transitions.empty());
    const auto improper = soundness_check(net_of(
        {"i", "a", "b", "o"}, {"t1", "t2", "t3"},
        {{"i", "t1"}, {"t1", "a"}, {"t1", "b"}, {"a", "t2"}, {"t2", "o"}, {"b", "t3"}, {"t3", "o"}}));
    c.check("improper completion not found", !improper.sound && !improper.improper_completions.empty());
    const auto stuck = soundness_check(net_of(
        {"i", "a", "b", "o"}, {"t1", "t2", "t3"},
        {{"i", "t1"}, {"t1", "a"}, {"i", "t2"}, {"t2", "b"}, {"a", "t3"}, {"b", "t3"}, {"t3", "o"}}));
    c.check("nonterminating state not found", !stuck.sound && !stuck.nonterminating_states.empty());
}

void metric_properties(Criterion& c) {
    int folds = 0;
    int n = 0;
    for (const auto& wf : generated_nets(4242, kGeneratedNets)) {
        const auto tag = " on net " + std::to_string(n++);
        const auto d = density(wf.net);
        c.check("density outside (0,1]" + tag, d > Rational(0) && d <= Rational(1));

        auto rg = reachability_graph(wf.net);
        const auto before = extended_cyclomatic(rg, scc_decompose(rg));
        rg.edges.push_back({0, TransitionIndex{0}, 0});
        c.equal("ecym step from added self-loop" + tag, extended_cyclomatic(rg, scc_decompose(rg)) - before, 1);

        if (!soundness_check(wf).sound) continue;
        std::map<std::string, Rational> macro_weight;
        for (const auto& m : structuredness(wf).trace) {
            Rational nested = 0;
            for (const auto& t : m.transition_set) {
                if (const auto it = macro_weight.find(t); it != macro_weight.end()) nested += it->second;
            }
            c.check("fold weight below nested macros" + tag, m.weight >= nested);
            macro_weight[m.folded_into] = m.weight;
            ++folds;
        }
    }
    c.check("no folds exercised", folds > 0);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
        {"Figure 1 golden suite", figure1_golden},
        {"fixture census and density", census_density},
        {"fixture state spaces", state_space},
        {"cross-fixture orderings", orderings},
        {"oracle equivalence", oracle_equivalence},
        {"PNML round trip", round_trip},
        {"soundness verdicts", soundness},
        {"metric properties", metric_properties},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, body] : criteria) {
        Criterion c;
        try {
            body(c);
        } catch (const std::exception& e) {
            c.check(std::string("threw: ") + e.what(), false);
        }
        failed += !c.ok();
        std::cout << (c.ok() ? "PASS " : "FAIL ") << index++ << " " << name;
        if (!c.detail().empty()) std::cout << "  [" << c.detail() << "]";
        std::cout << "\n";
    }
    return failed == 0 ? 0 : 1;
}
