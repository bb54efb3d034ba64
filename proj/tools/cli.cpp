#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "petri/fixtures.hpp"
#include "petri/pnml.hpp"

#ifndef PETRI_TOOL_VERSION
#define PETRI_TOOL_VERSION "0.0.0"
#endif

namespace petri::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const PnmlError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const NetError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const MetricsError& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == MetricsErrorCode::NoProgress ? kExitUnexpected : kExitInvalid;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << "\n";
        return kExitUnexpected;
    }
}

namespace {

std::string rational_text(const Rational& r) {
    std::ostringstream s;
    s << r.numerator();
    if (r.denominator() != 1) s << "/" << r.denominator();
    return s.str();
}

json ids(const PetriNet& net, const std::vector<TransitionIndex>& ts) {
    json out = json::array();
    for (auto t : ts) out.push_back(net.transition(t).id);
    return out;
}

json soundness_json(const PetriNet& net, const SoundnessReport& s) {
    return json{{"sound", s.sound},
                {"deadTransitions", ids(net, s.dead_transitions)},
                {"nonterminatingStates", s.nonterminating_states},
                {"improperCompletions", s.improper_completions}};
}

json match_json(const ComponentMatch& m) {
    return json{{"kind", std::string(to_string(m.kind))},
                {"entry", m.entry},
                {"exit", m.exit},
                {"places", m.place_set},
                {"transitions", m.transition_set},
                {"splits", m.split_count},
                {"joins", m.join_count},
                {"diff", rational_text(m.diff)},
                {"weight", rational_text(m.weight)},
                {"tier", m.tier},
                {"macro", m.folded_into}};
}

std::string model_name(const std::string& path) {
    return fs::path(path).stem().string();
}

struct FileResult {
    int code = kExitOk;
    std::string out;
    std::string err;
    json document;
};

FileResult analyze(const std::string& path, std::size_t cap, const std::string& format) {
    FileResult r;
    std::ostringstream err;
    try {
        const auto start = std::chrono::steady_clock::now();
        auto doc = read_pnml_file(path);
        auto wf = validate_workflow(std::move(doc.net));
        const auto soundness = soundness_check(wf, cap);
        if (!soundness.sound) {
            err << "error: " << path << " is not a sound workflow net\n";
            for (auto t : soundness.dead_transitions) err << "  dead transition " << wf.net.transition(t).id << "\n";
            err << "  " << soundness.nonterminating_states.size() << " nonterminating states, "
                << soundness.improper_completions.size() << " improper completions\n";
            r.code = kExitInvalid;
            r.err = err.str();
            return r;
        }
        const auto report = full_report(wf, cap);
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        if (format == "csv") {
            r.out = report_csv(model_name(path), report, soundness);
        } else {
            r.document = report_json(path, report, soundness, wf.net, elapsed);
        }
    } catch (...) {
        r.code = report_exception(err);
    }
    r.err = err.str();
    return r;
}

int cmd_metrics(const std::vector<std::string>& paths, const std::string& format, std::size_t cap,
                std::ostream& out, std::ostream& err) {
    std::vector<std::future<FileResult>> jobs;
    for (const auto& p : paths) {
        jobs.push_back(std::async(std::launch::async, analyze, p, cap, format));
    }
    std::vector<FileResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    int code = kExitOk;
    json documents = json::array();
    if (format == "csv") out << "model,metric,value\n";
    for (const auto& r : results) {
        err << r.err;
        if (r.code != kExitOk) {
            if (code == kExitOk) code = r.code;
            continue;
        }
        if (format == "csv") {
            out << r.out;
        } else {
            documents.push_back(r.document);
        }
    }
    if (format == "json" && !documents.empty()) {
        out << (paths.size() == 1 ? documents.front() : documents).dump(2) << "\n";
    }
    return code;
}

int cmd_reach(const std::string& path, const std::string& dot_path, std::size_t cap, std::ostream& out,
              std::ostream& err) {
    try {
        const auto net = read_pnml_file(path).net;
        const auto rg = reachability_graph(net, cap);
        const std::string dot = reach_dot(net, rg);
        if (dot_path.empty()) {
            out << dot;
        } else {
            std::ofstream file(dot_path, std::ios::binary);
            if (!file) {
                err << "error: cannot write " << dot_path << "\n";
                return kExitUnexpected;
            }
            file << dot;
            out << "vertices " << rg.vertex_count() << "\nedges " << rg.edge_count() << "\n";
        }
        return kExitOk;
    } catch (...) {
        return report_exception(err);
    }
}

int cmd_validate(const std::string& path, std::size_t cap, std::ostream& out, std::ostream& err) {
    try {
        auto wf = validate_workflow(read_pnml_file(path).net);
        const auto& net = wf.net;
        out << "source " << net.place(wf.source).id << "\n";
        out << "sink " << net.place(wf.sink).id << "\n";
        const auto rg = reachability_graph(net, cap);
        const auto s = soundness_check(wf, rg);
        for (auto t : s.dead_transitions) {
            out << "dead transition " << net.transition(t).id << " (" << net.transition(t).display() << ")\n";
        }
        for (auto v : s.nonterminating_states) {
            out << "nonterminating state " << rg.vertices[v].bit_string() << "\n";
        }
        for (auto v : s.improper_completions) {
            out << "improper completion " << rg.vertices[v].bit_string() << "\n";
        }
        out << (s.sound ? "sound" : "unsound") << "\n";
        return s.sound ? kExitOk : kExitInvalid;
    } catch (...) {
        return report_exception(err);
    }
}

int cmd_simulate(const std::string& path, std::uint64_t seed, std::size_t max_steps, std::ostream& out,
                 std::ostream& err) {
    try {
        auto wf = validate_workflow(read_pnml_file(path).net);
        const auto sim = simulate(wf, seed, max_steps);
        for (std::size_t k = 0; k < sim.steps.size(); ++k) {
            const auto& t = wf.net.transition(sim.steps[k].transition);
            out << k + 1 << " " << t.id << " " << t.display() << "\n";
        }
        const Marking& last = sim.steps.empty() ? wf.net.initial_marking() : sim.steps.back().after;
        out << "stop " << sim.stop_reason << " " << last.bit_string() << "\n";
        return kExitOk;
    } catch (...) {
        return report_exception(err);
    }
}

int cmd_fixtures(const std::string& dir, bool check_only, std::ostream& out, std::ostream& err) {
    try {
        if (!check_only) fs::create_directories(dir);
        int code = kExitOk;
        for (const auto& f : all_fixtures()) {
            const fs::path pnml = fs::path(dir) / (f.name + ".pnml");
            const std::string canonical = write_pnml(f.net.net, f.name);
            ConformanceReport report;
            if (check_only) {
                std::ifstream in(pnml, std::ios::binary);
                std::stringstream buffer;
                buffer << in.rdbuf();
                if (!in || buffer.str() != canonical) {
                    out << "DIFF " << pnml.string() << " differs from the canonical fixture\n";
                    code = kExitInvalid;
                }
                try {
                    report = check_manifest(validate_workflow(read_pnml_file(pnml.string()).net), f.manifest);
                } catch (const std::exception& e) {
                    out << f.name << ": invalid (" << e.what() << ")\n";
                    code = kExitInvalid;
                    continue;
                }
            } else {
                std::ofstream(pnml, std::ios::binary) << canonical;
                report = check_manifest(f.net, f.manifest);
                std::ofstream(fs::path(dir) / (f.name + ".conformance.txt"), std::ios::binary) << report.to_text();
            }
            const auto failures = report.failures();
            out << f.name << ": " << (failures.empty() ? "conforms" : std::to_string(failures.size()) + " mismatch(es)")
                << "\n";
            for (const auto& i : failures) {
                out << "  " << i.field << " expected " << i.expected << " computed " << i.computed << "\n";
            }
            if (!failures.empty()) code = kExitInvalid;
        }
        return code;
    } catch (...) {
        return report_exception(err);
    }
}

}  // namespace

json report_json(const std::string& input_path, const MetricsReport& report, const SoundnessReport& soundness,
                 const PetriNet& net, std::int64_t timing_ms) {
    json census = {{"places", report.census.places},
                   {"transitions", report.census.transitions},
                   {"arcs", report.census.arcs},
                   {"placeShare", report.census.place_share()},
                   {"transitionShare", report.census.transition_share()},
                   {"arcShare", report.census.arc_share()}};
    json kinds = json::object();
    for (auto k : kAllComponentKinds) {
        kinds[std::string(to_string(k))] = report.component_census[static_cast<std::size_t>(k)];
    }
    json trace = json::array();
    for (const auto& m : report.fold_trace) trace.push_back(match_json(m));
    json r = {{"census", census},
              {"density", std::stod(format_fixed3(report.density))},
              {"densityExact", rational_text(report.density)},
              {"extendedCyclomatic", report.extended_cyclomatic},
              {"structuredness", to_double(report.structuredness)},
              {"structurednessExact", rational_text(report.structuredness)},
              {"componentCensus", kinds},
              {"foldTrace", trace},
              {"stateSpace",
               {{"vertices", report.state_space.vertex_count},
                {"edges", report.state_space.edge_count},
                {"sccs", report.state_space.scc_count},
                {"largestScc", report.state_space.largest_scc}}}};
    return json{{"toolVersion", PETRI_TOOL_VERSION},
                {"inputPath", input_path},
                {"report", r},
                {"soundness", soundness_json(net, soundness)},
                {"timingMs", timing_ms}};
}

std::string report_csv(const std::string& model, const MetricsReport& report, const SoundnessReport& soundness) {
    std::ostringstream out;
    auto row = [&](const char* metric, const auto& value) { out << model << "," << metric << "," << value << "\n"; };
    row("places", report.census.places);
    row("transitions", report.census.transitions);
    row("arcs", report.census.arcs);
    row("density", format_fixed3(report.density));
    row("extended_cyclomatic", report.extended_cyclomatic);
    row("structuredness", format_fixed3(report.structuredness));
    row("states", report.state_space.vertex_count);
    row("edges", report.state_space.edge_count);
    row("sccs", report.state_space.scc_count);
    row("largest_scc", report.state_space.largest_scc);
    row("sound", soundness.sound ? "true" : "false");
    return out.str();
}

std::string reach_dot(const PetriNet& net, const ReachabilityGraph& rg) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream out;
    out << "digraph reachability {\n";
    out << "  node [shape=circle];\n";
    for (std::size_t v = 0; v < rg.vertex_count(); ++v) {
        out << "  " << quote(rg.vertices[v].bit_string());
        if (v == rg.initial) out << " [shape=doublecircle]";
        out << ";\n";
    }
    for (const auto& e : rg.edges) {
        out << "  " << quote(rg.vertices[e.from].bit_string()) << " -> " << quote(rg.vertices[e.to].bit_string())
            << " [label=" << quote(net.transition(e.transition).display()) << "];\n";
    }
    out << "}\n";
    return out.str();
}

Simulation simulate(const WorkflowNet& wf, std::uint64_t seed, std::size_t max_steps) {
    std::mt19937_64 rng(seed);
    Simulation sim;
    Marking m = wf.net.initial_marking();
    const Marking final_marking = wf.final_marking();
    while (true) {
        const auto choices = enabled(wf.net, m);
        if (choices.empty()) {
            sim.stop_reason = m == final_marking ? "final" : "deadlock";
            break;
        }
        if (sim.steps.size() >= max_steps) {
            sim.stop_reason = "max-steps";
            break;
        }
        // Plain modulo keeps the trace identical across standard libraries.
        const auto t = choices[rng() % choices.size()];
        m = fire(wf.net, m, t);
        sim.steps.push_back({t, m});
    }
    return sim;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Workflow Petri net analysis"};
    app.name("petri");
    app.require_subcommand(1);
    app.set_version_flag("--version", PETRI_TOOL_VERSION);

    std::size_t cap = kDefaultStateCap;

    std::vector<std::string> metric_paths;
    std::string format = "json";
    auto* metrics = app.add_subcommand("metrics", "Compute the metric report for one or more .pnml files");
    metrics->add_option("files", metric_paths, "Input nets")->required();
    metrics->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    metrics->add_option("--cap", cap, "Maximum number of reachable states")->check(CLI::PositiveNumber);

    std::string reach_path, dot_path;
    auto* reach = app.add_subcommand("reach", "Export the reachability graph as DOT");
    reach->add_option("file", reach_path, "Input net")->required();
    reach->add_option("--dot", dot_path, "Output DOT file (default: standard output)");
    reach->add_option("--cap", cap, "Maximum number of reachable states")->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check workflow structure and soundness");
    validate->add_option("file", validate_path, "Input net")->required();
    validate->add_option("--cap", cap, "Maximum number of reachable states")->check(CLI::PositiveNumber);

    std::string simulate_path;
    std::uint64_t seed = 0;
    std::size_t max_steps = 1000;
    auto* sim = app.add_subcommand("simulate", "Play the token game with a seeded random scheduler");
    sim->add_option("file", simulate_path, "Input net")->required();
    sim->add_option("--seed", seed, "Random seed")->required();
    sim->add_option("--max-steps", max_steps, "Step limit");

    std::string out_dir;
    bool check_only = false;
    auto* fixtures = app.add_subcommand("fixtures", "Write the canonical fixture nets and conformance reports");
    fixtures->add_option("--out", out_dir, "Output directory")->required();
    fixtures->add_flag("--check", check_only, "Compare existing files instead of writing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (metrics->parsed()) return cmd_metrics(metric_paths, format, cap, out, err);
    if (reach->parsed()) return cmd_reach(reach_path, dot_path, cap, out, err);
    if (validate->parsed()) return cmd_validate(validate_path, cap, out, err);
    if (sim->parsed()) return cmd_simulate(simulate_path, seed, max_steps, out, err);
    if (fixtures->parsed()) return cmd_fixtures(out_dir, check_only, out, err);
    return kExitUnexpected;
}

}  // namespace petri::cli
