#pragma once

#include <optional>
#include <string>
#include <vector>

#include "petri/core.hpp"

namespace petri {

/// Published structural facts a fixture net must reproduce. Unset fields are not checked.
struct FixtureManifest {
    std::string name;
    std::size_t place_count = 0;
    std::size_t transition_count = 0;
    std::size_t arc_count = 0;
    std::optional<std::string> fire_transition_label;
    std::optional<std::size_t> arcs_before_fire;
    std::optional<std::size_t> arcs_after_fire;
    std::string expected_density;  // three decimals, e.g. "0.082"
    std::optional<std::int64_t> expected_ecym;
    std::optional<std::size_t> expected_state_count;
    std::optional<std::size_t> states_before_fire;
    std::optional<std::size_t> largest_scc_size;
    std::optional<std::size_t> max_concurrent_enabled;
    std::vector<std::string> self_loop_labels;
    std::vector<std::string> transition_labels;
};

struct ConformanceItem {
    std::string field;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct ConformanceReport {
    std::string fixture;
    std::vector<ConformanceItem> items;

    bool all_pass() const;
    std::vector<ConformanceItem> failures() const;
    /// One "PASS|FAIL field expected=... computed=..." line per item.
    std::string to_text() const;
};

/// Arcs into the fire transition or into any node that can reach it count as
/// "before"; every other arc counts as "after".
std::pair<std::size_t, std::size_t> arcs_around(const PetriNet& net, TransitionIndex fire);

/// Reachable markings that do not require firing `fire`.
std::size_t states_before(const PetriNet& net, TransitionIndex fire);

ConformanceReport check_manifest(const WorkflowNet& wf, const FixtureManifest& m);

WorkflowNet figure1_net();
WorkflowNet condensation_net();
WorkflowNet pit_roll_net();
WorkflowNet raised_structure_net();

FixtureManifest figure1_manifest();
FixtureManifest condensation_manifest();
FixtureManifest pit_roll_manifest();
FixtureManifest raised_structure_manifest();

struct Fixture {
    std::string name;  // also the .pnml file stem
    WorkflowNet net;
    FixtureManifest manifest;
};

/// figure1, condensation, pit_roll, raised_structure.
std::vector<Fixture> all_fixtures();

}  // namespace petri
