#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "petri/metrics.hpp"
#include "petri/state_space.hpp"

namespace petri::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCap = 3;

/// Maps the currently handled exception to an exit code and writes its message to `err`.
int report_exception(std::ostream& err);

nlohmann::json report_json(const std::string& input_path, const MetricsReport& report,
                           const SoundnessReport& soundness, const PetriNet& net, std::int64_t timing_ms);

/// One "model,metric,value" row per metric, no header.
std::string report_csv(const std::string& model, const MetricsReport& report, const SoundnessReport& soundness);

/// Vertices are named by marking bit-strings; the initial vertex is double-circled.
std::string reach_dot(const PetriNet& net, const ReachabilityGraph& rg);

struct SimulationStep {
    TransitionIndex transition;
    Marking after;
};

struct Simulation {
    std::vector<SimulationStep> steps;
    std::string stop_reason;  // "final", "deadlock" or "max-steps"
};

/// Token game with a uniformly random pick among enabled transitions.
Simulation simulate(const WorkflowNet& wf, std::uint64_t seed, std::size_t max_steps);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace petri::cli
