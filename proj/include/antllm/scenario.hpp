#pragma once

#include "antllm/sim.hpp"

#include <filesystem>
#include <iosfwd>

namespace antllm {

struct ParseError : ModelError {
    explicit ParseError(const std::string& what) : ModelError(what) {}
};

// The full serializable world: servers, network, agents, tasks, and every
// knob the solvers and the simulator read.
struct Scenario {
    World world;
    std::vector<Task> tasks;
    ObjectiveWeights weights;
    AcoParams aco;
    SimConfig sim;
    CostOptions cost;
    std::uint64_t seed = 0;

    SimInputs sim_inputs() const {
        return {world, tasks, weights, cost, aco, sim, seed};
    }
};

// Strict JSON loader: unknown fields are rejected, all referential and model
// invariants are checked. Throws ParseError or ValidationError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_text(const std::string& text);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
std::string scenario_to_json_text(const Scenario& scenario);

// Synthetic scenario: capacities sampled around the four-server testbed values
// (+-50%), random connected topology, 1-3 fresh agents per task.
Scenario generate_scenario(int n_servers, int n_tasks, std::uint64_t seed);

enum class OutputFormat { Csv, Json };
OutputFormat format_from_string(const std::string& name);

// One simulation per policy on identical seeds; one row per (policy, task)
// plus an aggregate row per policy.
struct ExperimentResult {
    std::vector<std::pair<Policy, MetricsRecord>> runs;
};

ExperimentResult run_experiment(const Scenario& scenario,
                                const std::vector<Policy>& policies,
                                RefinerKind refiner = RefinerKind::Local);

void write_metrics(const ExperimentResult& result, std::ostream& out,
                   OutputFormat format);
void write_metrics(const ExperimentResult& result, const std::filesystem::path& path,
                   OutputFormat format);

} // namespace antllm
