#pragma once

#include "antllm/aco.hpp"

namespace antllm {

enum class Policy { AntLLM, Greedy, Random, Polling };

Policy policy_from_string(const std::string& name);
std::string to_string(Policy policy);

enum class RefinerKind { None, Local, Remote };

struct SimConfig {
    int epochs = 10;
    int tasks_per_epoch = 2;
    double move_probability = 0.3;
    int hop_threshold = 2;                    // H_th
    double resource_security_fraction = 0.10; // bottleneck warning level
    // Scripted client trajectory (server ids per epoch); overrides the random
    // waypoint movement when non-empty.
    std::vector<std::string> user_path;
};

enum class Trigger { PositionDeviation, ResourceBottleneck };

// Which migration triggers fire for a deployed agent given the client's
// current access server.
std::set<Trigger> check_triggers(const World& world, const std::string& agent_id,
                                 int client_server, const SimConfig& config);

struct TaskMetrics {
    std::string task_id;
    double initial_time_s = 0.0;   // transmit + initiation
    double migration_time_s = 0.0;
    double process_time_s = 0.0;
    double total_time_s = 0.0;
    double cpu_usage = 0.0;        // compute-seconds
    double memory_usage_gb = 0.0;
    double disk_usage_gb = 0.0;
    int instance_count = 0;        // agent instances started for this task
};

struct MigrationEvent {
    int epoch = 0;
    std::string agent_id;
    std::string source;
    std::string target;
    double net_gain_s = 0.0;
};

struct MetricsRecord {
    std::vector<TaskMetrics> rows;
    std::vector<MigrationEvent> migrations;
    int deferred_migrations = 0; // fired triggers where no profitable plan existed
    int infeasible_tasks = 0;    // tasks no policy placement could serve

    TaskMetrics totals() const;
};

struct SimInputs {
    World world;
    std::vector<Task> tasks;
    ObjectiveWeights weights;
    CostOptions cost;
    AcoParams aco;
    SimConfig sim;
    std::uint64_t seed = 0;
};

// Deterministic discrete-event run: task arrivals, client movement, trigger
// evaluation, and migration execution, for one placement policy.
MetricsRecord run_simulation(const SimInputs& inputs, Policy policy,
                             RefinerKind refiner = RefinerKind::Local);

// Derived per-ant/mobility random streams from one master seed.
std::mt19937_64 rng_substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

} // namespace antllm
