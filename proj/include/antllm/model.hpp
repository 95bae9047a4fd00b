#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace antllm {

// ---------------------------------------------------------------------------
// Errors

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityExceeded : ModelError {
    std::string resource;
    explicit CapacityExceeded(std::string res)
        : ModelError("capacity exceeded: " + res), resource(std::move(res)) {}
};

struct AgentLimitExceeded : ModelError {
    AgentLimitExceeded() : ModelError("server agent limit exceeded") {}
};

struct Disconnected : ModelError {
    Disconnected() : ModelError("servers are not connected") {}
};

struct UnassignedAgent : ModelError {
    explicit UnassignedAgent(const std::string& id)
        : ModelError("agent not assigned: " + id) {}
};

struct NegativeCost : ModelError {
    explicit NegativeCost(const std::string& what) : ModelError(what) {}
};

struct InfeasiblePlacement : ModelError {
    explicit InfeasiblePlacement(const std::string& what) : ModelError(what) {}
};

struct TargetInfeasible : ModelError {
    explicit TargetInfeasible(const std::string& what) : ModelError(what) {}
};

struct Infeasible : ModelError {
    explicit Infeasible(const std::string& what) : ModelError(what) {}
};

struct BudgetExceeded : ModelError {
    explicit BudgetExceeded(const std::string& what) : ModelError(what) {}
};

struct ValidationError : ModelError {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v)
        : ModelError(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v);
};

// ---------------------------------------------------------------------------
// Resources

// Joint CPU / memory / storage / bandwidth quantity, used both for agent
// requirements and server capacities. All components are non-negative.
struct ResourceVector {
    double cpu = 0.0;            // abstract compute units
    double memory_gb = 0.0;      // GB
    double storage_gb = 0.0;     // GB
    double bandwidth_mbps = 0.0; // Mbps

    ResourceVector operator+(const ResourceVector& o) const {
        return {cpu + o.cpu, memory_gb + o.memory_gb, storage_gb + o.storage_gb,
                bandwidth_mbps + o.bandwidth_mbps};
    }
    ResourceVector operator-(const ResourceVector& o) const {
        return {cpu - o.cpu, memory_gb - o.memory_gb, storage_gb - o.storage_gb,
                bandwidth_mbps - o.bandwidth_mbps};
    }
    bool operator==(const ResourceVector&) const = default;

    bool non_negative(double eps = 1e-9) const {
        return cpu >= -eps && memory_gb >= -eps && storage_gb >= -eps &&
               bandwidth_mbps >= -eps;
    }
    // componentwise <=
    bool fits_within(const ResourceVector& o, double eps = 1e-9) const {
        return cpu <= o.cpu + eps && memory_gb <= o.memory_gb + eps &&
               storage_gb <= o.storage_gb + eps &&
               bandwidth_mbps <= o.bandwidth_mbps + eps;
    }
    double total() const { return cpu + memory_gb + storage_gb + bandwidth_mbps; }

    // Name of the first component of *this that exceeds `limit`, or empty.
    std::string first_overflow(const ResourceVector& limit, double eps = 1e-9) const;
};

// ---------------------------------------------------------------------------
// Domain entities

struct Agent {
    std::string id;
    ResourceVector requirements;
    double memory_state_gb = 0.0; // transferable memory moved on migration
    std::set<std::string> dependencies;
    std::set<std::string> colocate_with; // subset of dependencies, hard constraint
    std::optional<std::string> host;     // current server, if deployed
    // Per-dependency message size overrides (megabits); absent edges use the
    // configured nominal size.
    std::map<std::string, double> dep_msg_mb;
};

struct EdgeServer {
    std::string id;
    ResourceVector capacity;
    ResourceVector remaining;
    double export_time_s = 0.0;
    double load_time_s = 0.0;
    double init_base_s = 0.0;
    double init_per_agent_s = 0.0;
    int max_agents = 10;
    std::set<std::string> hosted;
    std::array<double, 2> position{0.0, 0.0};

    // Startup time of one agent when the server hosts `count` agents total
    // (the agent itself included).
    double init_time_s(int count) const {
        return init_base_s + init_per_agent_s * static_cast<double>(count);
    }
};

// Undirected server graph with per-link bandwidth. bandwidth[e][e] is +inf,
// meaning a local (zero-cost) transfer.
struct NetworkModel {
    std::vector<std::vector<int>> adjacency;        // neighbor index lists
    std::vector<std::vector<double>> bandwidth_mbps; // direct links; symmetric, inf on diagonal
    double per_hop_latency_s = 0.0;
    std::vector<double> client_bandwidth_mbps;       // access bandwidth per server

    // Maximin (widest-path) bandwidth between every pair; filled by finalize().
    std::vector<std::vector<double>> effective_bandwidth_mbps;

    int size() const { return static_cast<int>(adjacency.size()); }

    // Derive the effective bandwidth matrix from the direct-link matrix.
    void finalize();

    // Shortest-path edge count. Throws Disconnected if unreachable.
    int hop_count(int e1, int e2) const;

    // All-pairs hop table; unreachable pairs hold -1.
    std::vector<std::vector<int>> all_hops() const;

    bool connected() const;

    static constexpr double kLocalBandwidth = std::numeric_limits<double>::infinity();
};

struct CommEvent {
    std::string from_agent;
    std::string to_agent;
    double size_mb = 0.0; // megabits
};

struct Task {
    std::string id;
    std::string origin_server; // the user's access point e_c
    double file_size_mb = 0.0; // megabits
    double prompt_time_s = 0.0;
    std::vector<std::string> required_agents;
    double storage_gb = 0.0;
    double file_processing_time_s = 0.0;
    double llm_time_s = 0.0;
    std::vector<CommEvent> comm_events;
};

// Assignment map agent -> server, the decision variable of the placement
// problem in one-hot form.
struct Placement {
    std::map<std::string, std::string> assignments;
    bool feasible = false;
};

struct ObjectiveWeights {
    double theta = 1.0;     // communication-dependency weight (placement)
    double gamma = 0.1;     // migration overhead weight
    double theta_dep = 0.5; // dependency-damage weight (migration)
};

// ---------------------------------------------------------------------------
// World: servers + agents + network with id -> index lookup.

struct World {
    std::vector<EdgeServer> servers;
    std::vector<Agent> agents;
    NetworkModel net;

    std::unordered_map<std::string, int> server_index;
    std::unordered_map<std::string, int> agent_index;

    void rebuild_index();

    int server_of(const std::string& id) const;
    int agent_of(const std::string& id) const;

    // Recompute every server's `remaining` and `hosted` from agent host fields.
    void sync_occupancy();
};

// ---------------------------------------------------------------------------
// Capacity accounting

// Deduct the agent's requirements from the server. Atomic: on failure the
// server is left untouched.
void apply_assignment(EdgeServer& server, const Agent& agent);

// Inverse of apply_assignment.
void release_assignment(EdgeServer& server, const Agent& agent);

} // namespace antllm
