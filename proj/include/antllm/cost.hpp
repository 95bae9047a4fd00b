#pragma once

#include "antllm/model.hpp"

#include <functional>
#include <span>

namespace antllm {

// Per-task latency components and per-run resource-cost components.
struct CostBreakdown {
    double transmit_s = 0.0;
    double migration_s = 0.0;
    double initiation_s = 0.0;
    double processing_s = 0.0;
    double total_s = 0.0;
    double cpu_cost = 0.0;        // compute-seconds
    double storage_cost_gb = 0.0;
    double comm_cost_mb = 0.0;    // megabits
    double total_cost = 0.0;
};

// Net benefit of migrating one agent to a candidate server.
struct NetGain {
    double latency_gain_s = 0.0;    // client-to-agent comm delta
    double migration_cost_s = 0.0;  // T_mig + gamma * overhead
    double dependency_cost_s = 0.0; // theta_dep * dependency comm delta
    double net_s = 0.0;
};

struct CostOptions {
    double nominal_msg_mb = 1.0; // default dependency message size, megabits
    int candidate_radius = 2;    // hop radius of the candidate neighborhood
};

// GB of transferable agent state -> megabits on the wire.
inline constexpr double kMbPerGb = 8000.0;

// s_r / eta_e + T_p, using the access bandwidth at the task's origin server.
double transmit_latency(const World& world, const Task& task);

// export + state transfer + initiation at target + load. The initiation term
// is evaluated at the target's post-arrival agent count.
double migration_latency(const World& world, const Agent& agent, int source, int target);

// Startup time summed over agents newly started for this task; agents already
// running contribute nothing. Counts use post-placement occupancy.
double initiation_latency(const World& world, const Task& task, const Placement& placement);

double processing_latency(const Task& task);

// Latency part of the breakdown: transmit + migration + initiation + processing.
CostBreakdown total_latency(double transmit_s, double migration_s, double initiation_s,
                            double processing_s);

// T_r minus pure transfer time (file upload and memory transfer). Throws
// NegativeCost on inconsistent inputs.
double cpu_cost(double total_s, double file_transfer_s, double memory_transfer_s);

double storage_cost(std::span<const Task> tasks, std::span<const Agent> deployed_agents);

// Inter-server communication volume; same-server events are free. `server_of`
// resolves an agent id to its server index, or -1 when unknown.
double comm_cost(const std::vector<CommEvent>& events,
                 const std::function<int(const std::string&)>& server_of);

// Point-to-point message latency: hop latency plus transmit time.
double comm_latency(const World& world, int e1, int e2, double size_mb);

// ---------------------------------------------------------------------------
// Placement objective (Problem EAD)

// Precomputed, immutable view of one placement instance: the task's unhosted
// agents in construction order, the candidate server set around the origin,
// and the all-pairs hop table.
struct EadContext {
    const World* world = nullptr;
    const Task* task = nullptr;
    int origin = -1;
    std::vector<int> agent_order; // agent indices, descending total requirement
    std::vector<int> candidates;  // candidate server indices, ascending
    ObjectiveWeights weights;
    CostOptions opts;
    std::vector<std::vector<int>> hops;
    // Symmetric closure of the hard co-location edges, per position.
    std::vector<std::set<std::string>> colocation_peers;

    const Agent& agent_at(int pos) const { return world->agents[agent_order[pos]]; }
    int n_agents() const { return static_cast<int>(agent_order.size()); }
};

EadContext make_ead_context(const World& world, const Task& task,
                            const ObjectiveWeights& weights, const CostOptions& opts = {});

// assignment[i] = server index for agent_order[i].
// Throws InfeasiblePlacement when check_feasible is set and a constraint fails.
double ead_objective(const EadContext& ctx, const std::vector<int>& assignment,
                     bool check_feasible = true);

bool ead_feasible(const EadContext& ctx, const std::vector<int>& assignment);

Placement to_placement(const EadContext& ctx, const std::vector<int>& assignment);
std::vector<int> from_placement(const EadContext& ctx, const Placement& placement);

// Public string-keyed wrapper.
double ead_objective(const World& world, const Task& task, const Placement& placement,
                     const ObjectiveWeights& weights, const CostOptions& opts = {});

// ---------------------------------------------------------------------------
// Migration objective (Problem EAM)

// Net gain of moving a deployed agent to `target`, judged from the client's
// current access server. Throws TargetInfeasible if the target lacks capacity.
NetGain net_gain(const World& world, const std::string& agent_id, int target,
                 int client_server, const ObjectiveWeights& weights,
                 const CostOptions& opts = {});

// Expectation over a client position distribution (pairs of server index and
// probability mass); the single-point overload above is the default.
NetGain net_gain(const World& world, const std::string& agent_id, int target,
                 const std::vector<std::pair<int, double>>& client_distribution,
                 const ObjectiveWeights& weights, const CostOptions& opts = {});

} // namespace antllm
