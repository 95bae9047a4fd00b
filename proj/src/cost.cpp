#include "antllm/cost.hpp"

#include <algorithm>
#include <cmath>

namespace antllm {

namespace {

double safe_div(double num, double den) {
    if (num == 0.0)
        return 0.0;
    if (std::isinf(den))
        return 0.0;
    return num / den;
}

double dep_msg_size(const Agent& agent, const std::string& peer, const CostOptions& opts) {
    auto it = agent.dep_msg_mb.find(peer);
    return it != agent.dep_msg_mb.end() ? it->second : opts.nominal_msg_mb;
}

} // namespace

double transmit_latency(const World& world, const Task& task) {
    int origin = world.server_of(task.origin_server);
    double eta = world.net.client_bandwidth_mbps[origin];
    return safe_div(task.file_size_mb, eta) + task.prompt_time_s;
}

double migration_latency(const World& world, const Agent& agent, int source, int target) {
    const auto& src = world.servers[source];
    const auto& dst = world.servers[target];
    double eta = world.net.effective_bandwidth_mbps[source][target];
    double transfer = safe_div(agent.memory_state_gb * kMbPerGb, eta);
    int post_count = static_cast<int>(dst.hosted.size()) + 1;
    return src.export_time_s + transfer + dst.init_time_s(post_count) + dst.load_time_s;
}

double initiation_latency(const World& world, const Task& task, const Placement& placement) {
    // Post-placement occupancy per server: current hosted plus newly assigned.
    std::map<int, int> extra;
    for (const auto& [aid, sid] : placement.assignments)
        extra[world.server_of(sid)] += 1;

    double total = 0.0;
    for (const auto& aid : task.required_agents) {
        const auto& agent = world.agents[world.agent_of(aid)];
        if (agent.host)
            continue; // already running, warm start
        auto it = placement.assignments.find(aid);
        if (it == placement.assignments.end())
            throw UnassignedAgent(aid);
        int s = world.server_of(it->second);
        int count = static_cast<int>(world.servers[s].hosted.size()) + extra[s];
        total += world.servers[s].init_time_s(count);
    }
    return total;
}

double processing_latency(const Task& task) {
    return task.file_processing_time_s + task.llm_time_s;
}

CostBreakdown total_latency(double transmit_s, double migration_s, double initiation_s,
                            double processing_s) {
    CostBreakdown b;
    b.transmit_s = transmit_s;
    b.migration_s = migration_s;
    b.initiation_s = initiation_s;
    b.processing_s = processing_s;
    b.total_s = transmit_s + migration_s + initiation_s + processing_s;
    return b;
}

double cpu_cost(double total_s, double file_transfer_s, double memory_transfer_s) {
    double cost = total_s - (file_transfer_s + memory_transfer_s);
    if (cost < -1e-9)
        throw NegativeCost("cpu cost is negative: total " + std::to_string(total_s) +
                           " < transfers " +
                           std::to_string(file_transfer_s + memory_transfer_s));
    return std::max(cost, 0.0);
}

double storage_cost(std::span<const Task> tasks, std::span<const Agent> deployed_agents) {
    double total = 0.0;
    for (const auto& t : tasks)
        total += t.storage_gb;
    for (const auto& a : deployed_agents)
        total += a.memory_state_gb;
    return total;
}

double comm_cost(const std::vector<CommEvent>& events,
                 const std::function<int(const std::string&)>& server_of) {
    double total = 0.0;
    for (const auto& ev : events) {
        int from = server_of(ev.from_agent);
        int to = server_of(ev.to_agent);
        if (from >= 0 && to >= 0 && from != to)
            total += ev.size_mb;
    }
    return total;
}

double comm_latency(const World& world, int e1, int e2, double size_mb) {
    if (e1 == e2)
        return 0.0;
    int hops = world.net.hop_count(e1, e2);
    double eta = world.net.effective_bandwidth_mbps[e1][e2];
    return hops * world.net.per_hop_latency_s + safe_div(size_mb, eta);
}

// ---------------------------------------------------------------------------
// EAD

EadContext make_ead_context(const World& world, const Task& task,
                            const ObjectiveWeights& weights, const CostOptions& opts) {
    EadContext ctx;
    ctx.world = &world;
    ctx.task = &task;
    ctx.origin = world.server_of(task.origin_server);
    ctx.weights = weights;
    ctx.opts = opts;
    ctx.hops = world.net.all_hops();

    for (const auto& aid : task.required_agents) {
        int idx = world.agent_of(aid);
        if (!world.agents[idx].host)
            ctx.agent_order.push_back(idx);
    }
    // Fixed construction order: descending total requirement, ties by id.
    std::sort(ctx.agent_order.begin(), ctx.agent_order.end(), [&](int a, int b) {
        double ta = world.agents[a].requirements.total();
        double tb = world.agents[b].requirements.total();
        if (ta != tb)
            return ta > tb;
        return world.agents[a].id < world.agents[b].id;
    });

    // Candidate neighborhood: servers within the hop radius of the origin.
    for (int s = 0; s < world.net.size(); ++s) {
        int h = ctx.hops[ctx.origin][s];
        if (h >= 0 && h <= opts.candidate_radius)
            ctx.candidates.push_back(s);
    }
    // Fall back to all servers if some agent has no feasible candidate there.
    auto has_candidate = [&](const Agent& a) {
        for (int s : ctx.candidates) {
            const auto& srv = world.servers[s];
            if (static_cast<int>(srv.hosted.size()) < srv.max_agents &&
                a.requirements.fits_within(srv.remaining))
                return true;
        }
        return false;
    };
    // Symmetric co-location closure over the task's agents.
    ctx.colocation_peers.resize(ctx.agent_order.size());
    for (size_t i = 0; i < ctx.agent_order.size(); ++i) {
        const Agent& a = world.agents[ctx.agent_order[i]];
        for (const auto& peer : a.colocate_with)
            ctx.colocation_peers[i].insert(peer);
        for (size_t j = 0; j < ctx.agent_order.size(); ++j) {
            const Agent& b = world.agents[ctx.agent_order[j]];
            if (b.colocate_with.count(a.id))
                ctx.colocation_peers[i].insert(b.id);
        }
    }

    for (int idx : ctx.agent_order) {
        if (!has_candidate(world.agents[idx])) {
            ctx.candidates.clear();
            for (int s = 0; s < world.net.size(); ++s)
                ctx.candidates.push_back(s);
            break;
        }
    }
    return ctx;
}

bool ead_feasible(const EadContext& ctx, const std::vector<int>& assignment) {
    const World& world = *ctx.world;
    if (static_cast<int>(assignment.size()) != ctx.n_agents())
        return false;

    std::map<int, ResourceVector> demand;
    std::map<int, int> extra;
    std::map<std::string, int> where; // agent id -> server, for colocation checks
    for (int i = 0; i < ctx.n_agents(); ++i) {
        int s = assignment[i];
        if (std::find(ctx.candidates.begin(), ctx.candidates.end(), s) ==
            ctx.candidates.end())
            return false;
        const Agent& a = ctx.agent_at(i);
        demand[s] = demand[s] + a.requirements;
        extra[s] += 1;
        where[a.id] = s;
    }
    for (const auto& [s, req] : demand) {
        const auto& srv = world.servers[s];
        if (!req.fits_within(srv.remaining))
            return false;
        if (static_cast<int>(srv.hosted.size()) + extra[s] > srv.max_agents)
            return false;
    }
    // Hard co-location pairs must share a server.
    for (int i = 0; i < ctx.n_agents(); ++i) {
        const Agent& a = ctx.agent_at(i);
        for (const auto& peer : a.colocate_with) {
            int peer_server = -1;
            if (auto it = where.find(peer); it != where.end())
                peer_server = it->second;
            else {
                const Agent& p = world.agents[world.agent_of(peer)];
                if (p.host)
                    peer_server = world.server_of(*p.host);
            }
            if (peer_server >= 0 && peer_server != assignment[i])
                return false;
        }
    }
    return true;
}

double ead_objective(const EadContext& ctx, const std::vector<int>& assignment,
                     bool check_feasible) {
    if (check_feasible && !ead_feasible(ctx, assignment))
        throw InfeasiblePlacement("assignment violates the constraint block");

    const World& world = *ctx.world;
    std::map<int, int> extra;
    std::map<int, double> cpu_demand;
    std::map<std::string, int> where;
    for (int i = 0; i < ctx.n_agents(); ++i) {
        extra[assignment[i]] += 1;
        cpu_demand[assignment[i]] += ctx.agent_at(i).requirements.cpu;
        where[ctx.agent_at(i).id] = assignment[i];
    }

    // Resolve any agent (placed here or already hosted) to a server index.
    auto server_of_agent = [&](const std::string& id) -> int {
        if (auto it = where.find(id); it != where.end())
            return it->second;
        auto idx = world.agent_index.find(id);
        if (idx == world.agent_index.end())
            return -1;
        const Agent& a = world.agents[idx->second];
        return a.host ? world.server_of(*a.host) : -1;
    };

    double score = 0.0;

    // Startup term: state transfer from the origin plus initiation time at the
    // post-placement occupancy.
    for (int i = 0; i < ctx.n_agents(); ++i) {
        const Agent& a = ctx.agent_at(i);
        int s = assignment[i];
        double eta = world.net.effective_bandwidth_mbps[ctx.origin][s];
        score += safe_div(a.memory_state_gb * kMbPerGb, eta);
        int count = static_cast<int>(world.servers[s].hosted.size()) + extra[s];
        score += world.servers[s].init_time_s(count);
    }

    // CPU-load term: demanded compute over the server's remaining compute.
    for (const auto& [s, demand] : cpu_demand) {
        double rem = world.servers[s].remaining.cpu;
        if (demand > 0.0)
            score += demand / rem;
    }

    // Dependency communication term.
    double dep = 0.0;
    for (int i = 0; i < ctx.n_agents(); ++i) {
        const Agent& a = ctx.agent_at(i);
        for (const auto& peer : a.dependencies) {
            int ps = server_of_agent(peer);
            if (ps < 0)
                continue;
            dep += comm_latency(world, assignment[i], ps, dep_msg_size(a, peer, ctx.opts));
        }
    }
    score += ctx.weights.theta * dep;
    return score;
}

Placement to_placement(const EadContext& ctx, const std::vector<int>& assignment) {
    Placement p;
    for (int i = 0; i < ctx.n_agents(); ++i)
        p.assignments[ctx.agent_at(i).id] = ctx.world->servers[assignment[i]].id;
    p.feasible = ead_feasible(ctx, assignment);
    return p;
}

std::vector<int> from_placement(const EadContext& ctx, const Placement& placement) {
    std::vector<int> assignment(ctx.n_agents(), -1);
    for (int i = 0; i < ctx.n_agents(); ++i) {
        auto it = placement.assignments.find(ctx.agent_at(i).id);
        if (it == placement.assignments.end())
            throw UnassignedAgent(ctx.agent_at(i).id);
        assignment[i] = ctx.world->server_of(it->second);
    }
    return assignment;
}

double ead_objective(const World& world, const Task& task, const Placement& placement,
                     const ObjectiveWeights& weights, const CostOptions& opts) {
    EadContext ctx = make_ead_context(world, task, weights, opts);
    return ead_objective(ctx, from_placement(ctx, placement));
}

// ---------------------------------------------------------------------------
// EAM

NetGain net_gain(const World& world, const std::string& agent_id, int target,
                 const std::vector<std::pair<int, double>>& client_distribution,
                 const ObjectiveWeights& weights, const CostOptions& opts) {
    const Agent& agent = world.agents[world.agent_of(agent_id)];
    if (!agent.host)
        throw ModelError("net_gain requires a deployed agent: " + agent_id);
    int current = world.server_of(*agent.host);

    if (target != current) {
        const auto& dst = world.servers[target];
        if (static_cast<int>(dst.hosted.size()) + 1 > dst.max_agents ||
            !agent.requirements.fits_within(dst.remaining))
            throw TargetInfeasible("agent " + agent_id + " does not fit on " + dst.id);
    }

    NetGain g;
    for (const auto& [client, mass] : client_distribution) {
        g.latency_gain_s +=
            mass * (comm_latency(world, client, current, opts.nominal_msg_mb) -
                    comm_latency(world, client, target, opts.nominal_msg_mb));
    }

    double t_mig = migration_latency(world, agent, current, target);
    g.migration_cost_s = t_mig + weights.gamma * agent.memory_state_gb;

    double dep_delta = 0.0;
    for (const auto& peer : agent.dependencies) {
        const Agent& p = world.agents[world.agent_of(peer)];
        if (!p.host)
            continue;
        int ps = world.server_of(*p.host);
        double size = dep_msg_size(agent, peer, opts);
        dep_delta += comm_latency(world, target, ps, size) -
                     comm_latency(world, current, ps, size);
    }
    g.dependency_cost_s = weights.theta_dep * dep_delta;

    g.net_s = g.latency_gain_s - g.migration_cost_s - g.dependency_cost_s;
    return g;
}

NetGain net_gain(const World& world, const std::string& agent_id, int target,
                 int client_server, const ObjectiveWeights& weights,
                 const CostOptions& opts) {
    return net_gain(world, agent_id, target, {{client_server, 1.0}}, weights, opts);
}

} // namespace antllm
