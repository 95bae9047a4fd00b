#include "antllm/sim.hpp"

#include "antllm/baselines.hpp"
#include "antllm/refiner.hpp"

#include <algorithm>

namespace antllm {

Policy policy_from_string(const std::string& name) {
    if (name == "antllm")
        return Policy::AntLLM;
    if (name == "greedy")
        return Policy::Greedy;
    if (name == "random")
        return Policy::Random;
    if (name == "polling")
        return Policy::Polling;
    throw ModelError("unknown policy: " + name);
}

std::string to_string(Policy policy) {
    switch (policy) {
    case Policy::AntLLM: return "antllm";
    case Policy::Greedy: return "greedy";
    case Policy::Random: return "random";
    case Policy::Polling: return "polling";
    }
    return "unknown";
}

std::set<Trigger> check_triggers(const World& world, const std::string& agent_id,
                                 int client_server, const SimConfig& config) {
    std::set<Trigger> fired;
    const Agent& agent = world.agents[world.agent_of(agent_id)];
    if (!agent.host)
        return fired;
    int host = world.server_of(*agent.host);

    if (world.net.hop_count(client_server, host) > config.hop_threshold)
        fired.insert(Trigger::PositionDeviation);

    const EdgeServer& srv = world.servers[host];
    auto low = [&](double rem, double cap) {
        return cap > 0.0 && rem / cap < config.resource_security_fraction;
    };
    if (low(srv.remaining.cpu, srv.capacity.cpu) ||
        low(srv.remaining.memory_gb, srv.capacity.memory_gb) ||
        low(srv.remaining.storage_gb, srv.capacity.storage_gb) ||
        low(srv.remaining.bandwidth_mbps, srv.capacity.bandwidth_mbps))
        fired.insert(Trigger::ResourceBottleneck);
    return fired;
}

TaskMetrics MetricsRecord::totals() const {
    TaskMetrics t;
    t.task_id = "total";
    for (const auto& r : rows) {
        t.initial_time_s += r.initial_time_s;
        t.migration_time_s += r.migration_time_s;
        t.process_time_s += r.process_time_s;
        t.total_time_s += r.total_time_s;
        t.cpu_usage += r.cpu_usage;
        t.memory_usage_gb += r.memory_usage_gb;
        t.disk_usage_gb += r.disk_usage_gb;
        t.instance_count += r.instance_count;
    }
    return t;
}

namespace {

struct RowState {
    TaskMetrics metrics;
    double file_transfer_s = 0.0;   // s_r / eta_e
    double memory_transfer_s = 0.0; // accumulated migration state transfers
};

AlpResult place_with_policy(const World& world, const Task& task, Policy policy,
                            RefinerKind refiner, const SimInputs& in,
                            std::uint64_t task_seed) {
    switch (policy) {
    case Policy::Greedy:
        return greedy_place(world, task, in.weights, in.cost);
    case Policy::Random:
        return random_place(world, task, task_seed, in.weights, in.cost);
    case Policy::Polling:
        return polling_place(world, task, in.weights, in.cost);
    case Policy::AntLLM: {
        AcoParams params = in.aco;
        params.seed = task_seed;
        AlpResult result = alp_solve(world, task, params, in.weights, in.cost);
        if (refiner == RefinerKind::None)
            return result;
        RefinementRequest request{result.placement, result.score, &world, &task,
                                  in.weights, in.cost};
        LocalSearchRefiner local;
        return refine(request, local);
    }
    }
    throw ModelError("unreachable policy");
}

} // namespace

MetricsRecord run_simulation(const SimInputs& inputs, Policy policy,
                             RefinerKind refiner) {
    World world = inputs.world;
    world.rebuild_index();
    world.sync_occupancy();

    MetricsRecord record;
    std::vector<RowState> rows;
    std::map<std::string, int> owner; // agent id -> row index of the task that started it

    auto mobility_rng = rng_substream(inputs.seed, 0x6d6f7665ull, 0); // "move"

    // Client start position: scripted path start, else first task's origin,
    // else server 0.
    int client = 0;
    if (!inputs.sim.user_path.empty())
        client = world.server_of(inputs.sim.user_path.front());
    else if (!inputs.tasks.empty())
        client = world.server_of(inputs.tasks.front().origin_server);

    std::size_t next_task = 0;
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    for (int epoch = 0; epoch < inputs.sim.epochs; ++epoch) {
        // 1. Client movement.
        if (!inputs.sim.user_path.empty()) {
            std::size_t i = std::min<std::size_t>(epoch, inputs.sim.user_path.size() - 1);
            client = world.server_of(inputs.sim.user_path[i]);
        } else if (uni(mobility_rng) < inputs.sim.move_probability &&
                   !world.net.adjacency[client].empty()) {
            const auto& neighbors = world.net.adjacency[client];
            std::uniform_int_distribution<std::size_t> pick(0, neighbors.size() - 1);
            client = neighbors[pick(mobility_rng)];
        }

        // 2. Task arrivals, placed at the client's current access server.
        for (int k = 0; k < inputs.sim.tasks_per_epoch && next_task < inputs.tasks.size();
             ++k, ++next_task) {
            Task task = inputs.tasks[next_task];
            task.origin_server = world.servers[client].id;

            AlpResult placed;
            try {
                placed = place_with_policy(world, task, policy, refiner, inputs,
                                           rng_substream(inputs.seed, 0x7461736bull,
                                                         next_task)());
            } catch (const Infeasible&) {
                record.infeasible_tasks += 1;
                continue;
            }

            RowState row;
            row.metrics.task_id = task.id;
            double transmit = transmit_latency(world, task);
            double init = initiation_latency(world, task, placed.placement);
            double process = processing_latency(task);
            row.file_transfer_s =
                transmit - task.prompt_time_s;

            // Commit the placement. Shipping each new instance's state from
            // the access server to its host is part of the task's startup.
            double deploy_transfer = 0.0;
            for (const auto& [aid, sid] : placed.placement.assignments) {
                Agent& agent = world.agents[world.agent_of(aid)];
                int host = world.server_of(sid);
                apply_assignment(world.servers[host], agent);
                agent.host = sid;
                owner[aid] = static_cast<int>(rows.size());
                row.metrics.instance_count += 1;
                row.metrics.memory_usage_gb += agent.requirements.memory_gb;
                if (agent.memory_state_gb > 0.0 && host != client)
                    deploy_transfer +=
                        agent.memory_state_gb * kMbPerGb /
                        world.net.effective_bandwidth_mbps[client][host];
            }
            row.memory_transfer_s += deploy_transfer;

            // Inter-agent messages cross the backbone when the endpoints
            // landed on different servers.
            double comm = 0.0;
            for (const auto& ev : task.comm_events) {
                const Agent& from = world.agents[world.agent_of(ev.from_agent)];
                const Agent& to = world.agents[world.agent_of(ev.to_agent)];
                if (from.host && to.host)
                    comm += comm_latency(world, world.server_of(*from.host),
                                         world.server_of(*to.host), ev.size_mb);
            }

            row.metrics.initial_time_s = transmit + deploy_transfer + init;
            row.metrics.process_time_s = process + comm;
            row.metrics.total_time_s = transmit + deploy_transfer + init + process + comm;
            row.metrics.disk_usage_gb = task.storage_gb;
            for (const auto& aid : task.required_agents)
                row.metrics.disk_usage_gb +=
                    world.agents[world.agent_of(aid)].memory_state_gb;
            rows.push_back(std::move(row));
        }

        // 3. Periodic trigger evaluation and migration.
        for (const auto& a : world.agents) {
            if (!a.host)
                continue;
            auto fired = check_triggers(world, a.id, client, inputs.sim);
            if (fired.empty())
                continue;

            auto plan = alm_solve(world, a.id, client, inputs.aco, inputs.weights,
                                  inputs.cost);
            if (policy == Policy::AntLLM)
                plan = refine_migration(world, plan, client, inputs.weights, inputs.cost);
            if (!plan) {
                record.deferred_migrations += 1;
                continue;
            }

            int src = world.server_of(plan->source);
            int dst = world.server_of(plan->target);
            Agent& agent = world.agents[world.agent_of(a.id)];
            double mig = migration_latency(world, agent, src, dst);
            double mem_transfer =
                mig - world.servers[src].export_time_s - world.servers[dst].load_time_s -
                world.servers[dst].init_time_s(
                    static_cast<int>(world.servers[dst].hosted.size()) + 1);

            release_assignment(world.servers[src], agent);
            try {
                apply_assignment(world.servers[dst], agent);
            } catch (...) {
                apply_assignment(world.servers[src], agent); // roll back
                throw;
            }
            agent.host = plan->target;

            record.migrations.push_back(
                {epoch, a.id, plan->source, plan->target, plan->gain.net_s});
            if (auto it = owner.find(a.id); it != owner.end()) {
                auto& row = rows[it->second];
                row.metrics.migration_time_s += mig;
                row.metrics.total_time_s += mig;
                row.memory_transfer_s += mem_transfer;
            }
        }
    }

    for (auto& row : rows) {
        row.metrics.cpu_usage = cpu_cost(row.metrics.total_time_s, row.file_transfer_s,
                                         row.memory_transfer_s);
        record.rows.push_back(row.metrics);
    }
    return record;
}

} // namespace antllm
