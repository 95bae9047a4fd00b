#include "antllm/aco.hpp"

#include <algorithm>
#include <cmath>

namespace antllm {

namespace {

constexpr double kFallbackPenalty = 1e9;
constexpr double kHeuristicFloor = 1e-9;

} // namespace

std::mt19937_64 rng_substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    return std::mt19937_64(seq);
}

CapacityLedger::CapacityLedger(const World& world) {
    remaining.reserve(world.servers.size());
    counts.reserve(world.servers.size());
    for (const auto& s : world.servers) {
        remaining.push_back(s.remaining);
        counts.push_back(static_cast<int>(s.hosted.size()));
    }
}

bool CapacityLedger::fits(const World& world, const Agent& agent, int server) const {
    return counts[server] + 1 <= world.servers[server].max_agents &&
           agent.requirements.fits_within(remaining[server]);
}

void CapacityLedger::place(const Agent& agent, int server) {
    remaining[server] = remaining[server] - agent.requirements;
    counts[server] += 1;
}

double placement_heuristic(const EadContext& ctx, int pos, int server,
                           const std::vector<int>& partial,
                           const CapacityLedger& ledger) {
    const World& world = *ctx.world;
    const Agent& agent = ctx.agent_at(pos);
    const EdgeServer& srv = world.servers[server];
    constexpr double w = 1.0 / 3.0;

    // Initial score: the agent's estimated initial latency on this server —
    // shipping its state from the task origin (free on the origin itself)
    // plus startup at the post-placement instance count.
    double transfer_s = agent.memory_state_gb * kMbPerGb /
                        world.net.effective_bandwidth_mbps[ctx.origin][server];
    double est_init = transfer_s + srv.init_time_s(ledger.counts[server] + 1);
    double init_score = 1.0 / (1.0 + est_init);

    // Resource score: smallest post-placement remaining fraction across
    // components with nonzero capacity.
    ResourceVector after = ledger.remaining[server] - agent.requirements;
    double frac = 1.0;
    auto consider = [&](double rem, double cap) {
        if (cap > 0.0)
            frac = std::min(frac, rem / cap);
    };
    consider(after.cpu, srv.capacity.cpu);
    consider(after.memory_gb, srv.capacity.memory_gb);
    consider(after.storage_gb, srv.capacity.storage_gb);
    consider(after.bandwidth_mbps, srv.capacity.bandwidth_mbps);
    double resource_score = std::max(frac, 0.0);

    // Communication score: mean latency to dependency peers already placed on
    // this path; neutral (1.0) when no peer is placed yet.
    double comm_sum = 0.0;
    int peers = 0;
    for (int j = 0; j < pos; ++j) {
        if (partial[j] < 0)
            continue;
        const Agent& other = ctx.agent_at(j);
        bool related = agent.dependencies.count(other.id) ||
                       other.dependencies.count(agent.id);
        if (!related)
            continue;
        comm_sum += comm_latency(world, server, partial[j], ctx.opts.nominal_msg_mb);
        peers += 1;
    }
    double comm_score = peers > 0 ? 1.0 / (1.0 + comm_sum / peers) : 1.0;

    double eta = w * init_score + w * resource_score + w * comm_score;
    return std::max(eta, kHeuristicFloor);
}

int select_server(const std::vector<int>& candidates, const std::vector<double>& tau,
                  const std::vector<double>& eta, const AcoParams& params,
                  std::mt19937_64& rng) {
    if (candidates.empty())
        throw NoFeasibleServer{};
    std::vector<double> weight(candidates.size());
    double sum = 0.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        weight[i] = std::pow(tau[i], params.alpha) * std::pow(eta[i], params.beta);
        sum += weight[i];
    }
    std::uniform_real_distribution<double> dist(0.0, sum);
    double u = dist(rng);
    double acc = 0.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        acc += weight[i];
        if (u <= acc)
            return candidates[i];
    }
    return candidates.back();
}

AntPath construct_placement(std::mt19937_64& rng, const EadContext& ctx,
                            const PheromoneMatrix& tau, const AcoParams& params,
                            double penalty_score) {
    const World& world = *ctx.world;
    AntPath path;
    path.assignment.assign(ctx.n_agents(), -1);
    CapacityLedger ledger(world);

    // Where each agent id sits (placed on this path, or already hosted).
    auto resolve = [&](const std::string& id) -> int {
        for (int j = 0; j < ctx.n_agents(); ++j)
            if (ctx.agent_at(j).id == id)
                return path.assignment[j];
        auto it = world.agent_index.find(id);
        if (it != world.agent_index.end() && world.agents[it->second].host)
            return world.server_of(*world.agents[it->second].host);
        return -1;
    };

    for (int pos = 0; pos < ctx.n_agents(); ++pos) {
        const Agent& agent = ctx.agent_at(pos);

        // A placed co-location peer pins the choice to its server.
        int pinned = -1;
        for (const auto& peer : ctx.colocation_peers[pos]) {
            int s = resolve(peer);
            if (s >= 0) {
                pinned = s;
                break;
            }
        }

        std::vector<int> feasible;
        std::vector<double> tau_row, eta_row;
        for (int s : ctx.candidates) {
            if (pinned >= 0 && s != pinned)
                continue;
            if (!ledger.fits(world, agent, s))
                continue;
            feasible.push_back(s);
            tau_row.push_back(tau[pos][s]);
            eta_row.push_back(placement_heuristic(ctx, pos, s, path.assignment, ledger));
        }
        if (feasible.empty()) {
            path.feasible = false;
            path.score = penalty_score;
            return path;
        }
        int chosen = select_server(feasible, tau_row, eta_row, params, rng);
        path.assignment[pos] = chosen;
        ledger.place(agent, chosen);
    }
    path.feasible = true;
    path.score = ead_objective(ctx, path.assignment, /*check_feasible=*/false);
    return path;
}

void update_pheromone_placement(PheromoneMatrix& tau, const AntPath& best,
                                const AcoParams& params) {
    for (auto& row : tau.tau)
        for (auto& t : row)
            t = std::max(t * (1.0 - params.rho), params.tau_min);
    if (!best.feasible)
        return;
    double deposit = params.q / (1.0 + best.score);
    for (size_t pos = 0; pos < best.assignment.size(); ++pos) {
        int s = best.assignment[pos];
        if (s >= 0)
            tau[static_cast<int>(pos)][s] =
                std::max(tau[static_cast<int>(pos)][s] + deposit, params.tau_min);
    }
}

AlpResult alp_solve(const World& world, const Task& task, const AcoParams& params,
                    const ObjectiveWeights& weights, const CostOptions& opts) {
    EadContext ctx = make_ead_context(world, task, weights, opts);

    if (ctx.n_agents() == 0) {
        // Everything required is already running.
        Placement p;
        p.feasible = true;
        return {p, 0.0};
    }

    PheromoneMatrix tau(ctx.n_agents(), world.net.size(), params.tau_init);

    AntPath global_best;
    global_best.score = std::numeric_limits<double>::infinity();
    double worst_feasible = -1.0;

    for (int iter = 0; iter < params.iterations; ++iter) {
        AntPath iter_best;
        iter_best.score = std::numeric_limits<double>::infinity();
        for (int ant = 0; ant < params.num_ants; ++ant) {
            double penalty =
                worst_feasible > 0.0 ? 10.0 * worst_feasible : kFallbackPenalty;
            auto rng = rng_substream(params.seed, static_cast<std::uint64_t>(iter),
                                 static_cast<std::uint64_t>(ant));
            AntPath path = construct_placement(rng, ctx, tau, params, penalty);
            if (path.feasible) {
                worst_feasible = std::max(worst_feasible, path.score);
                if (path.score < iter_best.score)
                    iter_best = path;
                if (path.score < global_best.score)
                    global_best = path;
            }
        }
        update_pheromone_placement(tau, iter_best.feasible ? iter_best : AntPath{},
                                   params);
    }

    if (!global_best.feasible)
        throw Infeasible("no ant found a legal placement for task " + task.id);
    return {to_placement(ctx, global_best.assignment), global_best.score};
}

double migration_heuristic(double net_gain_s) {
    return 1.0 / (1.0 + std::exp(-net_gain_s));
}

std::optional<MigrationPlan> alm_solve(const World& world, const std::string& agent_id,
                                       int client_server, const AcoParams& params,
                                       const ObjectiveWeights& weights,
                                       const CostOptions& opts) {
    const Agent& agent = world.agents[world.agent_of(agent_id)];
    if (!agent.host)
        throw ModelError("alm_solve requires a deployed agent: " + agent_id);
    int current = world.server_of(*agent.host);

    auto feasible_target = [&](int s) {
        const auto& dst = world.servers[s];
        return static_cast<int>(dst.hosted.size()) + 1 <= dst.max_agents &&
               agent.requirements.fits_within(dst.remaining);
    };

    // Search space: adjacent servers; widen to the 2-hop neighborhood when no
    // neighbor can take the agent.
    std::vector<int> candidates;
    for (int s : world.net.adjacency[current])
        if (feasible_target(s))
            candidates.push_back(s);
    if (candidates.empty()) {
        auto hops = world.net.all_hops();
        for (int s = 0; s < world.net.size(); ++s)
            if (s != current && hops[current][s] > 0 && hops[current][s] <= 2 &&
                feasible_target(s))
                candidates.push_back(s);
    }
    if (candidates.empty())
        return std::nullopt;
    std::sort(candidates.begin(), candidates.end());

    std::vector<NetGain> gains(candidates.size());
    std::vector<double> eta(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        gains[i] = net_gain(world, agent_id, candidates[i], client_server, weights, opts);
        eta[i] = migration_heuristic(gains[i].net_s);
    }

    std::vector<double> tau(candidates.size(), params.tau_init);
    std::vector<int> positions(candidates.size());
    for (size_t i = 0; i < positions.size(); ++i)
        positions[i] = static_cast<int>(i);

    int best = -1; // position of the best sampled candidate
    for (int iter = 0; iter < params.iterations; ++iter) {
        int iter_best = -1;
        for (int ant = 0; ant < params.num_ants; ++ant) {
            auto rng = rng_substream(params.seed ^ 0x9e3779b97f4a7c15ull,
                                 static_cast<std::uint64_t>(iter),
                                 static_cast<std::uint64_t>(ant));
            int pos = select_server(positions, tau, eta, params, rng);
            auto better = [&](int lhs, int rhs) {
                if (rhs < 0)
                    return true;
                if (gains[lhs].net_s != gains[rhs].net_s)
                    return gains[lhs].net_s > gains[rhs].net_s;
                return candidates[lhs] < candidates[rhs];
            };
            if (better(pos, iter_best))
                iter_best = pos;
            if (better(pos, best))
                best = pos;
        }
        for (auto& t : tau)
            t = std::max(t * (1.0 - params.rho), params.tau_min);
        if (iter_best >= 0) {
            double cost = std::max(0.0, -gains[iter_best].net_s);
            tau[iter_best] += params.q / (1.0 + cost);
        }
    }

    if (best < 0 || gains[best].net_s <= 0.0)
        return std::nullopt;
    return MigrationPlan{agent_id, world.servers[current].id,
                         world.servers[candidates[best]].id, gains[best]};
}

} // namespace antllm
