#include "antllm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace antllm {

namespace {

// Shared sequential constructor: walks the construction order, offers the
// feasible servers for each agent to `choose`, and keeps the capacity ledger.
template <typename Chooser>
AlpResult construct_with(const World& world, const Task& task,
                         const ObjectiveWeights& weights, const CostOptions& opts,
                         Chooser&& choose) {
    EadContext ctx = make_ead_context(world, task, weights, opts);
    if (ctx.n_agents() == 0)
        return {Placement{.assignments = {}, .feasible = true}, 0.0};

    std::vector<int> assignment(ctx.n_agents(), -1);
    CapacityLedger ledger(world);

    auto resolve = [&](const std::string& id) -> int {
        for (int j = 0; j < ctx.n_agents(); ++j)
            if (ctx.agent_at(j).id == id)
                return assignment[j];
        auto it = world.agent_index.find(id);
        if (it != world.agent_index.end() && world.agents[it->second].host)
            return world.server_of(*world.agents[it->second].host);
        return -1;
    };

    for (int pos = 0; pos < ctx.n_agents(); ++pos) {
        const Agent& agent = ctx.agent_at(pos);
        int pinned = -1;
        for (const auto& peer : ctx.colocation_peers[pos]) {
            int s = resolve(peer);
            if (s >= 0) {
                pinned = s;
                break;
            }
        }
        std::vector<int> feasible;
        for (int s : ctx.candidates) {
            if (pinned >= 0 && s != pinned)
                continue;
            if (ledger.fits(world, agent, s))
                feasible.push_back(s);
        }
        if (feasible.empty())
            throw Infeasible("no feasible server for agent " + agent.id);
        int chosen = choose(ctx, pos, assignment, ledger, feasible);
        assignment[pos] = chosen;
        ledger.place(agent, chosen);
    }
    return {to_placement(ctx, assignment),
            ead_objective(ctx, assignment, /*check_feasible=*/false)};
}

} // namespace

AlpResult greedy_place(const World& world, const Task& task,
                       const ObjectiveWeights& weights, const CostOptions& opts) {
    return construct_with(world, task, weights, opts,
                          [&](const EadContext& ctx, int pos,
                              const std::vector<int>& partial,
                              const CapacityLedger& ledger,
                              const std::vector<int>& feasible) {
                              int best = feasible.front();
                              double best_score = -1.0;
                              for (int s : feasible) {
                                  double score =
                                      placement_heuristic(ctx, pos, s, partial, ledger);
                                  if (score > best_score) {
                                      best_score = score;
                                      best = s;
                                  }
                              }
                              return best;
                          });
}

AlpResult random_place(const World& world, const Task& task, std::uint64_t seed,
                       const ObjectiveWeights& weights, const CostOptions& opts) {
    std::mt19937_64 rng(seed);
    return construct_with(world, task, weights, opts,
                          [&](const EadContext&, int, const std::vector<int>&,
                              const CapacityLedger&, const std::vector<int>& feasible) {
                              std::uniform_int_distribution<std::size_t> dist(
                                  0, feasible.size() - 1);
                              return feasible[dist(rng)];
                          });
}

AlpResult polling_place(const World& world, const Task& task,
                        const ObjectiveWeights& weights, const CostOptions& opts) {
    // Server visit order: ascending id.
    std::vector<int> order(world.servers.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return world.servers[a].id < world.servers[b].id;
    });
    // The cursor resumes where the previous task left off: every agent already
    // hosted anywhere advanced it once, so its start is derived from the total
    // hosted count rather than reset to the first server.
    std::size_t hosted = 0;
    for (const auto& s : world.servers)
        hosted += s.hosted.size();
    std::size_t cursor = hosted % order.size();
    return construct_with(world, task, weights, opts,
                          [&](const EadContext&, int, const std::vector<int>&,
                              const CapacityLedger&, const std::vector<int>& feasible) {
                              for (std::size_t step = 0; step < order.size(); ++step) {
                                  int s = order[(cursor + step) % order.size()];
                                  if (std::find(feasible.begin(), feasible.end(), s) !=
                                      feasible.end()) {
                                      cursor = (cursor + step + 1) % order.size();
                                      return s;
                                  }
                              }
                              return feasible.front();
                          });
}

AlpResult brute_force_optimal(const World& world, const Task& task,
                              const ObjectiveWeights& weights, const CostOptions& opts,
                              std::size_t budget) {
    EadContext ctx = make_ead_context(world, task, weights, opts);
    const int n = ctx.n_agents();
    if (n == 0)
        return {Placement{.assignments = {}, .feasible = true}, 0.0};

    const std::size_t base = ctx.candidates.size();
    double states = std::pow(static_cast<double>(base), n);
    if (states > static_cast<double>(budget))
        throw BudgetExceeded("oracle state space " + std::to_string(states) +
                             " exceeds budget");

    std::vector<int> digits(n, 0);
    std::vector<int> assignment(n, -1);
    bool found = false;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<int> best;

    while (true) {
        for (int i = 0; i < n; ++i)
            assignment[i] = ctx.candidates[digits[i]];
        if (ead_feasible(ctx, assignment)) {
            double score = ead_objective(ctx, assignment, /*check_feasible=*/false);
            if (score < best_score) {
                best_score = score;
                best = assignment;
                found = true;
            }
        }
        int pos = n - 1;
        while (pos >= 0 && digits[pos] == static_cast<int>(base) - 1)
            digits[pos--] = 0;
        if (pos < 0)
            break;
        digits[pos] += 1;
    }

    if (!found)
        throw Infeasible("no feasible assignment exists for task " + task.id);
    return {to_placement(ctx, best), best_score};
}

std::optional<MigrationPlan> oracle_best_migration(const World& world,
                                                   const std::string& agent_id,
                                                   int client_server,
                                                   const ObjectiveWeights& weights,
                                                   const CostOptions& opts) {
    const Agent& agent = world.agents[world.agent_of(agent_id)];
    if (!agent.host)
        throw ModelError("oracle_best_migration requires a deployed agent");
    int current = world.server_of(*agent.host);

    auto feasible_target = [&](int s) {
        const auto& dst = world.servers[s];
        return static_cast<int>(dst.hosted.size()) + 1 <= dst.max_agents &&
               agent.requirements.fits_within(dst.remaining);
    };

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
    std::sort(candidates.begin(), candidates.end());

    std::optional<MigrationPlan> best;
    for (int s : candidates) {
        NetGain g = net_gain(world, agent_id, s, client_server, weights, opts);
        if (!best || g.net_s > best->gain.net_s) {
            best = MigrationPlan{agent_id, world.servers[current].id,
                                 world.servers[s].id, g};
        }
    }
    if (best && best->gain.net_s > 0.0)
        return best;
    return std::nullopt;
}

} // namespace antllm
