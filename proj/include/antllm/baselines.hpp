#pragma once

#include "antllm/aco.hpp"

namespace antllm {

// Per agent, pick the feasible server with the best heuristic score
// (capacity, startup, and dependency proximity); ties go to the lowest id.
AlpResult greedy_place(const World& world, const Task& task,
                       const ObjectiveWeights& weights, const CostOptions& opts = {});

// Uniform choice among feasible servers per agent.
AlpResult random_place(const World& world, const Task& task, std::uint64_t seed,
                       const ObjectiveWeights& weights, const CostOptions& opts = {});

// Round-robin cursor over servers in id order, persisted across the task's
// agents; infeasible servers are skipped.
AlpResult polling_place(const World& world, const Task& task,
                        const ObjectiveWeights& weights, const CostOptions& opts = {});

// Exhaustive enumeration of every assignment map, filtered by the constraint
// block; exact argmin of the placement objective. Throws BudgetExceeded when
// the state space exceeds `budget`.
AlpResult brute_force_optimal(const World& world, const Task& task,
                              const ObjectiveWeights& weights, const CostOptions& opts = {},
                              std::size_t budget = 1'000'000);

// Exact migration oracle: enumerate the same candidate set alm_solve searches
// and return the max-net-gain target (only when its net gain is positive).
std::optional<MigrationPlan> oracle_best_migration(const World& world,
                                                   const std::string& agent_id,
                                                   int client_server,
                                                   const ObjectiveWeights& weights,
                                                   const CostOptions& opts = {});

} // namespace antllm
