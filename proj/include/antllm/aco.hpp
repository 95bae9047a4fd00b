#pragma once

#include "antllm/cost.hpp"

#include <random>

namespace antllm {

struct AcoParams {
    double alpha = 1.0;  // pheromone exponent
    double beta = 2.0;   // heuristic exponent
    double rho = 0.1;    // evaporation rate, 0 < rho < 1
    double q = 1.0;      // deposit constant
    int num_ants = 20;
    int iterations = 100;
    double tau_init = 1.0;
    double tau_min = 1e-6;
    std::uint64_t seed = 0;
};

// Dense pheromone matrix indexed [agent position][server].
struct PheromoneMatrix {
    std::vector<std::vector<double>> tau;

    PheromoneMatrix(int rows, int cols, double init)
        : tau(rows, std::vector<double>(cols, init)) {}
    std::vector<double>& operator[](int row) { return tau[row]; }
    const std::vector<double>& operator[](int row) const { return tau[row]; }
};

struct MigrationPlan {
    std::string agent_id;
    std::string source;
    std::string target;
    NetGain gain;
};

// Running capacity ledger used while one ant builds a path.
struct CapacityLedger {
    std::vector<ResourceVector> remaining;
    std::vector<int> counts; // hosted agents per server

    explicit CapacityLedger(const World& world);
    bool fits(const World& world, const Agent& agent, int server) const;
    void place(const Agent& agent, int server);
};

// Desirability of putting `agent` (at position `pos` in the construction
// order) on `server`, given the partially built assignment. Combines an
// initiation score, a resource-headroom score, and a score for communication
// to already placed dependency peers. Always positive.
double placement_heuristic(const EadContext& ctx, int pos, int server,
                           const std::vector<int>& partial,
                           const CapacityLedger& ledger);

// Roulette-wheel selection with probabilities tau^alpha * eta^beta, normalized
// over the candidates. Throws NoFeasibleServer on an empty candidate list.
struct NoFeasibleServer : ModelError {
    NoFeasibleServer() : ModelError("no feasible server for agent") {}
};
int select_server(const std::vector<int>& candidates, const std::vector<double>& tau,
                  const std::vector<double>& eta, const AcoParams& params,
                  std::mt19937_64& rng);

struct AntPath {
    std::vector<int> assignment;
    double score = 0.0;
    bool feasible = false;
};

// One ant's full construction pass. Infeasible paths are scored with a
// penalty (10x the worst feasible score seen so far), never thrown.
AntPath construct_placement(std::mt19937_64& rng, const EadContext& ctx,
                            const PheromoneMatrix& tau, const AcoParams& params,
                            double penalty_score);

// Evaporate everything, reinforce the iteration-best path, floor at tau_min.
void update_pheromone_placement(PheromoneMatrix& tau, const AntPath& best,
                                const AcoParams& params);

struct AlpResult {
    Placement placement;
    double score = 0.0;
};

// Ant-colony placement solver. Deterministic per seed. Throws Infeasible when
// no ant ever finds a legal path.
AlpResult alp_solve(const World& world, const Task& task, const AcoParams& params,
                    const ObjectiveWeights& weights, const CostOptions& opts = {});

// Logistic squashing of a migration's net gain into a positive heuristic.
double migration_heuristic(double net_gain_s);

// Ant-colony migration solver over the neighbors of the agent's current
// server (expanding to the 2-hop neighborhood when no neighbor is feasible).
// Returns a plan only when the best target has strictly positive net gain.
std::optional<MigrationPlan> alm_solve(const World& world, const std::string& agent_id,
                                       int client_server, const AcoParams& params,
                                       const ObjectiveWeights& weights,
                                       const CostOptions& opts = {});

} // namespace antllm
