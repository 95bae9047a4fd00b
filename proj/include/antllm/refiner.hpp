#pragma once

#include "antllm/aco.hpp"

#include <memory>

namespace antllm {

// Snapshot handed to a refiner implementation: the incumbent plan plus
// everything needed to evaluate a counter-proposal.
struct RefinementRequest {
    Placement incumbent;
    double incumbent_score = 0.0;
    const World* world = nullptr;
    const Task* task = nullptr;
    ObjectiveWeights weights;
    CostOptions opts;
};

// A refiner proposes a replacement placement, or nothing. Implementations may
// fail arbitrarily; the refine() wrapper guards the result.
class Refiner {
  public:
    virtual ~Refiner() = default;
    virtual std::optional<Placement> propose(const RefinementRequest& request) = 0;
};

// Validation wrapper: the proposal is adopted only if it is feasible and
// strictly better than the incumbent; otherwise the incumbent is returned
// unchanged. Never throws for implementation failures.
AlpResult refine(const RefinementRequest& request, Refiner& refiner);

// Deterministic stand-in for the LLM stage: best-improvement single-agent
// relocation until no move helps, bounded by a move budget.
class LocalSearchRefiner : public Refiner {
  public:
    explicit LocalSearchRefiner(int move_budget = 100) : move_budget_(move_budget) {}
    std::optional<Placement> propose(const RefinementRequest& request) override;

  private:
    int move_budget_;
};

// Chat-completion-compatible HTTP refiner. The reply must contain a fenced
// block of `agent_id -> server_id` lines; anything else degrades to "no
// candidate". The auth token is read from the named environment variable.
struct RemoteRefinerConfig {
    std::string url;          // e.g. http://host:port/v1/chat/completions
    std::string model;
    std::string token_env = "ANTLLM_API_TOKEN";
    double timeout_s = 10.0;
};

class RemoteRefiner : public Refiner {
  public:
    explicit RemoteRefiner(RemoteRefinerConfig config) : config_(std::move(config)) {}
    std::optional<Placement> propose(const RefinementRequest& request) override;

    // Prompt serialization and reply parsing, exposed for tests.
    static std::string build_prompt(const RefinementRequest& request);
    static std::optional<Placement> parse_reply(const std::string& reply);

  private:
    RemoteRefinerConfig config_;
};

// Migration-side counterpart: re-validate a proposed target; keep the
// incumbent plan unless the proposal is feasible and strictly higher-gain.
std::optional<MigrationPlan> refine_migration(const World& world,
                                              const std::optional<MigrationPlan>& incumbent,
                                              int client_server,
                                              const ObjectiveWeights& weights,
                                              const CostOptions& opts = {});

} // namespace antllm
