#include "antllm/baselines.hpp"
#include "antllm/refiner.hpp"
#include "antllm/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

using namespace antllm;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;

struct CommonArgs {
    std::string scenario_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string policy = "antllm";
    std::string refiner = "local";
    std::string out;
    std::string format = "csv";
    std::string remote_url;
    std::string remote_model;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_scenario = true) {
    auto* sc = cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file");
    if (needs_scenario)
        sc->required();
    cmd->add_option("--seed", args.seed, "Override the scenario seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--policy", args.policy, "Placement policy")
        ->check(CLI::IsMember({"antllm", "greedy", "random", "polling"}));
    cmd->add_option("--refiner", args.refiner, "Refinement stage")
        ->check(CLI::IsMember({"none", "local", "remote"}));
    cmd->add_option("--out", args.out, "Output file (default: stdout)");
    cmd->add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--remote-url", args.remote_url,
                    "Chat-completion endpoint for --refiner remote");
    cmd->add_option("--remote-model", args.remote_model,
                    "Model name for --refiner remote");
}

Scenario load_with_overrides(const CommonArgs& args) {
    Scenario sc = load_scenario(args.scenario_path);
    if (args.seed_set) {
        sc.seed = args.seed;
        sc.aco.seed = args.seed;
    }
    return sc;
}

RefinerKind refiner_kind(const std::string& name) {
    if (name == "none")
        return RefinerKind::None;
    if (name == "remote")
        return RefinerKind::Remote;
    return RefinerKind::Local;
}

std::unique_ptr<Refiner> make_refiner(const CommonArgs& args) {
    if (args.refiner == "none")
        return nullptr;
    if (args.refiner == "remote") {
        RemoteRefinerConfig config;
        config.url = args.remote_url;
        config.model = args.remote_model;
        return std::make_unique<RemoteRefiner>(config);
    }
    return std::make_unique<LocalSearchRefiner>();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void emit(const CommonArgs& args, const std::string& text) {
    if (args.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.out);
    if (!out)
        throw ModelError("cannot write output file: " + args.out);
    out << text;
}

// Sequentially place every task of the scenario, committing each placement so
// later tasks see the occupied capacity.
struct PlacementRun {
    std::vector<std::pair<std::string, AlpResult>> results; // task id -> result
    std::vector<std::string> infeasible;
};

PlacementRun place_all(Scenario& sc, const CommonArgs& args) {
    Policy policy = policy_from_string(args.policy);
    auto refiner = make_refiner(args);
    PlacementRun run;
    for (const Task& task : sc.tasks) {
        AlpResult result;
        try {
            switch (policy) {
            case Policy::Greedy:
                result = greedy_place(sc.world, task, sc.weights, sc.cost);
                break;
            case Policy::Random:
                result = random_place(sc.world, task, sc.seed, sc.weights, sc.cost);
                break;
            case Policy::Polling:
                result = polling_place(sc.world, task, sc.weights, sc.cost);
                break;
            case Policy::AntLLM: {
                AcoParams params = sc.aco;
                result = alp_solve(sc.world, task, params, sc.weights, sc.cost);
                if (refiner) {
                    RefinementRequest request{result.placement, result.score,
                                              &sc.world, &task, sc.weights, sc.cost};
                    result = refine(request, *refiner);
                }
                break;
            }
            }
        } catch (const Infeasible&) {
            run.infeasible.push_back(task.id);
            continue;
        }
        for (const auto& [aid, sid] : result.placement.assignments) {
            Agent& agent = sc.world.agents[sc.world.agent_of(aid)];
            apply_assignment(sc.world.servers[sc.world.server_of(sid)], agent);
            agent.host = sid;
        }
        run.results.emplace_back(task.id, std::move(result));
    }
    return run;
}

int cmd_place(const CommonArgs& args) {
    Scenario sc = load_with_overrides(args);
    PlacementRun run = place_all(sc, args);

    std::ostringstream os;
    if (args.format == "csv") {
        os << "task_id,agent_id,server,score\n";
        for (const auto& [tid, result] : run.results)
            for (const auto& [aid, sid] : result.placement.assignments)
                os << tid << ',' << aid << ',' << sid << ',' << fmt(result.score)
                   << '\n';
    } else {
        json j = json::array();
        for (const auto& [tid, result] : run.results) {
            json assignments = json::object();
            for (const auto& [aid, sid] : result.placement.assignments)
                assignments[aid] = sid;
            j.push_back({{"task_id", tid},
                         {"assignments", assignments},
                         {"score", result.score}});
        }
        os << j.dump(2) << '\n';
    }
    emit(args, os.str());
    if (!run.infeasible.empty()) {
        for (const auto& tid : run.infeasible)
            std::cerr << "infeasible task: " << tid << '\n';
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_migrate(const CommonArgs& args, const std::string& client_id) {
    Scenario sc = load_with_overrides(args);

    // Deploy every task first so there is something to migrate; then judge each
    // deployed agent from the client's access server.
    PlacementRun run = place_all(sc, args);
    if (!run.infeasible.empty())
        return kExitInfeasible;

    std::string at = client_id;
    if (at.empty()) {
        if (sc.tasks.empty())
            throw ValidationError({"migrate: no tasks and no --client given"});
        at = sc.tasks.front().origin_server;
    }
    if (!sc.world.server_index.count(at))
        throw ValidationError({"migrate: unknown client server '" + at + "'"});
    int client = sc.world.server_of(at);

    bool use_refiner = args.policy == "antllm" && args.refiner != "none";
    std::ostringstream os;
    json j = json::array();
    if (args.format == "csv")
        os << "agent_id,source,target,net_gain_s\n";
    for (const auto& agent : sc.world.agents) {
        if (!agent.host)
            continue;
        auto plan = alm_solve(sc.world, agent.id, client, sc.aco, sc.weights, sc.cost);
        if (use_refiner)
            plan = refine_migration(sc.world, plan, client, sc.weights, sc.cost);
        std::string target = plan ? plan->target : "none";
        double net = plan ? plan->gain.net_s : 0.0;
        if (args.format == "csv")
            os << agent.id << ',' << *agent.host << ',' << target << ',' << fmt(net)
               << '\n';
        else
            j.push_back({{"agent_id", agent.id},
                         {"source", *agent.host},
                         {"target", target},
                         {"net_gain_s", net}});
    }
    if (args.format == "json")
        os << j.dump(2) << '\n';
    emit(args, os.str());
    return kExitOk;
}

int cmd_simulate(const CommonArgs& args) {
    Scenario sc = load_with_overrides(args);
    ExperimentResult result;
    result.runs.emplace_back(policy_from_string(args.policy),
                             run_simulation(sc.sim_inputs(),
                                            policy_from_string(args.policy),
                                            refiner_kind(args.refiner)));
    std::ostringstream os;
    write_metrics(result, os, format_from_string(args.format));
    emit(args, os.str());
    if (result.runs.front().second.infeasible_tasks > 0)
        return kExitInfeasible;
    return kExitOk;
}

int cmd_compare(const CommonArgs& args) {
    Scenario sc = load_with_overrides(args);
    auto result = run_experiment(
        sc, {Policy::AntLLM, Policy::Greedy, Policy::Random, Policy::Polling},
        refiner_kind(args.refiner));
    std::ostringstream os;
    write_metrics(result, os, format_from_string(args.format));
    emit(args, os.str());
    for (const auto& [policy, record] : result.runs)
        if (record.infeasible_tasks > 0)
            return kExitInfeasible;
    return kExitOk;
}

int cmd_oracle_check(const CommonArgs& args) {
    Scenario sc = load_with_overrides(args);
    Policy policy = policy_from_string(args.policy);

    std::ostringstream os;
    json j = json::array();
    if (args.format == "csv")
        os << "task_id,policy_score,oracle_score,gap\n";
    bool any_infeasible = false;
    for (const Task& task : sc.tasks) {
        AlpResult mine, oracle;
        try {
            oracle = brute_force_optimal(sc.world, task, sc.weights, sc.cost);
            switch (policy) {
            case Policy::Greedy:
                mine = greedy_place(sc.world, task, sc.weights, sc.cost);
                break;
            case Policy::Random:
                mine = random_place(sc.world, task, sc.seed, sc.weights, sc.cost);
                break;
            case Policy::Polling:
                mine = polling_place(sc.world, task, sc.weights, sc.cost);
                break;
            case Policy::AntLLM:
                mine = alp_solve(sc.world, task, sc.aco, sc.weights, sc.cost);
                break;
            }
        } catch (const Infeasible&) {
            any_infeasible = true;
            continue;
        }
        double gap = oracle.score > 0.0 ? (mine.score - oracle.score) / oracle.score
                                        : mine.score - oracle.score;
        if (args.format == "csv")
            os << task.id << ',' << fmt(mine.score) << ',' << fmt(oracle.score) << ','
               << fmt(gap) << '\n';
        else
            j.push_back({{"task_id", task.id},
                         {"policy_score", mine.score},
                         {"oracle_score", oracle.score},
                         {"gap", gap}});
    }
    if (args.format == "json")
        os << j.dump(2) << '\n';
    emit(args, os.str());
    return any_infeasible ? kExitInfeasible : kExitOk;
}

int cmd_generate(const CommonArgs& args, int n_servers, int n_tasks) {
    Scenario sc = generate_scenario(n_servers, n_tasks, args.seed);
    std::string text = scenario_to_json_text(sc);
    emit(args, text);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Agent placement and migration over edge servers"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string client_id;
    int gen_servers = 8;
    int gen_tasks = 20;

    auto* place = app.add_subcommand("place", "Place every task's agents");
    add_common(place, args);
    auto* migrate =
        app.add_subcommand("migrate", "Evaluate migrations for deployed agents");
    add_common(migrate, args);
    migrate->add_option("--client", client_id, "Client access server id");
    auto* simulate = app.add_subcommand("simulate", "Run the mobility simulation");
    add_common(simulate, args);
    auto* compare =
        app.add_subcommand("compare", "Run the simulation once per policy");
    add_common(compare, args);
    auto* oracle =
        app.add_subcommand("oracle-check", "Compare a policy with the exact oracle");
    add_common(oracle, args);
    auto* generate = app.add_subcommand("generate", "Generate a synthetic scenario");
    add_common(generate, args, /*needs_scenario=*/false);
    generate->add_option("--servers", gen_servers, "Number of servers");
    generate->add_option("--tasks", gen_tasks, "Number of tasks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (place->parsed())
            return cmd_place(args);
        if (migrate->parsed())
            return cmd_migrate(args, client_id);
        if (simulate->parsed())
            return cmd_simulate(args);
        if (compare->parsed())
            return cmd_compare(args);
        if (oracle->parsed())
            return cmd_oracle_check(args);
        if (generate->parsed())
            return cmd_generate(args, gen_servers, gen_tasks);
    } catch (const ValidationError& e) {
        std::cerr << "validation error:\n";
        for (const auto& v : e.violations)
            std::cerr << "  - " << v << '\n';
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
