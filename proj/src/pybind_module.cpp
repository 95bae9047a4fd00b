#include "antllm/baselines.hpp"
#include "antllm/refiner.hpp"
#include "antllm/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace antllm;

namespace {

Scenario with_seed(const Scenario& sc, std::optional<std::uint64_t> seed) {
    Scenario copy = sc;
    if (seed) {
        copy.seed = *seed;
        copy.aco.seed = *seed;
    }
    return copy;
}

RefinerKind refiner_from_string(const std::string& name) {
    if (name == "none")
        return RefinerKind::None;
    if (name == "local")
        return RefinerKind::Local;
    if (name == "remote")
        return RefinerKind::Remote;
    throw std::invalid_argument("unknown refiner: " + name);
}

AlpResult place_one(Scenario& sc, const Task& task, Policy policy,
                    RefinerKind refiner) {
    switch (policy) {
    case Policy::Greedy:
        return greedy_place(sc.world, task, sc.weights, sc.cost);
    case Policy::Random:
        return random_place(sc.world, task, sc.seed, sc.weights, sc.cost);
    case Policy::Polling:
        return polling_place(sc.world, task, sc.weights, sc.cost);
    case Policy::AntLLM:
        break;
    }
    AlpResult result = alp_solve(sc.world, task, sc.aco, sc.weights, sc.cost);
    if (refiner == RefinerKind::Local) {
        LocalSearchRefiner local;
        RefinementRequest request{result.placement, result.score, &sc.world, &task,
                                  sc.weights, sc.cost};
        result = refine(request, local);
    }
    return result;
}

void commit(Scenario& sc, const AlpResult& result) {
    for (const auto& [aid, sid] : result.placement.assignments) {
        Agent& agent = sc.world.agents[sc.world.agent_of(aid)];
        apply_assignment(sc.world.servers[sc.world.server_of(sid)], agent);
        agent.host = sid;
    }
}

py::list place_py(const Scenario& scenario, const std::string& policy_name,
                  const std::string& refiner_name,
                  std::optional<std::uint64_t> seed) {
    Scenario sc = with_seed(scenario, seed);
    Policy policy = policy_from_string(policy_name);
    RefinerKind refiner = refiner_from_string(refiner_name);

    py::list out;
    for (const Task& task : sc.tasks) {
        AlpResult result = place_one(sc, task, policy, refiner);
        commit(sc, result);
        py::dict assignments;
        for (const auto& [aid, sid] : result.placement.assignments)
            assignments[py::str(aid)] = sid;
        py::dict row;
        row["task_id"] = task.id;
        row["assignments"] = assignments;
        row["score"] = result.score;
        out.append(row);
    }
    return out;
}

py::dict metrics_dict(const TaskMetrics& m) {
    py::dict d;
    d["task_id"] = m.task_id;
    d["initial_time_s"] = m.initial_time_s;
    d["migration_time_s"] = m.migration_time_s;
    d["process_time_s"] = m.process_time_s;
    d["total_time_s"] = m.total_time_s;
    d["cpu_usage"] = m.cpu_usage;
    d["memory_usage_gb"] = m.memory_usage_gb;
    d["disk_usage_gb"] = m.disk_usage_gb;
    d["instance_count"] = m.instance_count;
    return d;
}

py::dict record_dict(const MetricsRecord& record) {
    py::list rows;
    for (const auto& row : record.rows)
        rows.append(metrics_dict(row));
    py::list migrations;
    for (const auto& event : record.migrations) {
        py::dict e;
        e["epoch"] = event.epoch;
        e["agent_id"] = event.agent_id;
        e["source"] = event.source;
        e["target"] = event.target;
        e["net_gain_s"] = event.net_gain_s;
        migrations.append(e);
    }
    py::dict d;
    d["rows"] = rows;
    d["migrations"] = migrations;
    d["deferred_migrations"] = record.deferred_migrations;
    d["infeasible_tasks"] = record.infeasible_tasks;
    d["totals"] = metrics_dict(record.totals());
    return d;
}

py::dict simulate_py(const Scenario& scenario, const std::string& policy_name,
                     const std::string& refiner_name,
                     std::optional<std::uint64_t> seed) {
    Scenario sc = with_seed(scenario, seed);
    MetricsRecord record =
        run_simulation(sc.sim_inputs(), policy_from_string(policy_name),
                       refiner_from_string(refiner_name));
    return record_dict(record);
}

py::dict compare_py(const Scenario& scenario, const std::string& refiner_name,
                    std::optional<std::uint64_t> seed) {
    Scenario sc = with_seed(scenario, seed);
    py::dict out;
    for (Policy policy :
         {Policy::AntLLM, Policy::Greedy, Policy::Random, Policy::Polling}) {
        MetricsRecord record = run_simulation(sc.sim_inputs(), policy,
                                              refiner_from_string(refiner_name));
        out[py::str(to_string(policy))] = record_dict(record);
    }
    return out;
}

py::list oracle_check_py(const Scenario& scenario, const std::string& policy_name,
                         std::optional<std::uint64_t> seed) {
    Scenario sc = with_seed(scenario, seed);
    Policy policy = policy_from_string(policy_name);
    py::list out;
    for (const Task& task : sc.tasks) {
        AlpResult oracle = brute_force_optimal(sc.world, task, sc.weights, sc.cost);
        AlpResult mine = place_one(sc, task, policy, RefinerKind::None);
        double gap = oracle.score > 0.0 ? (mine.score - oracle.score) / oracle.score
                                        : mine.score - oracle.score;
        py::dict row;
        row["task_id"] = task.id;
        row["policy_score"] = mine.score;
        row["oracle_score"] = oracle.score;
        row["gap"] = gap;
        out.append(row);
    }
    return out;
}

py::list migrate_py(const Scenario& scenario, std::optional<std::string> client,
                    const std::string& policy_name, const std::string& refiner_name,
                    std::optional<std::uint64_t> seed) {
    Scenario sc = with_seed(scenario, seed);
    Policy policy = policy_from_string(policy_name);
    RefinerKind refiner = refiner_from_string(refiner_name);
    for (const Task& task : sc.tasks)
        commit(sc, place_one(sc, task, policy, refiner));

    std::string at = client.value_or("");
    if (at.empty()) {
        if (sc.tasks.empty())
            throw ValidationError({"migrate: no tasks and no client given"});
        at = sc.tasks.front().origin_server;
    }
    if (!sc.world.server_index.count(at))
        throw ValidationError({"migrate: unknown client server '" + at + "'"});
    int access = sc.world.server_of(at);

    bool use_refiner = policy == Policy::AntLLM && refiner != RefinerKind::None;
    py::list out;
    for (const auto& agent : sc.world.agents) {
        if (!agent.host)
            continue;
        auto plan = alm_solve(sc.world, agent.id, access, sc.aco, sc.weights, sc.cost);
        if (use_refiner)
            plan = refine_migration(sc.world, plan, access, sc.weights, sc.cost);
        py::dict row;
        row["agent_id"] = agent.id;
        row["source"] = *agent.host;
        row["target"] = plan ? py::object(py::str(plan->target)) : py::none();
        row["net_gain_s"] = plan ? plan->gain.net_s : 0.0;
        out.append(row);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_antllm, m) {
    m.doc() = "Agent placement and migration over edge servers";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);

    py::class_<Scenario>(m, "Scenario")
        .def_static(
            "from_file",
            [](const std::string& path) { return load_scenario(path); }, py::arg("path"),
            "Load and validate a scenario JSON file")
        .def_static("from_json", &scenario_from_json_text, py::arg("text"),
                    "Parse and validate scenario JSON text")
        .def("to_json", &scenario_to_json_text)
        .def(
            "save",
            [](const Scenario& sc, const std::string& path) {
                save_scenario(sc, path);
            },
            py::arg("path"))
        .def_property_readonly("seed", [](const Scenario& sc) { return sc.seed; })
        .def_property_readonly("server_ids",
                               [](const Scenario& sc) {
                                   std::vector<std::string> ids;
                                   for (const auto& s : sc.world.servers)
                                       ids.push_back(s.id);
                                   return ids;
                               })
        .def_property_readonly("agent_ids",
                               [](const Scenario& sc) {
                                   std::vector<std::string> ids;
                                   for (const auto& a : sc.world.agents)
                                       ids.push_back(a.id);
                                   return ids;
                               })
        .def_property_readonly("task_ids",
                               [](const Scenario& sc) {
                                   std::vector<std::string> ids;
                                   for (const auto& t : sc.tasks)
                                       ids.push_back(t.id);
                                   return ids;
                               })
        .def("__repr__", [](const Scenario& sc) {
            std::ostringstream os;
            os << "Scenario(servers=" << sc.world.servers.size()
               << ", agents=" << sc.world.agents.size()
               << ", tasks=" << sc.tasks.size() << ", seed=" << sc.seed << ")";
            return os.str();
        });

    m.def("generate_scenario", &generate_scenario, py::arg("servers"),
          py::arg("tasks"), py::arg("seed"),
          "Generate a synthetic, validated scenario");

    m.def("place", &place_py, py::arg("scenario"), py::arg("policy") = "antllm",
          py::arg("refiner") = "local", py::arg("seed") = py::none(),
          "Place every task's agents sequentially; returns one dict per task");

    m.def("simulate", &simulate_py, py::arg("scenario"),
          py::arg("policy") = "antllm", py::arg("refiner") = "local",
          py::arg("seed") = py::none(),
          "Run the mobility simulation for one policy");

    m.def("compare", &compare_py, py::arg("scenario"), py::arg("refiner") = "local",
          py::arg("seed") = py::none(),
          "Run the simulation once per policy on identical seeds");

    m.def("oracle_check", &oracle_check_py, py::arg("scenario"),
          py::arg("policy") = "antllm", py::arg("seed") = py::none(),
          "Compare a policy's per-task scores with the exhaustive optimum");

    m.def("migrate", &migrate_py, py::arg("scenario"), py::arg("client") = py::none(),
          py::arg("policy") = "antllm", py::arg("refiner") = "local",
          py::arg("seed") = py::none(),
          "Deploy all tasks, then evaluate a migration for every deployed agent");
}
