#include "antllm/scenario.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace antllm {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where, std::vector<std::string>& violations) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known)
            violations.push_back(where + ": unknown field '" + it.key() + "'");
    }
}

ResourceVector parse_resources(const json& j, const std::string& where,
                               std::vector<std::string>& violations) {
    check_keys(j, {"cpu", "memory_gb", "storage_gb", "bandwidth_mbps"}, where, violations);
    ResourceVector r;
    r.cpu = j.value("cpu", 0.0);
    r.memory_gb = j.value("memory_gb", 0.0);
    r.storage_gb = j.value("storage_gb", 0.0);
    r.bandwidth_mbps = j.value("bandwidth_mbps", 0.0);
    if (!r.non_negative())
        violations.push_back(where + ": negative resource component");
    return r;
}

json resources_to_json(const ResourceVector& r) {
    return {{"cpu", r.cpu},
            {"memory_gb", r.memory_gb},
            {"storage_gb", r.storage_gb},
            {"bandwidth_mbps", r.bandwidth_mbps}};
}

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }

    std::vector<std::string> violations;
    Scenario sc;
    check_keys(j, {"seed", "weights", "aco", "sim", "cost", "servers", "network",
                   "agents", "tasks"},
               "scenario", violations);

    sc.seed = j.value("seed", std::uint64_t{0});

    if (j.contains("weights")) {
        const auto& w = j["weights"];
        check_keys(w, {"theta", "gamma", "theta_dep"}, "weights", violations);
        sc.weights.theta = w.value("theta", 1.0);
        sc.weights.gamma = w.value("gamma", 0.1);
        sc.weights.theta_dep = w.value("theta_dep", 0.5);
        if (sc.weights.theta < 0 || sc.weights.gamma < 0 || sc.weights.theta_dep < 0)
            violations.push_back("weights: must be non-negative");
    }
    if (j.contains("aco")) {
        const auto& a = j["aco"];
        check_keys(a,
                   {"alpha", "beta", "rho", "q", "num_ants", "iterations", "tau_init",
                    "tau_min", "seed"},
                   "aco", violations);
        sc.aco.alpha = a.value("alpha", 1.0);
        sc.aco.beta = a.value("beta", 2.0);
        sc.aco.rho = a.value("rho", 0.1);
        sc.aco.q = a.value("q", 1.0);
        sc.aco.num_ants = a.value("num_ants", 20);
        sc.aco.iterations = a.value("iterations", 100);
        sc.aco.tau_init = a.value("tau_init", 1.0);
        sc.aco.tau_min = a.value("tau_min", 1e-6);
        sc.aco.seed = a.value("seed", sc.seed);
        if (!(sc.aco.rho > 0.0 && sc.aco.rho < 1.0))
            violations.push_back("aco: rho must be in (0, 1)");
        if (sc.aco.alpha < 0 || sc.aco.beta < 0)
            violations.push_back("aco: alpha and beta must be non-negative");
        if (sc.aco.num_ants < 1 || sc.aco.iterations < 1)
            violations.push_back("aco: num_ants and iterations must be >= 1");
        if (sc.aco.tau_min <= 0.0)
            violations.push_back("aco: tau_min must be positive");
    } else {
        sc.aco.seed = sc.seed;
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        check_keys(s,
                   {"epochs", "tasks_per_epoch", "move_probability", "hop_threshold",
                    "resource_security_fraction", "user_path"},
                   "sim", violations);
        sc.sim.epochs = s.value("epochs", 10);
        sc.sim.tasks_per_epoch = s.value("tasks_per_epoch", 2);
        sc.sim.move_probability = s.value("move_probability", 0.3);
        sc.sim.hop_threshold = s.value("hop_threshold", 2);
        sc.sim.resource_security_fraction = s.value("resource_security_fraction", 0.10);
        if (s.contains("user_path"))
            sc.sim.user_path = s["user_path"].get<std::vector<std::string>>();
        if (sc.sim.move_probability < 0.0 || sc.sim.move_probability > 1.0)
            violations.push_back("sim: move_probability must be in [0, 1]");
        if (sc.sim.hop_threshold < 1)
            violations.push_back("sim: hop_threshold must be >= 1");
        if (sc.sim.resource_security_fraction <= 0.0 ||
            sc.sim.resource_security_fraction >= 1.0)
            violations.push_back("sim: resource_security_fraction must be in (0, 1)");
    }
    if (j.contains("cost")) {
        const auto& c = j["cost"];
        check_keys(c, {"nominal_msg_mb", "candidate_radius"}, "cost", violations);
        sc.cost.nominal_msg_mb = c.value("nominal_msg_mb", 1.0);
        sc.cost.candidate_radius = c.value("candidate_radius", 2);
    }

    // Servers
    if (!j.contains("servers") || j["servers"].empty())
        violations.push_back("scenario: at least one server is required");
    for (const auto& js : j.value("servers", json::array())) {
        std::string where = "server '" + js.value("id", std::string("?")) + "'";
        check_keys(js,
                   {"id", "capacity", "export_time_s", "load_time_s", "init_base_s",
                    "init_per_agent_s", "max_agents", "position"},
                   where, violations);
        EdgeServer s;
        s.id = js.value("id", "");
        if (s.id.empty())
            violations.push_back("server: missing id");
        if (js.contains("capacity"))
            s.capacity = parse_resources(js["capacity"], where + ".capacity", violations);
        s.remaining = s.capacity;
        s.export_time_s = js.value("export_time_s", 0.0);
        s.load_time_s = js.value("load_time_s", 0.0);
        s.init_base_s = js.value("init_base_s", 0.0);
        s.init_per_agent_s = js.value("init_per_agent_s", 0.0);
        s.max_agents = js.value("max_agents", 10);
        if (s.max_agents < 0)
            violations.push_back(where + ": max_agents must be >= 0");
        if (js.contains("position")) {
            auto p = js["position"].get<std::vector<double>>();
            if (p.size() != 2)
                violations.push_back(where + ": position must have 2 coordinates");
            else
                s.position = {p[0], p[1]};
        }
        sc.world.servers.push_back(std::move(s));
    }
    sc.world.rebuild_index();
    auto known_server = [&](const std::string& id) {
        return sc.world.server_index.count(id) > 0;
    };

    // Network
    const int n = static_cast<int>(sc.world.servers.size());
    sc.world.net.adjacency.assign(n, {});
    sc.world.net.bandwidth_mbps.assign(n, std::vector<double>(n, 0.0));
    sc.world.net.client_bandwidth_mbps.assign(n, 0.0);
    if (j.contains("network")) {
        const auto& jn = j["network"];
        check_keys(jn, {"per_hop_latency_s", "links", "client_bandwidth_mbps"},
                   "network", violations);
        sc.world.net.per_hop_latency_s = jn.value("per_hop_latency_s", 0.0);
        for (const auto& jl : jn.value("links", json::array())) {
            check_keys(jl, {"a", "b", "bandwidth_mbps"}, "network.links", violations);
            std::string a = jl.value("a", ""), b = jl.value("b", "");
            double bw = jl.value("bandwidth_mbps", 0.0);
            if (!known_server(a) || !known_server(b)) {
                violations.push_back("network link references unknown server: " + a +
                                     " - " + b);
                continue;
            }
            if (a == b) {
                violations.push_back("network link must join distinct servers: " + a);
                continue;
            }
            if (bw <= 0.0) {
                violations.push_back("network link " + a + "-" + b +
                                     " needs positive bandwidth");
                continue;
            }
            int ia = sc.world.server_of(a), ib = sc.world.server_of(b);
            sc.world.net.adjacency[ia].push_back(ib);
            sc.world.net.adjacency[ib].push_back(ia);
            sc.world.net.bandwidth_mbps[ia][ib] = bw;
            sc.world.net.bandwidth_mbps[ib][ia] = bw;
        }
        if (jn.contains("client_bandwidth_mbps")) {
            for (auto it = jn["client_bandwidth_mbps"].begin();
                 it != jn["client_bandwidth_mbps"].end(); ++it) {
                if (!known_server(it.key())) {
                    violations.push_back("client bandwidth for unknown server: " +
                                         it.key());
                    continue;
                }
                sc.world.net.client_bandwidth_mbps[sc.world.server_of(it.key())] =
                    it.value().get<double>();
            }
        }
    }
    for (auto& neighbors : sc.world.net.adjacency)
        std::sort(neighbors.begin(), neighbors.end());
    if (n > 0 && !sc.world.net.connected())
        violations.push_back("network: server graph must be connected");

    // Agents
    for (const auto& ja : j.value("agents", json::array())) {
        std::string where = "agent '" + ja.value("id", std::string("?")) + "'";
        check_keys(ja,
                   {"id", "requirements", "memory_state_gb", "dependencies",
                    "colocate_with", "host", "dep_msg_mb"},
                   where, violations);
        Agent a;
        a.id = ja.value("id", "");
        if (a.id.empty())
            violations.push_back("agent: missing id");
        if (ja.contains("requirements"))
            a.requirements =
                parse_resources(ja["requirements"], where + ".requirements", violations);
        a.memory_state_gb = ja.value("memory_state_gb", 0.0);
        if (a.memory_state_gb < 0)
            violations.push_back(where + ": memory_state_gb must be >= 0");
        for (const auto& d : ja.value("dependencies", std::vector<std::string>{}))
            a.dependencies.insert(d);
        for (const auto& c : ja.value("colocate_with", std::vector<std::string>{}))
            a.colocate_with.insert(c);
        if (ja.contains("host") && !ja["host"].is_null()) {
            a.host = ja["host"].get<std::string>();
            if (!known_server(*a.host))
                violations.push_back(where + ": host references unknown server " +
                                     *a.host);
        }
        if (ja.contains("dep_msg_mb"))
            for (auto it = ja["dep_msg_mb"].begin(); it != ja["dep_msg_mb"].end(); ++it)
                a.dep_msg_mb[it.key()] = it.value().get<double>();
        if (a.dependencies.count(a.id))
            violations.push_back(where + ": agent cannot depend on itself");
        sc.world.agents.push_back(std::move(a));
    }
    sc.world.rebuild_index();
    auto known_agent = [&](const std::string& id) {
        return sc.world.agent_index.count(id) > 0;
    };
    for (const auto& a : sc.world.agents) {
        for (const auto& d : a.dependencies)
            if (!known_agent(d))
                violations.push_back("agent '" + a.id + "': unknown dependency " + d);
        for (const auto& c : a.colocate_with) {
            if (!a.dependencies.count(c))
                violations.push_back("agent '" + a.id +
                                     "': colocate_with must be a subset of dependencies");
        }
        for (const auto& [peer, size] : a.dep_msg_mb)
            if (!a.dependencies.count(peer))
                violations.push_back("agent '" + a.id +
                                     "': dep_msg_mb references non-dependency " + peer);
    }

    // Tasks
    for (const auto& jt : j.value("tasks", json::array())) {
        std::string where = "task '" + jt.value("id", std::string("?")) + "'";
        check_keys(jt,
                   {"id", "origin_server", "file_size_mb", "prompt_time_s",
                    "required_agents", "storage_gb", "file_processing_time_s",
                    "llm_time_s", "comm_events"},
                   where, violations);
        Task t;
        t.id = jt.value("id", "");
        t.origin_server = jt.value("origin_server", "");
        if (!known_server(t.origin_server))
            violations.push_back(where + ": unknown origin server '" + t.origin_server +
                                 "'");
        t.file_size_mb = jt.value("file_size_mb", 0.0);
        t.prompt_time_s = jt.value("prompt_time_s", 0.0);
        t.storage_gb = jt.value("storage_gb", 0.0);
        t.file_processing_time_s = jt.value("file_processing_time_s", 0.0);
        t.llm_time_s = jt.value("llm_time_s", 0.0);
        if (t.file_size_mb < 0 || t.prompt_time_s < 0 || t.storage_gb < 0 ||
            t.file_processing_time_s < 0 || t.llm_time_s < 0)
            violations.push_back(where + ": time and size fields must be >= 0");
        t.required_agents = jt.value("required_agents", std::vector<std::string>{});
        if (t.required_agents.empty())
            violations.push_back(where + ": required_agents must be non-empty");
        for (const auto& aid : t.required_agents)
            if (!known_agent(aid))
                violations.push_back(where + ": unknown required agent '" + aid + "'");
        for (const auto& je : jt.value("comm_events", json::array())) {
            check_keys(je, {"from", "to", "size_mb"}, where + ".comm_events", violations);
            CommEvent ev;
            ev.from_agent = je.value("from", "");
            ev.to_agent = je.value("to", "");
            ev.size_mb = je.value("size_mb", 0.0);
            if (ev.from_agent == ev.to_agent)
                violations.push_back(where + ": comm event endpoints must differ");
            if (ev.size_mb < 0)
                violations.push_back(where + ": comm event size must be >= 0");
            if (!known_agent(ev.from_agent) || !known_agent(ev.to_agent))
                violations.push_back(where + ": comm event references unknown agent");
            t.comm_events.push_back(std::move(ev));
        }
        sc.tasks.push_back(std::move(t));
    }

    if (!violations.empty())
        throw ValidationError(std::move(violations));

    sc.world.net.finalize();
    sc.world.sync_occupancy();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& sc) {
    json j;
    j["seed"] = sc.seed;
    j["weights"] = {{"theta", sc.weights.theta},
                    {"gamma", sc.weights.gamma},
                    {"theta_dep", sc.weights.theta_dep}};
    j["aco"] = {{"alpha", sc.aco.alpha},     {"beta", sc.aco.beta},
                {"rho", sc.aco.rho},         {"q", sc.aco.q},
                {"num_ants", sc.aco.num_ants}, {"iterations", sc.aco.iterations},
                {"tau_init", sc.aco.tau_init}, {"tau_min", sc.aco.tau_min},
                {"seed", sc.aco.seed}};
    j["sim"] = {{"epochs", sc.sim.epochs},
                {"tasks_per_epoch", sc.sim.tasks_per_epoch},
                {"move_probability", sc.sim.move_probability},
                {"hop_threshold", sc.sim.hop_threshold},
                {"resource_security_fraction", sc.sim.resource_security_fraction}};
    if (!sc.sim.user_path.empty())
        j["sim"]["user_path"] = sc.sim.user_path;
    j["cost"] = {{"nominal_msg_mb", sc.cost.nominal_msg_mb},
                 {"candidate_radius", sc.cost.candidate_radius}};

    j["servers"] = json::array();
    for (const auto& s : sc.world.servers) {
        json js = {{"id", s.id},
                   {"capacity", resources_to_json(s.capacity)},
                   {"export_time_s", s.export_time_s},
                   {"load_time_s", s.load_time_s},
                   {"init_base_s", s.init_base_s},
                   {"init_per_agent_s", s.init_per_agent_s},
                   {"max_agents", s.max_agents},
                   {"position", {s.position[0], s.position[1]}}};
        j["servers"].push_back(std::move(js));
    }

    j["network"] = {{"per_hop_latency_s", sc.world.net.per_hop_latency_s},
                    {"links", json::array()},
                    {"client_bandwidth_mbps", json::object()}};
    const int n = static_cast<int>(sc.world.servers.size());
    for (int a = 0; a < n; ++a) {
        for (int b : sc.world.net.adjacency[a]) {
            if (b <= a)
                continue;
            j["network"]["links"].push_back(
                {{"a", sc.world.servers[a].id},
                 {"b", sc.world.servers[b].id},
                 {"bandwidth_mbps", sc.world.net.bandwidth_mbps[a][b]}});
        }
        j["network"]["client_bandwidth_mbps"][sc.world.servers[a].id] =
            sc.world.net.client_bandwidth_mbps[a];
    }

    j["agents"] = json::array();
    for (const auto& a : sc.world.agents) {
        json ja = {{"id", a.id},
                   {"requirements", resources_to_json(a.requirements)},
                   {"memory_state_gb", a.memory_state_gb},
                   {"dependencies", a.dependencies},
                   {"colocate_with", a.colocate_with}};
        if (a.host)
            ja["host"] = *a.host;
        if (!a.dep_msg_mb.empty())
            ja["dep_msg_mb"] = a.dep_msg_mb;
        j["agents"].push_back(std::move(ja));
    }

    j["tasks"] = json::array();
    for (const auto& t : sc.tasks) {
        json jt = {{"id", t.id},
                   {"origin_server", t.origin_server},
                   {"file_size_mb", t.file_size_mb},
                   {"prompt_time_s", t.prompt_time_s},
                   {"required_agents", t.required_agents},
                   {"storage_gb", t.storage_gb},
                   {"file_processing_time_s", t.file_processing_time_s},
                   {"llm_time_s", t.llm_time_s}};
        if (!t.comm_events.empty()) {
            jt["comm_events"] = json::array();
            for (const auto& ev : t.comm_events)
                jt["comm_events"].push_back({{"from", ev.from_agent},
                                             {"to", ev.to_agent},
                                             {"size_mb", ev.size_mb}});
        }
        j["tasks"].push_back(std::move(jt));
    }
    return j.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ModelError("cannot write scenario file: " + path.string());
    out << scenario_to_json_text(scenario);
}

// ---------------------------------------------------------------------------
// Generation

Scenario generate_scenario(int n_servers, int n_tasks, std::uint64_t seed) {
    auto rng = rng_substream(seed, 0x67656e00ull, 0); // "gen"
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto in_range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };
    auto scale = [&] { return in_range(0.5, 1.5); }; // +-50% around testbed values

    Scenario sc;
    sc.seed = seed;
    sc.aco.seed = seed;
    sc.aco.num_ants = 12;
    sc.aco.iterations = 40;

    // Servers around the testbed profile: 2 cores, 2 GB memory, 40/70 GB disk,
    // 20/30 Mbps links.
    for (int i = 0; i < n_servers; ++i) {
        EdgeServer s;
        s.id = "e" + std::to_string(i);
        bool large = i % 4 == 3; // every fourth server is the big profile
        s.capacity.cpu = 2.0 * scale();
        s.capacity.memory_gb = 2.0 * scale();
        s.capacity.storage_gb = (large ? 70.0 : 40.0) * scale();
        s.capacity.bandwidth_mbps = (large ? 30.0 : 20.0) * scale();
        s.remaining = s.capacity;
        s.export_time_s = in_range(0.2, 0.6);
        s.load_time_s = in_range(0.2, 0.6);
        s.init_base_s = in_range(0.2, 4.0);
        s.init_per_agent_s = in_range(0.5, 1.2);
        s.max_agents = 10;
        s.position = {in_range(0.0, 100.0), in_range(0.0, 100.0)};
        sc.world.servers.push_back(std::move(s));
    }
    sc.world.rebuild_index();

    // Random connected topology: spanning tree plus extra edges. Link
    // bandwidth decays with Euclidean distance.
    const int n = n_servers;
    sc.world.net.adjacency.assign(n, {});
    sc.world.net.bandwidth_mbps.assign(n, std::vector<double>(n, 0.0));
    sc.world.net.client_bandwidth_mbps.assign(n, 0.0);
    sc.world.net.per_hop_latency_s = 0.2;
    // Planning-time estimate of the client-agent interaction volume; sized for
    // a chatty session so relocation decisions weigh real traffic.
    sc.cost.nominal_msg_mb = 20.0;
    auto link_bw = [&](int a, int b) {
        double dx = sc.world.servers[a].position[0] - sc.world.servers[b].position[0];
        double dy = sc.world.servers[a].position[1] - sc.world.servers[b].position[1];
        double dist = std::sqrt(dx * dx + dy * dy);
        return std::clamp(25.0 * 60.0 / (30.0 + dist), 5.0, 40.0);
    };
    auto add_link = [&](int a, int b) {
        if (a == b || sc.world.net.bandwidth_mbps[a][b] > 0.0)
            return;
        double bw = link_bw(a, b);
        sc.world.net.adjacency[a].push_back(b);
        sc.world.net.adjacency[b].push_back(a);
        sc.world.net.bandwidth_mbps[a][b] = bw;
        sc.world.net.bandwidth_mbps[b][a] = bw;
    };
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        add_link(i, pick(rng));
    }
    for (int extra = 0; extra < n / 2; ++extra) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        add_link(pick(rng), pick(rng));
    }
    for (auto& neighbors : sc.world.net.adjacency)
        std::sort(neighbors.begin(), neighbors.end());
    for (int i = 0; i < n; ++i)
        sc.world.net.client_bandwidth_mbps[i] = in_range(15.0, 30.0);
    sc.world.net.finalize();

    // Tasks, each with 1-3 fresh agents; later agents depend on the first.
    int agent_counter = 0;
    for (int t = 0; t < n_tasks; ++t) {
        Task task;
        task.id = "t" + std::to_string(t);
        std::uniform_int_distribution<int> origin(0, n - 1);
        task.origin_server = sc.world.servers[origin(rng)].id;
        task.file_size_mb = in_range(5.0, 20.0);
        task.prompt_time_s = in_range(0.1, 0.4);
        task.storage_gb = in_range(0.5, 2.0);
        task.file_processing_time_s = in_range(0.3, 1.0);
        task.llm_time_s = in_range(0.3, 1.0);

        std::uniform_int_distribution<int> count(1, 3);
        int agents_in_task = count(rng);
        std::string first_id;
        for (int k = 0; k < agents_in_task; ++k) {
            Agent a;
            a.id = "a" + std::to_string(agent_counter++);
            a.requirements.cpu = in_range(0.2, 0.5);
            a.requirements.memory_gb = in_range(0.2, 0.5);
            a.requirements.storage_gb = in_range(0.5, 2.0);
            a.requirements.bandwidth_mbps = in_range(1.0, 3.0);
            a.memory_state_gb = in_range(0.002, 0.01);
            if (k == 0) {
                first_id = a.id;
            } else if (uni(rng) < 0.6) {
                a.dependencies.insert(first_id);
                task.comm_events.push_back({a.id, first_id, in_range(10.0, 40.0)});
            }
            task.required_agents.push_back(a.id);
            sc.world.agents.push_back(std::move(a));
        }
        sc.tasks.push_back(std::move(task));
    }
    sc.world.rebuild_index();
    sc.world.sync_occupancy();

    sc.sim.tasks_per_epoch = 2;
    sc.sim.epochs = std::max(1, (n_tasks + sc.sim.tasks_per_epoch - 1) /
                                    sc.sim.tasks_per_epoch) +
                    4; // trailing epochs let migrations play out
    return sc;
}

// ---------------------------------------------------------------------------
// Experiments

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "json")
        return OutputFormat::Json;
    throw ModelError("unknown output format: " + name);
}

ExperimentResult run_experiment(const Scenario& scenario,
                                const std::vector<Policy>& policies,
                                RefinerKind refiner) {
    ExperimentResult result;
    for (Policy p : policies)
        result.runs.emplace_back(p, run_simulation(scenario.sim_inputs(), p, refiner));
    return result;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void write_row(std::ostream& out, const std::string& policy, const TaskMetrics& m) {
    out << policy << ',' << m.task_id << ',' << fmt(m.initial_time_s) << ','
        << fmt(m.migration_time_s) << ',' << fmt(m.process_time_s) << ','
        << fmt(m.total_time_s) << ',' << fmt(m.cpu_usage) << ','
        << fmt(m.memory_usage_gb) << ',' << fmt(m.disk_usage_gb) << ','
        << m.instance_count << '\n';
}

json row_json(const std::string& policy, const TaskMetrics& m) {
    return {{"policy", policy},
            {"task_id", m.task_id},
            {"initial_time_s", m.initial_time_s},
            {"migration_time_s", m.migration_time_s},
            {"process_time_s", m.process_time_s},
            {"total_time_s", m.total_time_s},
            {"cpu_usage", m.cpu_usage},
            {"memory_usage_gb", m.memory_usage_gb},
            {"disk_usage_gb", m.disk_usage_gb},
            {"instance_count", m.instance_count}};
}

} // namespace

void write_metrics(const ExperimentResult& result, std::ostream& out,
                   OutputFormat format) {
    if (format == OutputFormat::Csv) {
        out << "policy,task_id,initial_time_s,migration_time_s,process_time_s,"
               "total_time_s,cpu_usage,memory_usage_gb,disk_usage_gb,instance_count\n";
        for (const auto& [policy, record] : result.runs) {
            for (const auto& row : record.rows)
                write_row(out, to_string(policy), row);
            write_row(out, to_string(policy), record.totals());
        }
    } else {
        json j = json::array();
        for (const auto& [policy, record] : result.runs) {
            for (const auto& row : record.rows)
                j.push_back(row_json(to_string(policy), row));
            j.push_back(row_json(to_string(policy), record.totals()));
        }
        out << j.dump(2) << "\n";
    }
}

void write_metrics(const ExperimentResult& result, const std::filesystem::path& path,
                   OutputFormat format) {
    std::ofstream out(path);
    if (!out)
        throw ModelError("cannot write metrics file: " + path.string());
    write_metrics(result, out, format);
}

} // namespace antllm
