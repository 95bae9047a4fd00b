#pragma once

#include "antllm/scenario.hpp"

#include <random>

namespace antllm::testing {

inline EdgeServer make_server(std::string id, double cpu, double mem, double stor = 40,
                              double bw = 20) {
    EdgeServer s;
    s.id = std::move(id);
    s.capacity = {cpu, mem, stor, bw};
    s.remaining = s.capacity;
    return s;
}

inline Agent make_agent(std::string id, double cpu, double mem, double stor = 0.5,
                        double bw = 1) {
    Agent a;
    a.id = std::move(id);
    a.requirements = {cpu, mem, stor, bw};
    return a;
}

// Uniform servers on the given topology; every link shares one bandwidth.
inline World make_world(int n_servers, const std::vector<std::pair<int, int>>& links,
                        double link_bw = 20.0, double client_bw = 20.0) {
    World w;
    for (int i = 0; i < n_servers; ++i)
        w.servers.push_back(make_server("e" + std::to_string(i), 4, 4));
    w.net.adjacency.assign(n_servers, {});
    w.net.bandwidth_mbps.assign(n_servers, std::vector<double>(n_servers, 0.0));
    w.net.client_bandwidth_mbps.assign(n_servers, client_bw);
    for (auto [a, b] : links) {
        w.net.adjacency[a].push_back(b);
        w.net.adjacency[b].push_back(a);
        w.net.bandwidth_mbps[a][b] = link_bw;
        w.net.bandwidth_mbps[b][a] = link_bw;
    }
    w.net.finalize();
    w.rebuild_index();
    return w;
}

inline std::vector<std::pair<int, int>> line_links(int n) {
    std::vector<std::pair<int, int>> links;
    for (int i = 0; i + 1 < n; ++i)
        links.emplace_back(i, i + 1);
    return links;
}

inline std::vector<std::pair<int, int>> ring_links(int n) {
    auto links = line_links(n);
    links.emplace_back(n - 1, 0);
    return links;
}

inline Task make_task(std::string id, std::vector<std::string> agents,
                      std::string origin = "e0") {
    Task t;
    t.id = std::move(id);
    t.origin_server = std::move(origin);
    t.required_agents = std::move(agents);
    return t;
}

// Random small placement instance for oracle-consistency tests: n_servers
// uniform-ish servers, one task with n_agents fresh agents and occasional
// dependencies.
inline std::pair<World, Task> random_instance(std::mt19937_64& rng, int n_servers,
                                              int n_agents) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto in_range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

    World w;
    for (int i = 0; i < n_servers; ++i) {
        auto s = make_server("e" + std::to_string(i), in_range(1.0, 4.0),
                             in_range(1.0, 4.0), in_range(10.0, 80.0),
                             in_range(10.0, 40.0));
        s.init_base_s = in_range(0.2, 1.5);
        s.init_per_agent_s = in_range(0.1, 0.8);
        s.export_time_s = in_range(0.2, 1.0);
        s.load_time_s = in_range(0.2, 1.0);
        w.servers.push_back(std::move(s));
    }

    // Spanning tree plus a chance of extra edges.
    std::vector<std::pair<int, int>> links;
    for (int i = 1; i < n_servers; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        links.emplace_back(i, pick(rng));
    }
    if (n_servers > 2 && uni(rng) < 0.5)
        links.emplace_back(0, n_servers - 1);

    World base = make_world(n_servers, links, in_range(10.0, 30.0));
    w.net = base.net;
    w.net.per_hop_latency_s = in_range(0.01, 0.2);
    w.rebuild_index();

    Task t = make_task("t0", {}, "e0");
    for (int k = 0; k < n_agents; ++k) {
        auto a = make_agent("a" + std::to_string(k), in_range(0.2, 0.9),
                            in_range(0.2, 0.9), in_range(0.3, 2.0), in_range(0.5, 3.0));
        a.memory_state_gb = in_range(0.0, 0.2);
        if (k > 0 && uni(rng) < 0.5)
            a.dependencies.insert("a0");
        t.required_agents.push_back(a.id);
        w.agents.push_back(std::move(a));
    }
    w.rebuild_index();
    return {w, t};
}

} // namespace antllm::testing
