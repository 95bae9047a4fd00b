#include "antllm/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace antllm {

std::string ValidationError::join(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "validation failed:";
    for (const auto& s : v)
        os << "\n  - " << s;
    return os.str();
}

std::string ResourceVector::first_overflow(const ResourceVector& limit, double eps) const {
    if (cpu > limit.cpu + eps)
        return "cpu";
    if (memory_gb > limit.memory_gb + eps)
        return "memory_gb";
    if (storage_gb > limit.storage_gb + eps)
        return "storage_gb";
    if (bandwidth_mbps > limit.bandwidth_mbps + eps)
        return "bandwidth_mbps";
    return {};
}

int NetworkModel::hop_count(int e1, int e2) const {
    if (e1 == e2)
        return 0;
    std::vector<int> dist(adjacency.size(), -1);
    std::deque<int> queue{e1};
    dist[e1] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adjacency[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                if (v == e2)
                    return dist[v];
                queue.push_back(v);
            }
        }
    }
    throw Disconnected{};
}

std::vector<std::vector<int>> NetworkModel::all_hops() const {
    const int n = size();
    std::vector<std::vector<int>> hops(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        hops[s][s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : adjacency[u]) {
                if (hops[s][v] < 0) {
                    hops[s][v] = hops[s][u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return hops;
}

void NetworkModel::finalize() {
    const int n = size();
    effective_bandwidth_mbps = bandwidth_mbps;
    auto& w = effective_bandwidth_mbps;
    for (int i = 0; i < n; ++i)
        w[i][i] = kLocalBandwidth;
    // Floyd-Warshall maximin: widest path over direct links.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double through = std::min(w[i][k], w[k][j]);
                if (through > w[i][j])
                    w[i][j] = through;
            }
}

bool NetworkModel::connected() const {
    if (size() == 0)
        return true;
    auto hops = all_hops();
    for (int v : hops[0])
        if (v < 0)
            return false;
    return true;
}

void World::rebuild_index() {
    server_index.clear();
    agent_index.clear();
    for (int i = 0; i < static_cast<int>(servers.size()); ++i)
        server_index[servers[i].id] = i;
    for (int i = 0; i < static_cast<int>(agents.size()); ++i)
        agent_index[agents[i].id] = i;
}

int World::server_of(const std::string& id) const {
    auto it = server_index.find(id);
    if (it == server_index.end())
        throw ModelError("unknown server id: " + id);
    return it->second;
}

int World::agent_of(const std::string& id) const {
    auto it = agent_index.find(id);
    if (it == agent_index.end())
        throw ModelError("unknown agent id: " + id);
    return it->second;
}

void World::sync_occupancy() {
    for (auto& s : servers) {
        s.remaining = s.capacity;
        s.hosted.clear();
    }
    for (const auto& a : agents) {
        if (!a.host)
            continue;
        auto& s = servers[server_of(*a.host)];
        apply_assignment(s, a);
    }
}

void apply_assignment(EdgeServer& server, const Agent& agent) {
    if (static_cast<int>(server.hosted.size()) + 1 > server.max_agents)
        throw AgentLimitExceeded{};
    if (auto res = agent.requirements.first_overflow(server.remaining); !res.empty())
        throw CapacityExceeded{res};
    server.remaining = server.remaining - agent.requirements;
    server.hosted.insert(agent.id);
}

void release_assignment(EdgeServer& server, const Agent& agent) {
    if (server.hosted.erase(agent.id) == 0)
        throw ModelError("agent " + agent.id + " not hosted on " + server.id);
    server.remaining = server.remaining + agent.requirements;
}

} // namespace antllm
