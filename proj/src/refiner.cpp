#include "antllm/refiner.hpp"
#include "antllm/baselines.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <regex>
#include <sstream>

namespace antllm {

namespace {

// Re-validate a proposal against the constraint block and recompute its
// objective from scratch. Returns nullopt for anything that is not a strict,
// feasible improvement.
std::optional<AlpResult> validate(const RefinementRequest& request,
                                  const Placement& proposal) {
    try {
        EadContext ctx = make_ead_context(*request.world, *request.task,
                                          request.weights, request.opts);
        std::vector<int> assignment = from_placement(ctx, proposal);
        if (!ead_feasible(ctx, assignment))
            return std::nullopt;
        double score = ead_objective(ctx, assignment, /*check_feasible=*/false);
        if (score >= request.incumbent_score)
            return std::nullopt;
        Placement accepted = to_placement(ctx, assignment);
        return AlpResult{accepted, score};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

AlpResult refine(const RefinementRequest& request, Refiner& refiner) {
    std::optional<Placement> proposal;
    try {
        proposal = refiner.propose(request);
    } catch (const std::exception&) {
        proposal.reset();
    }
    if (proposal) {
        if (auto accepted = validate(request, *proposal))
            return *accepted;
    }
    return {request.incumbent, request.incumbent_score};
}

std::optional<Placement> LocalSearchRefiner::propose(const RefinementRequest& request) {
    EadContext ctx = make_ead_context(*request.world, *request.task, request.weights,
                                      request.opts);
    std::vector<int> current = from_placement(ctx, request.incumbent);
    if (!ead_feasible(ctx, current))
        return std::nullopt;
    double current_score = ead_objective(ctx, current, /*check_feasible=*/false);

    for (int move = 0; move < move_budget_; ++move) {
        double best_score = current_score;
        int best_pos = -1, best_server = -1;
        for (int pos = 0; pos < ctx.n_agents(); ++pos) {
            int original = current[pos];
            for (int s : ctx.candidates) {
                if (s == original)
                    continue;
                current[pos] = s;
                if (ead_feasible(ctx, current)) {
                    double score = ead_objective(ctx, current, /*check_feasible=*/false);
                    if (score < best_score) {
                        best_score = score;
                        best_pos = pos;
                        best_server = s;
                    }
                }
            }
            current[pos] = original;
        }
        if (best_pos < 0)
            break; // local optimum
        current[best_pos] = best_server;
        current_score = best_score;
    }
    return to_placement(ctx, current);
}

std::string RemoteRefiner::build_prompt(const RefinementRequest& request) {
    const World& world = *request.world;
    std::ostringstream os;
    os << "You are optimizing the placement of agents on edge servers.\n"
       << "Servers (id, remaining cpu, remaining memory GB, remaining storage GB, "
          "remaining bandwidth Mbps, hosted, max):\n";
    for (const auto& s : world.servers)
        os << "  " << s.id << " " << s.remaining.cpu << " " << s.remaining.memory_gb
           << " " << s.remaining.storage_gb << " " << s.remaining.bandwidth_mbps << " "
           << s.hosted.size() << " " << s.max_agents << "\n";
    os << "Agents to place (id, cpu, memory GB, storage GB, bandwidth Mbps):\n";
    for (const auto& [aid, sid] : request.incumbent.assignments) {
        const Agent& a = world.agents[world.agent_of(aid)];
        os << "  " << aid << " " << a.requirements.cpu << " " << a.requirements.memory_gb
           << " " << a.requirements.storage_gb << " " << a.requirements.bandwidth_mbps
           << "\n";
    }
    os << "Current plan (score " << request.incumbent_score << "):\n";
    for (const auto& [aid, sid] : request.incumbent.assignments)
        os << "  " << aid << " -> " << sid << "\n";
    os << "Propose an improved plan. Reply with exactly one fenced code block "
          "containing one `agent_id -> server_id` line per agent.\n";
    return os.str();
}

std::optional<Placement> RemoteRefiner::parse_reply(const std::string& reply) {
    auto open = reply.find("```");
    if (open == std::string::npos)
        return std::nullopt;
    auto body_start = reply.find('\n', open);
    if (body_start == std::string::npos)
        return std::nullopt;
    auto close = reply.find("```", body_start);
    if (close == std::string::npos)
        return std::nullopt;
    std::string block = reply.substr(body_start + 1, close - body_start - 1);

    static const std::regex line_re(R"(^\s*(\S+)\s*->\s*(\S+)\s*$)");
    Placement p;
    std::istringstream is(block);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re))
            return std::nullopt;
        p.assignments[m[1]] = m[2];
    }
    if (p.assignments.empty())
        return std::nullopt;
    return p;
}

std::optional<Placement> RemoteRefiner::propose(const RefinementRequest& request) {
    static const std::regex url_re(R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.url, m, url_re))
        return std::nullopt;
    std::string host = m[2];
    int port = m[3].matched ? std::stoi(m[3]) : (m[1] == "https" ? 443 : 80);
    std::string path = m[4].matched ? m[4].str() : "/";

    nlohmann::json body = {
        {"model", config_.model},
        {"messages",
         {{{"role", "user"}, {"content", build_prompt(request)}}}},
    };

    httplib::Client client(host, port);
    auto timeout = static_cast<time_t>(config_.timeout_s);
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    httplib::Headers headers;
    if (const char* token = std::getenv(config_.token_env.c_str()))
        headers.emplace("Authorization", std::string("Bearer ") + token);

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200)
        return std::nullopt;
    try {
        auto j = nlohmann::json::parse(res->body);
        std::string content = j.at("choices").at(0).at("message").at("content");
        return parse_reply(content);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<MigrationPlan> refine_migration(const World& world,
                                              const std::optional<MigrationPlan>& incumbent,
                                              int client_server,
                                              const ObjectiveWeights& weights,
                                              const CostOptions& opts) {
    if (!incumbent)
        return std::nullopt;
    try {
        auto best = oracle_best_migration(world, incumbent->agent_id, client_server,
                                          weights, opts);
        if (best && best->gain.net_s > incumbent->gain.net_s)
            return best;
    } catch (const std::exception&) {
    }
    return incumbent;
}

} // namespace antllm
