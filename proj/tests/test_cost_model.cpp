#include <doctest.h>

#include "antllm/baselines.hpp"
#include "fixtures.hpp"

#include <random>

using namespace antllm;
using namespace antllm::testing;

TEST_CASE("transmit latency") {
    auto w = make_world(1, {});
    auto t = make_task("t", {}, "e0");
    t.file_size_mb = 40;
    t.prompt_time_s = 0.5;
    CHECK(transmit_latency(w, t) == doctest::Approx(2.5)); // 40/20 + 0.5

    t.file_size_mb = 0;
    t.prompt_time_s = 0.3;
    CHECK(transmit_latency(w, t) == doctest::Approx(0.3));

    auto w30 = make_world(1, {}, 20.0, 30.0);
    t.file_size_mb = 60;
    t.prompt_time_s = 0;
    CHECK(transmit_latency(w30, t) == doctest::Approx(2.0));
}

TEST_CASE("migration latency") {
    auto w = make_world(2, line_links(2), 20.0);
    w.servers[0].export_time_s = 1.0;
    w.servers[1].load_time_s = 1.0;
    w.servers[1].init_base_s = 2.0;

    auto a = make_agent("a0", 1, 1);
    a.memory_state_gb = 0.05; // 400 Mb over 20 Mbps -> 20 s
    CHECK(migration_latency(w, a, 0, 1) == doctest::Approx(24.0));

    // Local transfer: bandwidth sentinel makes the transfer term vanish.
    w.servers[0].init_base_s = 2.0;
    w.servers[0].load_time_s = 1.0;
    CHECK(migration_latency(w, a, 0, 0) == doctest::Approx(4.0));

    a.memory_state_gb = 0.0;
    CHECK(migration_latency(w, a, 0, 1) == doctest::Approx(4.0));
}

TEST_CASE("initiation latency") {
    auto w = make_world(2, line_links(2));
    for (auto& s : w.servers) {
        s.init_base_s = 1.0;
        s.init_per_agent_s = 0.5;
    }
    w.agents = {make_agent("a0", 1, 1), make_agent("a1", 1, 1)};
    w.rebuild_index();

    // Post-placement counts 2 and 3.
    apply_assignment(w.servers[0], make_agent("x0", 0.1, 0.1));
    apply_assignment(w.servers[1], make_agent("x1", 0.1, 0.1));
    apply_assignment(w.servers[1], make_agent("x2", 0.1, 0.1));

    auto t = make_task("t", {"a0", "a1"});
    Placement p;
    p.assignments = {{"a0", "e0"}, {"a1", "e1"}};
    CHECK(initiation_latency(w, t, p) == doctest::Approx(4.5)); // (1+1.0)+(1+1.5)

    // Warm start: already running agents contribute nothing.
    w.agents[0].host = "e0";
    w.agents[1].host = "e1";
    CHECK(initiation_latency(w, t, Placement{}) == doctest::Approx(0.0));

    // Single agent onto an empty server.
    World w2 = make_world(1, {});
    w2.servers[0].init_base_s = 1.0;
    w2.servers[0].init_per_agent_s = 0.5;
    w2.agents = {make_agent("a0", 1, 1)};
    w2.rebuild_index();
    Placement p2;
    p2.assignments = {{"a0", "e0"}};
    CHECK(initiation_latency(w2, make_task("t", {"a0"}), p2) == doctest::Approx(1.5));

    CHECK_THROWS_AS(initiation_latency(w2, make_task("t", {"a0"}), Placement{}),
                    UnassignedAgent);
}

TEST_CASE("processing latency and totals") {
    Task t;
    t.file_processing_time_s = 3;
    t.llm_time_s = 2;
    CHECK(processing_latency(t) == doctest::Approx(5.0));
    t.file_processing_time_s = 0;
    CHECK(processing_latency(t) == doctest::Approx(2.0));
    t.llm_time_s = 0;
    CHECK(processing_latency(t) == doctest::Approx(0.0));

    CHECK(total_latency(2.5, 0, 4.5, 5).total_s == doctest::Approx(12.0));
    CHECK(total_latency(2.5, 24, 4.5, 5).total_s == doctest::Approx(36.0));
    CHECK(total_latency(0, 0, 0, 0).total_s == doctest::Approx(0.0));
}

TEST_CASE("total latency additivity is exact for random components") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 100.0);
    for (int i = 0; i < 10000; ++i) {
        double a = uni(rng), b = uni(rng), c = uni(rng), d = uni(rng);
        auto cb = total_latency(a, b, c, d);
        CHECK(cb.total_s == cb.transmit_s + cb.migration_s + cb.initiation_s +
                                cb.processing_s);
    }
}

TEST_CASE("transmit and migration latency are monotone in size") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.0, 50.0);
    auto w = make_world(2, line_links(2));
    for (int i = 0; i < 1000; ++i) {
        auto t = make_task("t", {}, "e0");
        t.file_size_mb = uni(rng);
        double base = transmit_latency(w, t);
        t.file_size_mb += uni(rng);
        CHECK(transmit_latency(w, t) >= base);

        auto a = make_agent("a", 1, 1);
        a.memory_state_gb = uni(rng) / 100.0;
        double mig = migration_latency(w, a, 0, 1);
        a.memory_state_gb += uni(rng) / 100.0;
        CHECK(migration_latency(w, a, 0, 1) >= mig);
    }
}

TEST_CASE("cpu cost") {
    CHECK(cpu_cost(30.0, 2.5, 20.0) == doctest::Approx(7.5));
    CHECK(cpu_cost(12.0, 2.5, 0.0) == doctest::Approx(9.5));
    CHECK(cpu_cost(22.5, 2.5, 20.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(cpu_cost(10.0, 12.0, 0.0), NegativeCost);
}

TEST_CASE("storage cost") {
    std::vector<Task> tasks(2);
    tasks[0].storage_gb = 1;
    tasks[1].storage_gb = 2;
    std::vector<Agent> agents(2);
    agents[0].memory_state_gb = 0.05;
    agents[1].memory_state_gb = 0.1;
    CHECK(storage_cost(tasks, agents) == doctest::Approx(3.15));
    CHECK(storage_cost({}, {}) == doctest::Approx(0.0));
    CHECK(storage_cost({}, std::span<const Agent>(agents.data() + 1, 1)) ==
          doctest::Approx(0.1));
}

TEST_CASE("comm cost counts only cross-server events") {
    std::vector<CommEvent> events = {{"a", "b", 5}, {"b", "c", 10}, {"c", "a", 2}};
    auto cross = [](const std::string& id) { return id == "a" ? 0 : 1; };
    CHECK(comm_cost(events, [](const std::string&) { return 0; }) == doctest::Approx(0.0));
    CHECK(comm_cost(events, cross) == doctest::Approx(7.0)); // a<->b and c<->a cross
    auto all_cross = [](const std::string& id) { return static_cast<int>(id[0]); };
    CHECK(comm_cost(events, all_cross) == doctest::Approx(17.0));
    CHECK(comm_cost({}, all_cross) == doctest::Approx(0.0));
}

TEST_CASE("ead objective: single agent, single server reduces to cpu load") {
    auto w = make_world(1, {});
    w.servers[0].capacity = {4, 4, 40, 20};
    w.servers[0].remaining = w.servers[0].capacity;
    w.agents = {make_agent("a0", 1, 1)};
    w.rebuild_index();
    auto t = make_task("t", {"a0"});
    Placement p;
    p.assignments = {{"a0", "e0"}};
    ObjectiveWeights zero_theta{.theta = 0.0};
    CHECK(ead_objective(w, t, p, zero_theta) == doctest::Approx(1.0 / 4.0));
}

TEST_CASE("ead objective: co-located dependent pair has no theta term") {
    auto w = make_world(2, line_links(2));
    w.agents = {make_agent("a0", 0.5, 0.5), make_agent("a1", 0.5, 0.5)};
    w.agents[1].dependencies.insert("a0");
    w.rebuild_index();
    auto t = make_task("t", {"a0", "a1"});
    Placement together;
    together.assignments = {{"a0", "e0"}, {"a1", "e0"}};

    ObjectiveWeights with_theta{.theta = 5.0};
    ObjectiveWeights no_theta{.theta = 0.0};
    CHECK(ead_objective(w, t, together, with_theta) ==
          doctest::Approx(ead_objective(w, t, together, no_theta)));

    Placement apart;
    apart.assignments = {{"a0", "e0"}, {"a1", "e1"}};
    CHECK(ead_objective(w, t, apart, with_theta) >
          ead_objective(w, t, apart, no_theta));
}

TEST_CASE("ead objective: oracle minimum matches exhaustive enumeration") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto [w, t] = random_instance(rng, 3, 3);
        ObjectiveWeights weights;
        EadContext ctx = make_ead_context(w, t, weights);

        // Independent enumeration of all 27 assignments.
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> assignment(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    assignment = {ctx.candidates[i], ctx.candidates[j],
                                  ctx.candidates[k]};
                    if (ead_feasible(ctx, assignment))
                        best = std::min(best,
                                        ead_objective(ctx, assignment, false));
                }

        auto oracle = brute_force_optimal(w, t, weights);
        CHECK(oracle.score == doctest::Approx(best));
    }
}

TEST_CASE("ead objective: optimal score invariant under server relabeling") {
    std::mt19937_64 rng(77);
    auto [w, t] = random_instance(rng, 3, 2);
    ObjectiveWeights weights;
    double before = brute_force_optimal(w, t, weights).score;

    // Swap the first two servers wholesale (ids stay attached to their data).
    World permuted = w;
    std::swap(permuted.servers[0], permuted.servers[1]);
    std::swap(permuted.net.adjacency[0], permuted.net.adjacency[1]);
    for (auto& row : permuted.net.adjacency)
        for (auto& v : row)
            v = v == 0 ? 1 : (v == 1 ? 0 : v);
    std::swap(permuted.net.bandwidth_mbps[0], permuted.net.bandwidth_mbps[1]);
    for (auto& row : permuted.net.bandwidth_mbps)
        std::swap(row[0], row[1]);
    std::swap(permuted.net.client_bandwidth_mbps[0],
              permuted.net.client_bandwidth_mbps[1]);
    permuted.net.finalize();
    permuted.rebuild_index();
    Task t2 = t;

    CHECK(brute_force_optimal(permuted, t2, weights).score == doctest::Approx(before));
}

TEST_CASE("net gain: identity and hand-computed line instance") {
    // c(e0) -- e1 -- e2, agent on e1, candidate target e2.
    auto w = make_world(3, line_links(3));
    w.net.per_hop_latency_s = 0.1;
    w.agents = {make_agent("a0", 1, 1)};
    w.agents[0].host = "e1";
    w.rebuild_index();
    w.sync_occupancy();

    ObjectiveWeights weights{.gamma = 0.1, .theta_dep = 0.5};
    CostOptions opts;
    opts.nominal_msg_mb = 0.0; // isolates the hop-latency part

    NetGain g = net_gain(w, "a0", 2, 0, weights, opts);
    // Moving away from the client: latency gain 0.1 - 0.2 = -0.1.
    CHECK(g.latency_gain_s == doctest::Approx(-0.1));
    CHECK(g.net_s == doctest::Approx(g.latency_gain_s - g.migration_cost_s -
                                     g.dependency_cost_s));
}

TEST_CASE("net gain: self-migration is never profitable") {
    std::mt19937_64 rng(5);
    ObjectiveWeights weights;
    for (int trial = 0; trial < 200; ++trial) {
        auto [w, t] = random_instance(rng, 4, 2);
        w.agents[0].host = "e1";
        w.sync_occupancy();
        NetGain g = net_gain(w, "a0", w.server_of("e1"), 0, weights);
        CHECK(g.latency_gain_s == doctest::Approx(0.0));
        CHECK(g.net_s <= 1e-12);
    }
}

TEST_CASE("net gain: infeasible target throws") {
    auto w = make_world(2, line_links(2));
    w.servers[1].capacity = {0.1, 0.1, 0.1, 0.1};
    w.servers[1].remaining = w.servers[1].capacity;
    w.agents = {make_agent("a0", 1, 1)};
    w.agents[0].host = "e0";
    w.rebuild_index();
    w.sync_occupancy();
    CHECK_THROWS_AS(net_gain(w, "a0", 1, 0, ObjectiveWeights{}), TargetInfeasible);
}

TEST_CASE("net gain: ring scenario best target matches enumeration") {
    auto w = make_world(4, ring_links(4));
    w.net.per_hop_latency_s = 0.5;
    for (auto& s : w.servers) {
        s.export_time_s = 0.01;
        s.load_time_s = 0.01;
    }
    w.agents = {make_agent("a0", 0.5, 0.5)};
    w.agents[0].host = "e0";
    w.rebuild_index();
    w.sync_occupancy();

    // Client moved two hops away from the agent's host.
    int client = 2;
    ObjectiveWeights weights;
    auto plan = oracle_best_migration(w, "a0", client, weights);
    REQUIRE(plan.has_value());

    double best = -std::numeric_limits<double>::infinity();
    std::string best_id;
    for (int s : w.net.adjacency[0]) {
        NetGain g = net_gain(w, "a0", s, client, weights);
        if (g.net_s > best) {
            best = g.net_s;
            best_id = w.servers[s].id;
        }
    }
    CHECK(plan->target == best_id);
    CHECK(plan->gain.net_s == doctest::Approx(best));
    CHECK(plan->gain.net_s > 0.0);
}
