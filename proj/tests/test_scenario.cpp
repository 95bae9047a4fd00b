#include <doctest.h>

#include "fixtures.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using namespace antllm;
using nlohmann::json;

namespace {

std::filesystem::path scenario_dir() { return ANTLLM_SCENARIO_DIR; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Smallest valid scenario, as mutable JSON, for validation tests.
json minimal_scenario() {
    return json{
        {"servers",
         json::array({{{"id", "e0"},
                       {"capacity",
                        {{"cpu", 2.0},
                         {"memory_gb", 2.0},
                         {"storage_gb", 40.0},
                         {"bandwidth_mbps", 20.0}}}},
                      {{"id", "e1"},
                       {"capacity",
                        {{"cpu", 2.0},
                         {"memory_gb", 2.0},
                         {"storage_gb", 40.0},
                         {"bandwidth_mbps", 20.0}}}}})},
        {"network",
         {{"per_hop_latency_s", 0.05},
          {"links", json::array({{{"a", "e0"}, {"b", "e1"}, {"bandwidth_mbps", 20.0}}})},
          {"client_bandwidth_mbps", {{"e0", 20.0}, {"e1", 20.0}}}}},
        {"agents",
         json::array({{{"id", "a0"},
                       {"requirements",
                        {{"cpu", 0.5},
                         {"memory_gb", 0.5},
                         {"storage_gb", 1.0},
                         {"bandwidth_mbps", 1.0}}}}})},
        {"tasks", json::array({{{"id", "t0"},
                                {"origin_server", "e0"},
                                {"required_agents", json::array({"a0"})}}})}};
}

bool mentions(const ValidationError& e, const std::string& needle) {
    for (const auto& v : e.violations)
        if (v.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("the bundled testbed scenario loads cleanly") {
    auto sc = load_scenario(scenario_dir() / "testbed.json");
    CHECK(sc.world.servers.size() == 4);
    CHECK(sc.world.agents.size() == 5);
    CHECK(sc.tasks.size() == 3);
    CHECK(sc.world.servers[3].capacity.storage_gb == doctest::Approx(70.0));
    CHECK(sc.world.net.client_bandwidth_mbps[3] == doctest::Approx(30.0));
    // Square topology: opposite corners are two hops apart.
    CHECK(sc.world.net.hop_count(0, 3) == 2);
    CHECK(sc.world.net.hop_count(0, 1) == 1);
    // No agent starts deployed, so every server is at full remaining capacity.
    for (const auto& s : sc.world.servers)
        CHECK(s.remaining.cpu == doctest::Approx(s.capacity.cpu));
    // The scenario is actually runnable.
    auto record = run_simulation(sc.sim_inputs(), Policy::Greedy);
    CHECK(record.rows.size() == sc.tasks.size());
    CHECK(record.infeasible_tasks == 0);
}

TEST_CASE("save/load round trip is byte identical and semantically equal") {
    auto sc = load_scenario(scenario_dir() / "testbed.json");
    std::string once = scenario_to_json_text(sc);
    auto back = scenario_from_json_text(once);
    CHECK(scenario_to_json_text(back) == once);
    CHECK(back.world.servers.size() == sc.world.servers.size());
    CHECK(back.world.agents.size() == sc.world.agents.size());
    CHECK(back.seed == sc.seed);
    CHECK(back.aco.iterations == sc.aco.iterations);

    auto path = std::filesystem::temp_directory_path() / "antllm_roundtrip.json";
    save_scenario(sc, path);
    CHECK(slurp(path) == once);
    std::filesystem::remove(path);
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(scenario_from_json_text("{not json"), ParseError);
    CHECK_THROWS_AS(load_scenario(scenario_dir() / "does_not_exist.json"), ParseError);
}

TEST_CASE("validation rejects bad scenarios with precise messages") {
    SUBCASE("unknown top-level field") {
        auto j = minimal_scenario();
        j["surprise"] = 1;
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "unknown field 'surprise'"));
        }
    }
    SUBCASE("unknown nested field") {
        auto j = minimal_scenario();
        j["servers"][0]["cores"] = 4;
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "unknown field 'cores'"));
        }
    }
    SUBCASE("negative capacity") {
        auto j = minimal_scenario();
        j["servers"][0]["capacity"]["cpu"] = -1.0;
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "negative resource"));
        }
    }
    SUBCASE("task references a missing agent") {
        auto j = minimal_scenario();
        j["tasks"][0]["required_agents"].push_back("ghost");
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "unknown required agent 'ghost'"));
        }
    }
    SUBCASE("task origin must exist") {
        auto j = minimal_scenario();
        j["tasks"][0]["origin_server"] = "nowhere";
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "unknown origin server"));
        }
    }
    SUBCASE("disconnected network") {
        auto j = minimal_scenario();
        j["network"]["links"] = json::array();
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "connected"));
        }
    }
    SUBCASE("colocation must follow a dependency edge") {
        auto j = minimal_scenario();
        j["agents"][0]["colocate_with"] = json::array({"a0"});
        CHECK_THROWS_AS(scenario_from_json_text(j.dump()), ValidationError);
    }
    SUBCASE("self dependency") {
        auto j = minimal_scenario();
        j["agents"][0]["dependencies"] = json::array({"a0"});
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(mentions(e, "depend on itself"));
        }
    }
    SUBCASE("multiple violations are all reported") {
        auto j = minimal_scenario();
        j["servers"][0]["capacity"]["cpu"] = -1.0;
        j["tasks"][0]["origin_server"] = "nowhere";
        try {
            scenario_from_json_text(j.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.violations.size() >= 2);
        }
    }
}

TEST_CASE("generated scenarios are valid and repeatable") {
    auto a = generate_scenario(5, 8, 11);
    auto b = generate_scenario(5, 8, 11);
    auto c = generate_scenario(5, 8, 12);
    CHECK(scenario_to_json_text(a) == scenario_to_json_text(b));
    CHECK(scenario_to_json_text(a) != scenario_to_json_text(c));

    // The generator's output passes its own strict loader.
    auto reloaded = scenario_from_json_text(scenario_to_json_text(a));
    CHECK(reloaded.world.servers.size() == 5);
    CHECK(reloaded.tasks.size() == 8);
    for (const auto& t : reloaded.tasks)
        CHECK(!t.required_agents.empty());
}

TEST_CASE("generator output matches the frozen golden file") {
    auto golden_path = scenario_dir() / "golden_generated_4x10_seed7.json";
    CHECK(scenario_to_json_text(generate_scenario(4, 10, 7)) == slurp(golden_path));
}

TEST_CASE("experiment CSV: header, shape, and column arithmetic") {
    auto sc = generate_scenario(4, 6, 21);
    auto result = run_experiment(
        sc, {Policy::AntLLM, Policy::Greedy, Policy::Random, Policy::Polling});

    std::ostringstream os;
    write_metrics(result, os, OutputFormat::Csv);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "policy,task_id,initial_time_s,migration_time_s,process_time_s,"
                    "total_time_s,cpu_usage,memory_usage_gb,disk_usage_gb,"
                    "instance_count");

    int rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        ++rows;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        REQUIRE(fields.size() == 10);
        double initial = std::stod(fields[2]), mig = std::stod(fields[3]),
               proc = std::stod(fields[4]), total = std::stod(fields[5]);
        CHECK(total == doctest::Approx(initial + mig + proc));
    }
    // One row per (policy, task) plus a totals row per policy.
    CHECK(rows == 4 * (static_cast<int>(sc.tasks.size()) + 1));

    // Byte-identical on re-emission.
    std::ostringstream again;
    write_metrics(result, again, OutputFormat::Csv);
    CHECK(again.str() == os.str());

    // JSON mirror carries the same totals.
    std::ostringstream js;
    write_metrics(result, js, OutputFormat::Json);
    auto parsed = json::parse(js.str());
    CHECK(parsed.size() == 4 * (sc.tasks.size() + 1));
    for (const auto& row : parsed)
        CHECK(row["total_time_s"].get<double>() ==
              doctest::Approx(row["initial_time_s"].get<double>() +
                              row["migration_time_s"].get<double>() +
                              row["process_time_s"].get<double>()));
}

TEST_CASE("experiment with no tasks emits only the header and totals rows") {
    Scenario sc = load_scenario(scenario_dir() / "testbed.json");
    sc.tasks.clear();
    auto result = run_experiment(sc, {Policy::Greedy});
    std::ostringstream os;
    write_metrics(result, os, OutputFormat::Csv);
    int lines = 0;
    std::istringstream is(os.str());
    for (std::string line; std::getline(is, line);)
        ++lines;
    CHECK(lines == 2); // header + greedy totals
}

TEST_CASE("policy and format name round trips") {
    for (Policy p : {Policy::AntLLM, Policy::Greedy, Policy::Random, Policy::Polling})
        CHECK(policy_from_string(to_string(p)) == p);
    CHECK(format_from_string("csv") == OutputFormat::Csv);
    CHECK(format_from_string("json") == OutputFormat::Json);
    CHECK_THROWS(policy_from_string("bogus"));
    CHECK_THROWS(format_from_string("yaml"));
}
