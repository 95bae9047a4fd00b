import json

import pytest

import antllm


@pytest.fixture(scope="module")
def scenario():
    return antllm.generate_scenario(servers=4, tasks=6, seed=3)


def test_generate_and_roundtrip(scenario, tmp_path):
    assert len(scenario.server_ids) == 4
    assert len(scenario.task_ids) == 6
    assert scenario.seed == 3
    assert "Scenario(" in repr(scenario)

    text = scenario.to_json()
    assert antllm.Scenario.from_json(text).to_json() == text

    path = tmp_path / "sc.json"
    scenario.save(str(path))
    assert antllm.Scenario.from_file(str(path)).to_json() == text

    # The serialized form is plain JSON.
    json.loads(text)


def test_place_covers_every_task(scenario):
    rows = antllm.place(scenario, policy="antllm", refiner="local")
    assert [r["task_id"] for r in rows] == scenario.task_ids
    servers = set(scenario.server_ids)
    for row in rows:
        assert row["score"] >= 0.0
        assert row["assignments"]
        assert set(row["assignments"].values()) <= servers


def test_simulate_metrics_are_additive(scenario):
    record = antllm.simulate(scenario, policy="greedy")
    assert record["infeasible_tasks"] == 0
    assert len(record["rows"]) == len(scenario.task_ids)
    for row in record["rows"] + [record["totals"]]:
        assert row["total_time_s"] == pytest.approx(
            row["initial_time_s"] + row["migration_time_s"] + row["process_time_s"]
        )


def test_simulate_is_deterministic(scenario):
    a = antllm.simulate(scenario, policy="antllm")
    b = antllm.simulate(scenario, policy="antllm")
    assert a == b


def test_compare_runs_every_policy(scenario):
    result = antllm.compare(scenario)
    assert set(result) == {"antllm", "greedy", "random", "polling"}
    for record in result.values():
        assert record["totals"]["total_time_s"] > 0.0


def test_oracle_check_bounds_the_solver(scenario):
    for row in antllm.oracle_check(scenario, policy="antllm"):
        assert row["policy_score"] >= row["oracle_score"] - 1e-9
        assert row["gap"] >= -1e-9


def test_migrate_reports_deployed_agents(scenario):
    rows = antllm.migrate(scenario, policy="greedy")
    assert rows
    for row in rows:
        assert row["source"] in scenario.server_ids
        assert row["target"] is None or row["target"] in scenario.server_ids


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        antllm.Scenario.from_json("not json at all")
    with pytest.raises(ValueError):
        antllm.Scenario.from_json("{}")
    with pytest.raises(RuntimeError):
        antllm.place(antllm.generate_scenario(2, 1, 1), policy="nonsense")
