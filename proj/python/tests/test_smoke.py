import itertools
import json
import math

import pytest

import cellless


def small_scenario():
    """A built-in factory hall trimmed to the PoA of its first user and three users."""
    data = json.loads(cellless.builtin_scenario("inf-dh-desk", 1).to_json())
    data["users"] = data["users"][:3]
    keep = {u["id"] for u in data["users"]}
    data["humans"] = [h for h in data["humans"] if h.get("linked_user") in keep or h.get("linked_user") is None][:3]
    data.pop("placement", None)
    return cellless.parse_scenario(json.dumps(data))


def test_builtins():
    names = cellless.builtin_names()
    assert "inf-dh-desk" in names
    assert "umi-sc-desk" in names
    s = cellless.builtin_scenario("inf-dh-desk", 3)
    assert len(s.users) == 20
    assert len(s.humans) == 40
    assert s.to_json() == cellless.builtin_scenario("inf-dh-desk", 3).to_json()


def test_invalid_scenario_raises():
    data = json.loads(cellless.builtin_scenario("inf-dh-desk", 1).to_json())
    data["clutter"]["density"] = 1.5
    with pytest.raises(cellless.ValidationError):
        cellless.parse_scenario(json.dumps(data))
    with pytest.raises(cellless.ParseError):
        cellless.parse_scenario("{")


def test_ctm_solution_is_valid_and_reevaluates():
    s = small_scenario()
    cfg = cellless.CtmConfig()
    cfg.seed = 4
    cfg.realizations_per_check = 3
    sol, metrics = cellless.solve_ctm(s, cfg)
    assert cellless.validate(sol, s) == []
    again = cellless.evaluate(sol, s, 4, 3)
    assert again.user_rate_bps == metrics.user_rate_bps
    assert again.feasible == metrics.feasible
    back = cellless.parse_solution(sol.to_json())
    assert set(back.tx_power_dbm) == set(sol.tx_power_dbm)


def test_hungarian_against_permutations():
    cost = [[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]]
    cols, total = cellless.hungarian(cost)
    best = min(sum(cost[r][p[r]] for r in range(3)) for p in itertools.permutations(range(3)))
    assert total == pytest.approx(best)
    assert sorted(cols) == [0, 1, 2]


def test_geometry_helpers():
    assert cellless.beam_width([0.1], 0.2) == pytest.approx(0.2)
    assert cellless.beam_width([math.radians(170), math.radians(-170)], 0.0) == pytest.approx(math.radians(20))
    assert cellless.element_gain_db(True, math.pi / 2, 0.0) == pytest.approx(8.0)
    assert cellless.incident_field(1.0) > 0.0
