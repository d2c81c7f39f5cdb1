import json

import numpy as np
import pytest
from click.testing import CliRunner

from opalg import cb
from opalg.cli import main
from opalg.scenario import (ScenarioError, expect_matches, load_scenario,
                            run_check, run_scenario)
from opalg.serialize import mat_to_json


def _mat(rows):
    return mat_to_json(np.array(rows, dtype=complex))


def t2_scenario():
    e11 = [[1, 0], [0, 0]]
    e22 = [[0, 0], [0, 1]]
    e12 = [[0, 1], [0, 0]]

    def diag_img(a):
        a = np.array(a, dtype=complex)
        return np.block([[a, np.zeros((2, 2))],
                         [np.zeros((2, 2)), np.diag(np.diag(a))]])

    return {
        "ambients": {"M2": [2], "M2pC2": [2, 2]},
        "algebras": {"T2": {"ambient": "M2",
                            "basis": [_mat(e11), _mat(e22), _mat(e12)]}},
        "covers": {
            "inc": {"algebra": "T2", "ambient": "M2",
                    "j": [_mat(e11), _mat(e22), _mat(e12)]},
            "diag": {"algebra": "T2", "ambient": "M2pC2",
                     "j": [mat_to_json(diag_img(m))
                           for m in (e11, e22, e12)]},
        },
        "group": {"table": [[0, 1], [1, 0]]},
        "systems": {"sign": {"algebra": "T2",
                             "action": {"type": "ad",
                                        "unitaries": [_mat([[1, 0], [0, 1]]),
                                                      _mat([[1, 0],
                                                            [0, -1]])]}}},
        "checks": [
            {"op": "structure", "cover": "diag",
             "expect": {"dim": 6, "blocks": [2, 1, 1]}},
            {"op": "shilov", "cover": "diag",
             "expect": {"shilov_block_dims": [1, 1], "essential": False}},
            {"op": "envelope", "cover": "diag",
             "expect": {"dim": 4, "blocks": [2]}},
            {"op": "order", "upper": "diag", "lower": "inc",
             "expect": {"verdict": "Morphism"}},
            {"op": "admissible", "system": "sign", "cover": "diag",
             "expect": {"verdict": "Admissible"}},
            {"op": "crossed", "system": "sign", "expect": {"dim": 6}},
        ],
    }


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "t2.json"
    path.write_text(json.dumps(t2_scenario()))
    return str(path)


@pytest.fixture()
def budgets_guard():
    saved = cb.MAX_ITER
    yield
    cb.MAX_ITER = saved


class TestScenario:
    def test_run_scenario_all_pass(self):
        report = run_scenario(t2_scenario())
        assert report["all_pass"]
        assert not report["inconclusive"]
        assert len(report["checks"]) == 6

    def test_failed_expectation(self):
        raw = t2_scenario()
        raw["checks"] = [{"op": "structure", "cover": "diag",
                          "expect": {"dim": 7}}]
        report = run_scenario(raw)
        assert not report["all_pass"]

    def test_unknown_cover(self):
        sc = load_scenario(t2_scenario())
        with pytest.raises(ScenarioError):
            sc.cover("nope")

    def test_unknown_op(self):
        sc = load_scenario(t2_scenario())
        with pytest.raises(ScenarioError):
            run_check(sc, {"op": "frobnicate"})

    def test_bad_ambient(self):
        with pytest.raises(ScenarioError):
            load_scenario({"ambients": {"bad": [0]}})

    def test_wrong_image_count(self):
        raw = t2_scenario()
        raw["covers"]["inc"]["j"] = raw["covers"]["inc"]["j"][:2]
        sc = load_scenario(raw)
        with pytest.raises(ScenarioError):
            sc.cover("inc")

    def test_partial_op(self):
        raw = t2_scenario()
        raw["checks"] = [{"op": "partial", "system": "sign",
                          "cover": "diag",
                          "expect": {"verified": True,
                                     "subalgebra_dim": 6}}]
        report = run_scenario(raw)
        assert report["all_pass"]


class TestExpectMatches:
    def test_nested_and_tolerant(self):
        assert expect_matches({"a": [1, 2.0000004]}, {"a": [1, 2], "b": 3})
        assert not expect_matches({"a": [1, 3]}, {"a": [1, 2]})
        assert not expect_matches({"missing": 1}, {})

    def test_bool_is_not_number(self):
        assert not expect_matches(True, 1)
        assert expect_matches(True, True)


class TestCli:
    def test_run_all_pass(self, scenario_file):
        res = CliRunner().invoke(main, ["run", scenario_file])
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert report["all_pass"]

    def test_run_text_format(self, scenario_file):
        res = CliRunner().invoke(main,
                                 ["run", scenario_file, "--format", "text"])
        assert res.exit_code == 0
        assert "PASS" in res.output

    def test_failing_expect_exits_1(self, tmp_path):
        raw = t2_scenario()
        raw["checks"] = [{"op": "structure", "cover": "diag",
                          "expect": {"dim": 7}}]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(raw))
        res = CliRunner().invoke(main, ["run", str(path)])
        assert res.exit_code == 1

    def test_malformed_json_exits_3(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        res = CliRunner().invoke(main, ["run", str(path)])
        assert res.exit_code == 3

    def test_unknown_op_exits_3(self, tmp_path):
        raw = t2_scenario()
        raw["checks"] = [{"op": "frobnicate"}]
        path = tmp_path / "odd.json"
        path.write_text(json.dumps(raw))
        res = CliRunner().invoke(main, ["run", str(path)])
        assert res.exit_code == 3

    def test_single_check_command(self, scenario_file):
        res = CliRunner().invoke(main, ["structure", scenario_file,
                                        "--cover", "diag"])
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert report["checks"][0]["result"]["dim"] == 6

    def test_order_command(self, scenario_file):
        res = CliRunner().invoke(main, ["order", scenario_file,
                                        "--upper", "diag",
                                        "--lower", "inc"])
        assert res.exit_code == 0

    def test_join_command(self, scenario_file):
        res = CliRunner().invoke(main, ["join", scenario_file,
                                        "--covers", "diag,inc"])
        assert res.exit_code == 0

    def test_starved_solver_exits_2(self, scenario_file, budgets_guard):
        # With a one-iteration feasibility budget the complete-isometry
        # check of the cover cannot conclude.
        res = CliRunner().invoke(main, ["structure", scenario_file,
                                        "--cover", "diag",
                                        "--max-iter", "1"])
        assert res.exit_code == 2
