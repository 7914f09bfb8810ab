"""Command-line dispatch: JSON envelopes, JSON lines and exit codes."""

import json

import pytest

from cli import main

FLIP = {"n": 2, "sigma": [[0, 1], [0, 1]], "rho": [[0, 1], [0, 1]]}
P3 = {"n": 3, "sigma": [[1, 2, 0]] * 3, "rho": [[0, 1, 2]] * 3}
QUANDLE = {
    "n": 3,
    "sigma": [[0, 1, 2]] * 3,
    "rho": [[(2 * b - a) % 3 for a in range(3)] for b in range(3)],
}


def run(argv, capsys):
    code = main(argv)
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]
    return code, lines


class TestChecks:
    def test_ybe_on_flip(self, write_json, capsys):
        code, (report,) = run(["check", "ybe", write_json("flip.json", FLIP)], capsys)
        assert code == 0
        assert report["format_version"] == 1
        assert report["command"] == "check ybe"
        assert report["ok"]
        assert report["result"]["flags"]["involutive"]

    def test_non_solution_exits_one(self, write_json, capsys):
        bad = {"n": 2, "sigma": [[0, 0], [0, 0]], "rho": [[1, 1], [1, 1]]}
        code, (report,) = run(["check", "ybe", write_json("bad.json", bad)], capsys)
        assert code == 1
        assert not report["ok"]
        assert report["error"]["error"] == "YbeViolation"
        assert report["error"]["witness"]["component"] == "YBE2"

    def test_reflection_report(self, write_json, capsys):
        solution = write_json("p3.json", P3)
        code, (report,) = run(["check", "reflection", solution, write_json("k.json", {"k": [1, 2, 0]})], capsys)
        assert code == 0
        assert report["result"]["ok"]
        code, (report,) = run(
            ["check", "reflection", solution, write_json("c.json", {"k": [0, 0, 0]}), "--side", "left"], capsys
        )
        assert code == 1
        assert not report["ok"]

    def test_skew_brace_file_as_braiding(self, write_json, capsys, z4_brace):
        code, (report,) = run(["check", "braiding", write_json("z4.json", z4_brace.to_dict())], capsys)
        assert code == 0
        assert report["result"]["skew_brace"] == z4_brace.to_dict()
        assert report["result"]["faithful"] is False

    def test_trivial_shelf_gives_the_flip(self, write_json, capsys):
        shelf = {"n": 2, "tri": [[0, 0], [1, 1]]}
        code, (report,) = run(["check", "shelf", write_json("shelf.json", shelf)], capsys)
        assert code == 0
        assert report["result"]["sigma"] == FLIP["sigma"]
        assert report["result"]["rho"] == FLIP["rho"]

    def test_flip_on_s3_is_refused_before_reflection_checks(self, write_json, s3, capsys):
        flip = {**s3.to_dict(), "sigma": [list(range(6))] * 6, "rho": [list(range(6))] * 6}
        path = write_json("flip_s3.json", flip)
        code, (report,) = run(["check", "braiding", path], capsys)
        assert code == 1
        assert report["result"]["report"]["failed"] == "BG5"
        code, (report,) = run(["check", "group-reflection", path, write_json("k.json", {"k": [0] * 6})], capsys)
        assert code == 1
        assert report["error"]["error"] == "NotABraiding"


class TestMalformedInput:
    def test_unknown_field(self, write_json, capsys):
        code, (report,) = run(["check", "ybe", write_json("x.json", {**FLIP, "tau": []})], capsys)
        assert code == 2
        assert report["error"]["error"] == "SchemaError"

    def test_unreadable_file(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        code, (report,) = run(["check", "ybe", str(path)], capsys)
        assert code == 2

    def test_declared_order_must_match(self, write_json, capsys):
        code, (report,) = run(["check", "ybe", write_json("x.json", {**FLIP, "n": 3})], capsys)
        assert code == 2
        assert report["error"]["error"] == "SizeMismatch"

    def test_group_reflections_need_a_source(self, capsys):
        code, (report,) = run(["enumerate", "group-reflections"], capsys)
        assert code == 2
        assert report["command"] == "enumerate group-reflections"


class TestTwistCommands:
    def test_twist_round_trip(self, write_json, capsys):
        solution = write_json("quandle.json", QUANDLE)
        code, (report,) = run(["twist", "from-reflection", solution, write_json("k.json", {"k": [0, 1, 2]})], capsys)
        assert code == 0
        twist = write_json("twist.json", report["result"])
        code, (report,) = run(["check", "twist", solution, twist], capsys)
        assert code == 0
        assert report["result"]["ok"]

    def test_derive_defaults_to_identity(self, write_json, capsys):
        code, (report,) = run(["derive", write_json("quandle.json", QUANDLE)], capsys)
        assert code == 0
        sigma = report["result"]["sigma"]
        assert sigma == [[(2 * a - b) % 3 for b in range(3)] for a in range(3)]

    def test_monoid_classes(self, write_json, capsys):
        code, (report,) = run(["monoid", "classes", write_json("p3.json", P3), "--degree", "2"], capsys)
        assert code == 0
        assert len(report["result"]["classes"]) == 2


class TestEnumerations:
    def test_groups_as_json_lines(self, capsys):
        code, lines = run(["enumerate", "groups", "--order", "4"], capsys)
        assert code == 0
        assert len(lines) == 2
        assert all(line["identity"] == 0 for line in lines)

    def test_reflections_as_json_lines(self, write_json, capsys):
        code, lines = run(["enumerate", "reflections", write_json("p3.json", P3)], capsys)
        assert code == 0
        assert [line["k"] for line in lines] == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]

    def test_size_gate_exits_three(self, capsys):
        code, (report,) = run(["enumerate", "solutions", "--order", "4"], capsys)
        assert code == 3
        assert report["error"]["error"] == "SizeLimitExceeded"

    @pytest.mark.parametrize("order,count", [(1, 0), (3, 0), (5, 8)])
    def test_hunt_counts(self, order, count, capsys):
        code, (report,) = run(["hunt", "ell-counterexamples", "--max-order", str(order)], capsys)
        assert code == 0
        assert report["result"]["count"] == count
        assert all(finding["order"] == 4 for finding in report["result"]["findings"])
