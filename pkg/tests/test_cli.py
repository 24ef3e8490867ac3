import json

import pytest

from app.main import cli


def error_of(result):
    return json.loads(result.stderr.strip().splitlines()[-1])


class TestOrbits:
    def test_box(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2,2"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["domain_size"] == 20
        assert report["orbit_sizes"] == [5, 5, 5, 5]
        assert "runtime_seconds" not in report

    def test_tableaux(self, runner):
        result = runner.invoke(cli, ["orbits", "--inc", "2x2", "--q", "4"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["order"] == 4

    def test_fpl(self, runner):
        result = runner.invoke(cli, ["orbits", "--fpl", "5", "--no-representatives"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["domain_size"] == 429
        assert sorted({s["size"] for s in report["size_counts"]}) == [2, 4, 5, 10]
        assert "representatives" not in report

    def test_csv(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2", "--csv"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "system,action,domain_size,order,orbit_size,count"
        assert lines[1:] == ["rowmotion on J(2x2),rowmotion,6,4,2,1", "rowmotion on J(2x2),rowmotion,6,4,4,1"]

    def test_histogram(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2,2", "--hist"])
        assert result.exit_code == 0
        assert result.stdout == "5 | 4 " + "#" * 40 + "\n"

    def test_timings(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2", "--timings"])
        assert "runtime_seconds" in json.loads(result.stdout)

    def test_output_file(self, runner, tmp_path):
        target = tmp_path / "report.json"
        result = runner.invoke(cli, ["orbits", "--box", "2,2", "-o", str(target)])
        assert result.exit_code == 0
        assert result.stdout == ""
        assert json.loads(target.read_text())["order"] == 4

    def test_promotion_direction(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2,2", "--action", "promotion", "--direction", "1,-1,1"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["action"] == "promotion"

    @pytest.mark.parametrize("workers", ["2", "4", "8"])
    def test_workers_do_not_change_output(self, runner, workers):
        single = runner.invoke(cli, ["orbits", "--box", "2,2,3"])
        pooled = runner.invoke(cli, ["orbits", "--box", "2,2,3", "--workers", workers])
        assert pooled.exit_code == single.exit_code == 0
        assert pooled.stdout == single.stdout


class TestResonance:
    def test_content(self, runner):
        result = runner.invoke(cli, ["resonance", "--inc", "2x2", "--q", "5"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["holds"]
        assert report["map"] == "content"

    def test_xmax(self, runner):
        result = runner.invoke(cli, ["resonance", "--box", "2,2,2", "--map", "xmax"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["frequency"] == 5

    def test_fpl(self, runner):
        result = runner.invoke(cli, ["resonance", "--fpl", "4"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["frequency"] == 8

    def test_failure_exits_one(self, runner):
        result = runner.invoke(cli, ["resonance", "--inc", "2x2", "--q", "5", "--frequency", "4"])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["counterexample"]["reason"]

    def test_orbit_pairs_csv(self, runner):
        result = runner.invoke(cli, ["resonance", "--box", "2,2,2", "--by-orbit", "--csv"])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "system,map,orbit_size,image_orbit_size,count"

    def test_summary_csv(self, runner):
        result = runner.invoke(cli, ["resonance", "--fpl", "3", "--csv"])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0].startswith("system,map,frequency,holds")

    def test_map_mismatch(self, runner):
        result = runner.invoke(cli, ["resonance", "--fpl", "3", "--map", "content"])
        assert result.exit_code == 2
        assert error_of(result)["error"] == "unknown_system"


class TestVerify:
    def test_suite(self, runner):
        result = runner.invoke(cli, ["verify", "--suite", "height2", "--max", "3"])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["suite"] == "height2"
        assert report["passed"]

    def test_csv(self, runner):
        result = runner.invoke(cli, ["verify", "--suite", "brouwer-schrijver", "--max", "1", "--csv"])
        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "suite,parameters,passed,expected,observed",
            'brouwer-schrijver,"{""a"": 1, ""b"": 1}",True,2,2',
        ]

    def test_box_on_sweep_suite(self, runner):
        result = runner.invoke(cli, ["verify", "--suite", "height2", "--box", "2,2,2"])
        assert result.exit_code == 2
        assert error_of(result)["error"] == "invalid_spec"


class TestErrors:
    @pytest.mark.parametrize(
        "args",
        [
            ["orbits", "--box", "2,2", "--inc", "2x2"],
            ["orbits"],
            ["orbits", "--inc", "2x2"],
            ["orbits", "--box", "2,x"],
            ["orbits", "--inc", "2,3", "--q", "5"],
            ["orbits", "--fpl", "3", "--action", "rowmotion"],
        ],
    )
    def test_invalid_input(self, runner, args):
        result = runner.invoke(cli, args)
        assert result.exit_code == 2
        error = error_of(result)
        assert error["error"] == "invalid_spec"
        assert set(error) == {"error", "message", "details"}
        assert result.stdout == ""

    def test_cap(self, runner):
        result = runner.invoke(cli, ["orbits", "--box", "2,2,2", "--cap", "5"])
        assert result.exit_code == 4
        assert error_of(result)["error"] == "resource_limit"

    def test_fpl_too_large(self, runner):
        result = runner.invoke(cli, ["orbits", "--fpl", "7"])
        assert result.exit_code == 4

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert "1.0.0" in result.stdout
