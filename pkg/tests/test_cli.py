"""End-to-end CLI behavior: flags, exit statuses, JSON output, determinism."""

import json

import pytest

from nclab.cli import build_parser, main

SUBCOMMANDS = [
    "eval",
    "commute",
    "pi",
    "al",
    "annihilator",
    "star",
    "poisson",
    "diag",
    "centralizer",
    "bergman-pipeline",
    "probe",
]


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestHelp:
    @pytest.mark.parametrize("cmd", SUBCOMMANDS)
    def test_every_subcommand_has_help(self, cmd, capsys):
        with pytest.raises(SystemExit) as e:
            build_parser().parse_args([cmd, "--help"])
        assert e.value.code == 0
        out = capsys.readouterr().out
        assert "--json" in out and "--field" in out

    def test_unknown_flag_rejected(self, capsys):
        code, out, err = run(["eval", "--f", "x1", "--bogus"], capsys)
        assert code == 1


class TestExitStatuses:
    def test_eval_ok(self, capsys):
        code, out, _ = run(["eval", "--f", "x1*x2 - x2*x1", "--s", "2"], capsys)
        assert code == 0
        assert "x1*x2 - x2*x1" in out

    def test_commute_pass_and_fail(self, capsys):
        code, _, _ = run(["commute", "--f", "x1", "--g", "x1^2"], capsys)
        assert code == 0
        code, out, _ = run(["commute", "--f", "x1", "--g", "x2"], capsys)
        assert code == 2
        assert "FAIL" in out

    def test_al_pass(self, capsys):
        code, out, _ = run(["al", "--n", "2"], capsys)
        assert code == 0
        assert "PASS" in out

    def test_usage_error_is_exit_1(self, capsys):
        code, _, _ = run(["centralizer"], capsys)  # missing --f
        assert code == 1

    def test_bad_field_is_exit_1(self, capsys):
        code, _, err = run(["eval", "--f", "x1", "--field", "fp:6"], capsys)
        assert code == 1
        code, _, err = run(["eval", "--f", "x1", "--field", "zz"], capsys)
        assert code == 1

    def test_parse_error_is_exit_1(self, capsys):
        code, _, err = run(["eval", "--f", "x1 +"], capsys)
        assert code == 1
        assert "syntax-error" in err

    def test_unknown_generator_is_exit_1(self, capsys):
        code, _, err = run(["eval", "--f", "x3", "--s", "2"], capsys)
        assert code == 1
        assert "unknown-generator" in err

    def test_star_characteristic_guard_fails_fast(self, capsys):
        code, _, err = run(
            ["star", "--a", "x1", "--b", "x2", "--field", "fp:7", "--order", "7"], capsys
        )
        assert code == 1
        assert "characteristic-too-small" in err

    def test_centralizer_pass(self, capsys):
        code, out, _ = run(["centralizer", "--f", "x1^2", "--s", "2", "--d", "4"], capsys)
        assert code == 0
        assert "PASS" in out and "x1" in out

    def test_probe_reports_mechanism(self, capsys):
        code, out, _ = run(["probe", "--n", "2", "--dmax", "3"], capsys)
        assert code == 0
        assert "contradiction" in out

    def test_pipeline_single_line_verdict(self, capsys):
        code, out, _ = run(
            ["bergman-pipeline", "--f", "x1", "--g", "x1^2", "--nmax", "2", "--dmax", "3"],
            capsys,
        )
        assert code == 0
        lines = [l for l in out.strip().splitlines() if l and not l.startswith("seed")]
        assert lines[-1].startswith("verdict:")


class TestJson:
    @pytest.mark.parametrize(
        "argv",
        [
            ["eval", "--f", "x1^2 - 1"],
            ["commute", "--f", "x1", "--g", "x1^3"],
            ["pi", "--f", "x1*x2", "--n", "2"],
            ["al", "--n", "2"],
            ["annihilator", "--f", "x1", "--g", "x1^2", "--nmax", "2", "--dmax", "3"],
            ["star", "--a", "x1", "--b", "x2"],
            ["poisson", "--a", "x1", "--b", "x2"],
            ["diag", "--n", "2", "--order", "2"],
            ["centralizer", "--f", "x1^2", "--d", "4"],
            ["bergman-pipeline", "--f", "x1", "--g", "x1^2", "--nmax", "2", "--dmax", "2"],
            ["probe", "--n", "2", "--dmax", "2"],
        ],
    )
    def test_json_mode_emits_one_document(self, argv, capsys):
        code, out, _ = run(argv + ["--json"], capsys)
        assert code == 0
        doc = json.loads(out)  # exactly one document
        assert doc["engine"]["name"] == "nclab"
        assert doc["seed"] == 1729
        assert "report" in doc

    def test_out_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run(["al", "--n", "2", "--json", "--out", str(target)], capsys)
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["report"]["standard_vanishes"] is True

    def test_seed_is_embedded_and_overridable(self, capsys):
        code, out, _ = run(["diag", "--n", "2", "--seed", "7", "--json"], capsys)
        assert code == 0
        assert json.loads(out)["seed"] == 7

    def test_tensor_file_flag(self, tmp_path, capsys):
        tensor = {"variables": ["x1[1,1]", "x2[1,1]"], "entries": [[0, 1, "3"]]}
        path = tmp_path / "tensor.json"
        path.write_text(json.dumps(tensor))
        code, out, _ = run(
            ["poisson", "--a", "x1", "--b", "x2", "--poisson", str(path)], capsys
        )
        assert code == 0
        assert "{a,b} = 3" in out
        code, _, err = run(
            ["poisson", "--a", "x1", "--b", "x2", "--poisson", str(tmp_path / "nope.json")],
            capsys,
        )
        assert code == 1

    def test_json_decodes_to_report(self, capsys):
        from nclab import serialize

        code, out, _ = run(
            ["centralizer", "--f", "x1*x2", "--d", "3", "--json"], capsys
        )
        doc, rep = serialize.loads(out)
        assert rep.passed


class TestDeterminism:
    BATTERY = [
        ["eval", "--f", "2x1 - x2^2", "--json"],
        ["al", "--n", "2", "--json"],
        ["annihilator", "--f", "x1", "--g", "x1^2 + 1", "--nmax", "2", "--dmax", "3", "--json"],
        ["star", "--a", "x1", "--b", "x2", "--json"],
        ["diag", "--n", "3", "--order", "2", "--json"],
        ["centralizer", "--f", "x1^2", "--d", "4", "--json"],
        ["bergman-pipeline", "--f", "x1", "--g", "x1^2", "--nmax", "2", "--dmax", "3", "--json"],
        ["probe", "--n", "2", "--dmax", "3", "--json"],
    ]

    def test_identical_runs_produce_identical_bytes(self, capsys):
        first = []
        for argv in self.BATTERY:
            _, out, _ = run(argv, capsys)
            first.append(out)
        for argv, expected in zip(self.BATTERY, first):
            _, out, _ = run(argv, capsys)
            assert out == expected
