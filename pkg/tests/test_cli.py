import io, csv, json
import pytest
from src.cli import build_parser, parse_args, resolved_config, run


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def table(text):
    lines = text.splitlines()
    return list(csv.DictReader(lines[2:]))


class TestDistance:
    def test_hellinger_of_bernoulli_pair(self):
        code, out = invoke("distance", "--p", "bern(0.25)", "--q", "bern(0.75)", "--metric", "hellinger")
        assert code == 0
        row = table(out)[0]
        assert row["metric"] == "hellinger"
        assert float(row["value"]) == pytest.approx(0.366025, abs=1e-6)
        assert row["method"] == "exact_discrete"

    def test_all_metrics(self):
        code, out = invoke("distance", "--p", "gauss(0,1)", "--q", "gauss(0.2,1)", "--metric", "all")
        assert code == 0
        assert [row["metric"] for row in table(out)] == ["hellinger", "total_variation", "chi2_symmetric",
                                                          "kl", "delta_max"]

    def test_header_lines(self):
        _, out = invoke("distance", "--p", "bern(0.25)", "--q", "bern(0.75)")
        lines = out.splitlines()
        assert lines[0].startswith("# config: ")
        config = json.loads(lines[0][len("# config: "):])
        assert config["p"] == "bern(0.25)"
        assert config["command"] == "distance"
        assert lines[1] == "# seed: 0"
        assert lines[2] == "metric,value,method,abs_error_bound"
        assert "\r" not in out


class TestExperimentCommands:
    def test_simulate_is_byte_identical(self):
        argv = ("simulate", "--p", "bern(0.5)", "--q", "bern(0.6)", "--n", "20,40", "--trials", "200", "--seed", "7")
        first, second = invoke(*argv), invoke(*argv)
        assert first[0] == 0
        assert first == second
        assert [int(row["n"]) for row in table(first[1])] == [20, 40]

    @pytest.mark.slow
    def test_simulate_close_coins(self):
        code, out = invoke("simulate", "--p", "bern(0.5)", "--q", "bern(0.6)", "--test", "hellinger",
                           "--n", "2000", "--trials", "1000", "--seed", "7")
        assert code == 0
        assert float(table(out)[0]["max_error"]) <= 0.05

    def test_simulate_seed_line(self):
        _, out = invoke("simulate", "--p", "bern(0)", "--q", "bern(1)", "--n", "1", "--trials", "10", "--seed", "7")
        assert out.splitlines()[1] == "# seed: 7"

    def test_zero_mean_reproduction(self):
        code, out = invoke("repro", "--which", "zero-mean", "--eps", "0.01")
        assert code == 0
        row = table(out)[0]
        assert abs(float(row["expectation"])) <= 1e-15
        assert float(row["ratio"]) == pytest.approx(5.758, abs=0.01)

    def test_decision(self):
        code, out = invoke("test", "--p", "bern(0)", "--q", "bern(0.5)", "--samples", "0,0,0")
        assert code == 0
        row = table(out)[0]
        assert row["verdict"] == "H0_P"
        assert row["tie_broken"] == "false"

    def test_private_decision_needs_epsilon(self):
        code, _ = invoke("test", "--p", "bern(0)", "--q", "bern(0.5)", "--samples", "0", "--test", "dp")
        assert code == 1

    def test_bounds(self):
        code, out = invoke("bounds", "--pairs", "20", "--max-support", "4", "--seed", "3")
        assert code == 0
        assert all(float(row["worst_slack"]) >= -1e-9 for row in table(out))

    def test_tournament(self):
        code, out = invoke("tournament", "--candidates", "bern(0.1);bern(0.9)", "--truth", "bern(0.1)",
                           "--n", "50", "--trials", "20")
        assert code == 0
        assert table(out)[0]["selections"] == "20"

    def test_budget_exceeded_exits_two(self):
        code, _ = invoke("complexity", "--p", "bern(0.5)", "--q", "bern(0.51)", "--delta", "0.1",
                         "--trials", "100", "--max-n", "8")
        assert code == 2

    def test_output_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ROBUST_TEST_OUTPUT_DIR", str(tmp_path))
        code, out = invoke("distance", "--p", "bern(0.25)", "--q", "bern(0.75)", "--output", "d.csv")
        assert code == 0
        assert out == ""
        assert (tmp_path / "d.csv").read_text().startswith("# config: ")


class TestUsageErrors:
    def test_missing_law(self, capsys):
        code, _ = invoke("distance", "--p", "bern(0.25)")
        assert code == 1
        err = capsys.readouterr().err
        assert "--q" in err
        assert "distribution literals:" in err

    def test_unknown_flag(self):
        assert invoke("distance", "--p", "bern(0.25)", "--q", "bern(0.75)", "--bogus", "1")[0] == 1

    def test_bad_literal(self, capsys):
        assert invoke("distance", "--p", "bern(0.25", "--q", "bern(0.75)")[0] == 1
        assert "position" in capsys.readouterr().err

    def test_seed_range(self):
        assert invoke("simulate", "--p", "bern(0)", "--q", "bern(1)", "--seed", "-1")[0] == 1

    def test_missing_subcommand(self):
        assert invoke()[0] == 1

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("ROBUST_TEST_WORKERS", "many")
        assert invoke("distance", "--p", "bern(0.25)", "--q", "bern(0.75)")[0] == 1


class TestConfigFile:
    def test_values_become_defaults(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("p = bern(0.25)\nq = bern(0.75)\nmetric = hellinger\n")
        code, out = invoke("--config", str(path), "distance")
        assert code == 0
        assert float(table(out)[0]["value"]) == pytest.approx(0.366025, abs=1e-6)

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("p = bern(0.1)\nq = bern(0.75)\n")
        _, out = invoke("--config", str(path), "distance", "--p", "bern(0.25)")
        assert float(table(out)[0]["value"]) == pytest.approx(0.366025, abs=1e-6)

    def test_dashed_keys(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("max-support = 3\npairs = 5\n")
        args = parse_args(["--config", str(path), "bounds"])
        assert (args.max_support, args.pairs) == (3, 5)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("colour = blue\n")
        assert invoke("--config", str(path), "distance")[0] == 1

    def test_missing_file(self, tmp_path):
        assert invoke("--config", str(tmp_path / "absent.conf"), "distance")[0] == 1

    def test_config_needs_subcommand(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("pairs = 5\n")
        assert invoke("--config", str(path))[0] == 1


def test_every_subcommand_has_output_and_workers():
    parsers = build_parser()
    for name, parser in parsers.items():
        if name:
            dests = {action.dest for action in parser._actions}
            assert {"output", "workers"} <= dests


def test_resolved_config_leaves_out_plumbing():
    args = parse_args(["bounds", "--workers", "2", "--output", "x.csv"])
    config = resolved_config(args)
    assert "workers" not in config and "output" not in config
    assert config["pairs"] == 1000
