import io
import json
import logging

import pytest

from src.api.client import CertificateClient, run_scenario
from src.api.functions import cover_case
from src.errors import ScenarioValidationError
from src.main import parse_args, run_cli
from src.models.report import (
    SCHEMA,
    CertificateEntry,
    CertificateStatus,
    Report,
    emit,
    table_names,
    write_table,
)
from src.tools.definitions import get_command, get_commands
from src.tools.parameters import (
    CommandName,
    LatticeSettings,
    RunSettings,
    bundled_scenarios,
    load_scenario,
    parse_scenario,
    resolve_scenario,
)

TINY = """
name = "tiny"
certificates = ["check-bounded"]

[lattice]
x = [0.0]
y = [0.5, 1.0, 2.0]
"""

SPARSE_TERMS = """
name = "terms"
certificates = ["sparse-bound"]

[sparse]
level_min = 0
level_max = 0
window = [0.0, 1.0]
drift = false
terms = true
"""


def entry(command: str, status=CertificateStatus.COMPLETE) -> CertificateEntry:
    return CertificateEntry(command=command, status=status, payload={}, columns=["a"], rows=[[1]])


class TestScenarioFiles:
    def test_bundled(self):
        assert bundled_scenarios() == ["disk_weight", "identity", "identity_growth", "translation"]
        for name in bundled_scenarios():
            assert load_scenario(name).name == name
        assert resolve_scenario("identity").name == "identity.toml"

    def test_defaults(self):
        scenario = parse_scenario(TINY)
        assert scenario.symbols.u == "1"
        assert scenario.symbols.phi == "z"
        assert scenario.exponents.p == scenario.exponents.q == 2.0
        assert scenario.certificates == [CommandName.CHECK_BOUNDED]
        assert scenario.seed is None
        assert scenario.sparse.level_min == -8
        assert scenario.sparse.level_max == 6
        assert scenario.sparse.window == (-64.0, 64.0)
        assert not scenario.sparse.terms

    @pytest.mark.parametrize(
        "text",
        [
            "name = ",
            'name = "x"\n[exponents]\nr = 2.0\n',
            'name = "x"\n[exponents]\np = 3.0\nq = 2.0\n',
            'name = "x"\ncertificates = ["frobnicate"]\n',
            'name = "x"\n[lattice]\ny_min = 1.0\n',
            'name = "x"\n[compactness]\ndirection = "sideways"\n',
        ],
    )
    def test_invalid(self, text):
        with pytest.raises(ScenarioValidationError):
            parse_scenario(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioValidationError):
            load_scenario(tmp_path / "absent.toml")

    def test_lattice_jitter(self):
        settings = LatticeSettings(x=[0.0, 1.0, 2.0], y=[1.0])
        exact = settings.build()
        assert exact.x == [0.0, 1.0, 2.0]
        first, second = settings.build(seed=7), settings.build(seed=7)
        assert first.x == second.x
        assert all(abs(a - b) <= 0.25 for a, b in zip(first.x, exact.x))
        assert first.x != exact.x

    def test_log_uniform_range(self):
        lattice = LatticeSettings(x=[0.0], y_min=0.25, y_max=4.0).build()
        assert lattice.y == pytest.approx([0.25, 0.5, 1.0, 2.0, 4.0])


class TestRunSettings:
    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("BERGMAN_THREADS", "4")
        monkeypatch.setenv("BERGMAN_REL_TOL", "1e-8")
        monkeypatch.setenv("BERGMAN_LOG_LEVEL", " debug ")
        settings = RunSettings.from_env(threads=None, refine=2)
        assert settings.threads == 4
        assert settings.rel_tol == 1e-8
        assert settings.log_level == "DEBUG"
        assert settings.refine == 2
        assert RunSettings.from_env(threads=2).threads == 2

    @pytest.mark.parametrize("name, value", [("BERGMAN_THREADS", "many"), ("BERGMAN_THREADS", "0")])
    def test_bad_environment(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ScenarioValidationError):
            RunSettings.from_env()


class TestReport:
    def test_exit_code(self):
        assert Report(certificates=[entry("check-bounded")]).exit_code == 0
        report = Report(
            certificates=[entry("check-bounded"), entry("x", CertificateStatus.INCONCLUSIVE)]
        )
        assert report.inconclusive
        assert report.exit_code == 2

    def test_table_names(self):
        report = Report(
            scenario={"name": "s"},
            certificates=[entry("check-bounded"), entry("check-bounded"), entry("sparse-bound")],
        )
        assert table_names(report) == [
            "s.check-bounded.csv",
            "s.check-bounded-2.csv",
            "s.sparse-bound.csv",
        ]
        assert table_names(Report(certificates=[entry("selftest")])) == ["report.selftest.csv"]

    def test_write_table(self):
        table = CertificateEntry(
            command="c",
            status=CertificateStatus.COMPLETE,
            payload={},
            columns=["a", "b"],
            rows=[[1, None], ["x,y", True]],
        )
        stream = io.StringIO()
        write_table(table, stream)
        assert stream.getvalue() == 'a,b\r\n1,\r\n"x,y",True\r\n'

    def test_json_is_plain_and_versioned(self):
        report = Report(certificates=[entry("c")])
        data = json.loads(report.to_json())
        assert data["schema"] == SCHEMA
        assert data["seconds"] is None
        assert Report.from_json(report.to_json()).to_json() == report.to_json()

    def test_emit(self, tmp_path):
        report = Report(scenario={"name": "s"}, certificates=[entry("a"), entry("b")])
        written = emit(report, "csv", tmp_path / "tables")
        assert [path.name for path in written] == ["s.a.csv", "s.b.csv"]
        with pytest.raises(ValueError):
            emit(report, "xml", tmp_path)


class TestCommands:
    def test_definitions(self):
        names = [command.name for command in get_commands()]
        assert names == [
            "check-bounded",
            "check-compact",
            "sparse-bound",
            "weight-class",
            "weighted-estimate",
            "selftest",
            "run",
        ]
        assert get_command("weight-class").needs_weight
        assert not get_command("selftest").needs_scenario
        assert get_command("nope") is None
        assert all(command.summary for command in get_commands())

    def test_definitions_drive_dispatch(self):
        client = CertificateClient(RunSettings())
        for command in get_commands():
            if command.needs_scenario and command.name != "run":
                with pytest.raises(ValueError, match="needs a scenario"):
                    client.run(command.method)

    def test_parse_args(self):
        args = parse_args(["check-bounded", "--scenario", "identity", "--refine", "0"])
        assert args.command == "check-bounded"
        assert args.refine == 0
        assert args.format == "json"
        with pytest.raises(SystemExit):
            parse_args(["bogus"])


class TestRunCli:
    def test_check_bounded_json(self, write_scenario, tmp_path):
        path = write_scenario(TINY)
        out = tmp_path / "report.json"
        args = ["check-bounded", "--scenario", str(path), "--refine", "0", "--out", str(out)]
        assert run_cli(args) == 0
        text = out.read_text(encoding="utf-8")
        report = Report.from_json(text)
        assert report.to_json() == text
        assert report.certificates[0].verdict == "bounded"
        assert report.scenario["name"] == "tiny"

    def test_check_bounded_csv(self, write_scenario, tmp_path):
        path = write_scenario(TINY)
        out = tmp_path / "tables"
        args = ["check-bounded", "--scenario", str(path), "--refine", "0"]
        assert run_cli(args + ["--format", "csv", "--out", str(out)]) == 0
        data = (out / "tiny.check-bounded.csv").read_bytes()
        lines = data.split(b"\r\n")
        assert lines[0].startswith(b"x,y,value,error_bound,converged")
        assert len(lines) == 5 and lines[-1] == b""

    def test_parse_error_reports_offset(self, write_scenario, caplog):
        path = write_scenario('name = "bad"\n[symbols]\nphi = "z +"\n')
        with caplog.at_level(logging.ERROR):
            assert run_cli(["check-bounded", "--scenario", str(path)]) == 1
        assert "at byte 3" in caplog.text

    @pytest.mark.parametrize(
        "command, text",
        [
            ("check-bounded", 'name = "x"\n[symbols]\nphi = "-z"\n'),
            ("weight-class", 'name = "x"\n'),
            ("check-bounded", 'name = "x"\n[symbols]\nomega = "re(z)"\n'),
            ("check-bounded", 'name = "x"\n[exponents]\nunknown = 1\n'),
            ("check-bounded", "name = \n"),
        ],
    )
    def test_validation_failures(self, write_scenario, command, text):
        assert run_cli([command, "--scenario", str(write_scenario(text))]) == 1

    def test_scenario_required(self):
        assert run_cli(["check-bounded"]) == 1

    def test_run_needs_certificates(self, write_scenario):
        assert run_cli(["run", "--scenario", str(write_scenario('name = "x"\n'))]) == 1

    def test_run_scenario(self, write_scenario):
        report = run_scenario(write_scenario(TINY), RunSettings(refine=0))
        assert [c.command for c in report.certificates] == ["check-bounded"]
        assert report.exit_code == 0
        assert report.seconds is None

    @pytest.mark.slow
    def test_sparse_terms_payload(self, write_scenario):
        report = run_scenario(write_scenario(SPARSE_TERMS), RunSettings(refine=0))
        form = report.certificates[0].payload["terms"]
        assert len(form["terms"]) == form["boxes"] > 0


class TestOracleCases:
    def test_cover_case(self):
        case = cover_case(count=200, seed=3)
        assert case.passed
        assert case.observed <= 3.0
