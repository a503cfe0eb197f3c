import json
import subprocess
import sys
from fractions import Fraction

import pytest

from bethe_q0 import genfun
from bethe_q0.cli import UsageError, main, parse_spec
from bethe_q0.report import Report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def leaves(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from leaves(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from leaves(v)
    else:
        yield obj


def test_parse_spec_examples():
    assert parse_spec("1:8") == {1: 8}
    assert parse_spec("1:1,2:1") == {1: 1, 2: 1}
    assert parse_spec("0") == {}
    assert parse_spec(" 3 : 2 ") == {3: 2}


@pytest.mark.parametrize("text", ["", "1", "1:", "a:1", "1:1,,2:1", "0:3", "1:-1", "1:1,1:2", "1:2.5"])
def test_parse_spec_rejects(text):
    with pytest.raises(UsageError):
        parse_spec(text)


def test_completeness_example(capsys):
    code, payload = run_json(capsys, "completeness", "--nu", "1:8", "--max-magnons", "4")
    assert code == 0
    assert payload["schema"] == 1 and payload["pass"] is True
    assert [row["R_sum"] for row in payload["table"]] == ["1", "8", "28", "56", "70"]


def test_completeness_alias_matches(capsys):
    _, a, _ = run(capsys, "completeness", "--nu", "2:1", "--max-magnons", "3")
    _, b, _ = run(capsys, "characters", "completeness", "--nu", "2:1", "--max-magnons", "3")
    assert a == b


def test_completeness_csv_and_emit(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "completeness", "--nu", "1:4", "--max-magnons", "3",
                       "--format", "csv", "--emit", str(target))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("M,weight,R_sum")
    assert lines[3].split(",")[:3] == ["2", "0", "6"]
    assert lines[4].split(",")[4] == ""
    assert json.loads(target.read_text())["pass"] is True


def test_sce_count_example(capsys):
    for method in ("direct", "mobius", "closed"):
        code, payload = run_json(capsys, "sce", "count", "--nu", "1:9", "--pattern", "1:3", "--method", method)
        assert code == 0 and payload["count"] == "30"
    _, out, _ = run(capsys, "sce", "count", "--nu", "1:9", "--pattern", "1:3", "--format", "table")
    assert out == "30\n"


def test_fermionic_example(capsys):
    code, out, _ = run(capsys, "fermionic", "r", "--nu", "2:1", "--pattern", "1:2", "--format", "table")
    assert code == 0 and out == "-1\n"
    _, payload = run_json(capsys, "fermionic", "k", "--nu", "2:1", "--pattern", "1:2")
    assert payload["R"] == "-1"
    assert payload["P"] == {"1": "-3"}


def test_sce_enumerate_outputs(capsys):
    code, payload = run_json(capsys, "sce", "enumerate", "--nu", "1:4", "--pattern", "1:2", "--off-diagonal")
    assert code == 0
    assert payload["count"] == "4"
    assert all([lab for lab, _ in sol] == ["1:1", "1:2"] for sol in payload["solutions"])
    _, out, _ = run(capsys, "sce", "enumerate", "--nu", "1:4", "--pattern", "1:2", "--format", "csv")
    rows = out.splitlines()
    assert rows[0] == "1:1,1:2" and len(rows) == 9
    for row in rows[1:]:
        u = [Fraction(x) for x in row.split(",")]
        assert all(((3 * u[0] + u[1] - Fraction(3, 2)).denominator == 1,
                    (u[0] + 3 * u[1] - Fraction(3, 2)).denominator == 1))


def test_mobius_output(capsys):
    _, payload = run_json(capsys, "mobius", "--n", "3")
    assert payload["partitions"] == ["123", "12/3", "13/2", "1/23", "1/2/3"]
    assert payload["mu"][0] == ["1", "-1", "-1", "-1", "2"]


def test_genfun_and_qsystem_pass(capsys):
    for argv in (
        ["genfun", "verify", "--identity", "rkk", "--l", "2", "--order", "4", "--nu", "1:1,2:1"],
        ["genfun", "verify", "--identity", "fop", "--l", "2", "--order", "4"],
        ["genfun", "verify", "--identity", "factorization", "--l", "2", "--order", "3", "--nu", "1:1", "--nu2", "2:1"],
        ["genfun", "verify", "--identity", "hkoty", "--l", "2", "--order", "3", "--beta", "2,1"],
        ["genfun", "verify", "--identity", "r0", "--l", "3", "--order", "3"],
        ["genfun", "verify", "--identity", "kexp", "--l", "2", "--order", "3"],
        ["genfun", "verify", "--identity", "residues", "--l", "2", "--order", "2", "--nu", "1:2"],
        ["characters", "qsystem", "--kmax", "3", "--order", "6"],
        ["characters", "sum-rule", "--nu", "1:1", "--k", "1", "--max-magnons", "4"],
    ):
        code, payload = run_json(capsys, *argv)
        assert code == 0, argv
        assert payload["pass"] is True and payload["schema"] == 1


def test_failed_identity_exits_2(capsys, monkeypatch):
    from bethe_q0.exactalg import TruncSeries

    def broken(l, order):
        report = Report("broken")
        report.add("one = 1 + w", TruncSeries.one(l, order), TruncSeries.one(l, order) + TruncSeries.variable(l, order, 0))
        return report

    monkeypatch.setattr(genfun, "verify_r0", broken)
    code, payload = run_json(capsys, "genfun", "verify", "--identity", "r0", "--l", "1", "--order", "2")
    assert code == 2
    assert payload["pass"] is False
    assert payload["checks"][0]["first_difference"] == {"exponent": [1], "lhs": "0", "rhs": "1"}


@pytest.mark.parametrize(
    "argv",
    [
        ["fermionic", "r", "--nu", "1:-2", "--pattern", "1:1"],
        ["fermionic", "r", "--nu", "1:2,1:3", "--pattern", "1:1"],
        ["bogus"],
        ["sce", "count", "--nu", "1:9", "--pattern", "1:3", "--budget-enum", "0"],
        ["sce", "enumerate", "--nu", "1:9", "--pattern", "1:3", "--budget-enum", "10"],
        ["sce", "count", "--nu", "1:30", "--pattern", "1:6", "--method", "mobius", "--budget-partitions", "50"],
        ["sce", "count", "--nu", "2:1", "--pattern", "1:2", "--method", "direct"],
        ["genfun", "verify", "--identity", "hkoty", "--l", "2", "--beta", "1"],
        ["completeness", "--nu", "1:2"],
    ],
)
def test_usage_and_budget_errors_exit_1(capsys, argv):
    # argparse exits directly, everything else returns
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1


def test_output_is_deterministic(capsys):
    argv = ["sce", "enumerate", "--nu", "1:6", "--pattern", "1:1,2:1", "--generic"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "characters", "qsystem", "--kmax", "2", "--order", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["pass"] is True


def test_json_numbers_round_trip(capsys):
    outputs = [
        run_json(capsys, "completeness", "--nu", "1:3,2:1", "--max-magnons", "4")[1],
        run_json(capsys, "sce", "enumerate", "--nu", "1:5", "--pattern", "1:1,2:1")[1],
        run_json(capsys, "fermionic", "r", "--nu", "1:7", "--pattern", "1:3")[1],
    ]
    for payload in outputs:
        for leaf in leaves(payload):
            assert not isinstance(leaf, float)
            if isinstance(leaf, str) and leaf.lstrip("-").replace("/", "").isdigit():
                assert str(Fraction(leaf)) == leaf


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bethe_q0", "sce", "count", "--nu", "1:4", "--pattern", "1:2", "--format", "table"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "2\n"

