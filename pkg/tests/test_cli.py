import json

import pytest
from click.testing import CliRunner

from qramforge.cli import main
from qramforge.serialize import loads


@pytest.fixture
def runner():
    return CliRunner()


def test_synth_writes_ir_file(runner, tmp_path):
    out = tmp_path / "circ.json"
    result = runner.invoke(main, ["synth", "--q", "2", "--n", "2",
                                  "--family", "toffoli", "-o", str(out)])
    assert result.exit_code == 0, result.output
    circuit = loads(out.read_text())
    assert circuit.width == 11


def test_synth_then_render_fig1_layout(runner, tmp_path):
    out = tmp_path / "circ.json"
    assert runner.invoke(main, ["synth", "--q", "2", "--family", "toffoli",
                                "-o", str(out)]).exit_code == 0
    result = runner.invoke(main, ["render", str(out)])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    names = [line.split(":")[0] for line in lines if ":" in line]
    assert names[:4] == ["a1", "a0", "b_00", "b_01"]
    assert "target" in names


def test_lower_then_schedule(runner, tmp_path):
    src = tmp_path / "t.json"
    low = tmp_path / "l.json"
    runner.invoke(main, ["synth", "--q", "2", "--family", "toffoli", "-o", str(src)])
    assert runner.invoke(main, ["lower", str(src), "--variant", "canonical_7t",
                                "-o", str(low)]).exit_code == 0
    result = runner.invoke(main, ["schedule", str(low)])
    assert result.exit_code == 0
    assert json.loads(result.output)["depth"] > 0


def test_schedule_ghz_expand_flag(runner, tmp_path):
    src = tmp_path / "p.json"
    runner.invoke(main, ["synth", "--q", "2", "--family", "parallel",
                         "--fanin", "unitary", "-o", str(src)])
    plain = json.loads(runner.invoke(main, ["schedule", str(src)]).output)
    expanded = json.loads(runner.invoke(main, ["schedule", str(src),
                                               "--ghz-expand"]).output)
    assert expanded["wire_count"] > plain["wire_count"]


def test_verify_pass_and_fail_exit_codes(runner, tmp_path):
    src = tmp_path / "c.json"
    runner.invoke(main, ["synth", "--q", "2", "--family", "toffoli",
                         "--memory", "1011", "-o", str(src)])
    ok = runner.invoke(main, ["verify", str(src), "--q", "2", "--memory", "1011"])
    assert ok.exit_code == 0
    assert json.loads(ok.output)["verdict"] == "EXACT"

    doc = json.loads(src.read_text())
    # delete the cell-1 query Toffoli; only detectable when m_1 = 1
    doc["gates"].pop(8)
    doc["regions"]["query"] = [7, 10]
    doc["regions"]["fanin"] = [10, 17]
    src.write_text(json.dumps(doc))
    still_ok = runner.invoke(main, ["verify", str(src), "--q", "2", "--memory", "1011"])
    assert still_ok.exit_code == 0  # m_1 = 0 hides the missing query
    bad = runner.invoke(main, ["verify", str(src), "--q", "2", "--memory", "1111"])
    assert bad.exit_code == 1
    assert json.loads(bad.output)["verdict"] == "INEQUIVALENT"


def test_report_row_count(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    result = runner.invoke(main, ["report", "--families", "bbs,rom,bbp",
                                  "--q-range", "2..15", "--n-policy", "n_equals_q",
                                  "--measure-cap", "4", "-o", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 1 + 42


def test_export_qasm(runner, tmp_path):
    src = tmp_path / "c.json"
    out = tmp_path / "c.qasm"
    runner.invoke(main, ["synth", "--q", "1", "--family", "toffoli", "-o", str(src)])
    assert runner.invoke(main, ["export", str(src), "-o", str(out)]).exit_code == 0
    assert out.read_text().startswith("OPENQASM 2.0;")


def test_usage_error_exit_code_2(runner):
    assert runner.invoke(main, ["synth", "--family", "toffoli"]).exit_code == 2
    assert runner.invoke(main, ["report", "--q-range", "oops"]).exit_code == 2


def test_random_memory_reproducible(runner, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    runner.invoke(main, ["synth", "--q", "2", "--family", "toffoli",
                         "--memory", "random:7", "-o", str(a)])
    runner.invoke(main, ["synth", "--q", "2", "--family", "toffoli",
                         "--memory", "random:7", "-o", str(b)])
    assert a.read_text() == b.read_text()
