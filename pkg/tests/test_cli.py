import csv
import io
import json
import subprocess
import sys

import pytest

from relaydp.cli import main
from relaydp.experiments import COMPLEXITY_COLUMNS, emit_complexity_report


def _csv_rows(text):
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    start = next(k for k, line in enumerate(lines) if line.startswith("series,"))
    return list(csv.DictReader(io.StringIO("\n".join(lines[start:]))))


def test_fig3_preset(tmp_path, capsys):
    out = tmp_path / "fig3.csv"
    assert main(["--preset", "fig3", "--slots", "3", "--out", str(out)]) == 0
    rows = _csv_rows(out.read_text())
    assert len(rows) == 4 * 7
    assert {r["scheme"] for r in rows} == {"optimal", "greedy", "hop-greedy", "DRS-like"}
    assert sorted({float(r["axis_value"]) for r in rows}) == [16, 20, 24, 28, 32, 36, 40]
    summary = capsys.readouterr().out.splitlines()
    assert len(summary) == 4


def test_table2_row_preset(capsys):
    assert main(["--preset", "table2-row", "--slots", "5"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert all(r["trials"] == "5" for r in rows)


def test_selftest_exit_zero(capsys):
    assert main(["--selftest"]) == 0
    assert "all checks passed" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relaydp", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "--preset" in proc.stdout


def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "net.conf"
    conf.write_text(
        "# two pairs over four hops\n"
        "n_pairs = 2\nrelays_per_hop = 3\nn_hops = 4\ntotal_distance_km = 2\n"
        "reference_loss_db = 128.1\ntx_power_dbm = 20\nsinr_thresholds_db = 3\n"
    )
    assert main(["--config", str(conf), "--slots", "4", "--scheme", "optimal"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 1 and float(rows[0]["axis_value"]) == 20.0
    assert main(["--config", str(conf), "--tx-power-dbm", "27", "--slots", "4", "--scheme", "optimal"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert float(rows[0]["axis_value"]) == 27.0


def test_custom_sweep_json(tmp_path):
    out = tmp_path / "sweep.json"
    args = ["--n-pairs", "2", "--relays", "3", "--hops", "3", "--distance-km", "1.5",
            "--reference-loss-db", "128.1", "--threshold-db", "0", "--no-interference",
            "--axis", "M", "--values", "3,4", "--scheme", "optimal", "--scheme", "drs",
            "--slots", "6", "--format", "json", "--out", str(out)]
    assert main(args) == 0
    data = json.loads(out.read_text())
    assert len(data) == 4
    assert {d["axis_value"] for d in data} == {3, 4}
    assert {"outage_prob", "ci_low", "ci_high", "mean_comparisons"} <= set(data[0])


def test_preset_with_override(capsys):
    assert main(["--preset", "table2-row", "--slots", "3", "--hops", "4", "--scheme", "optimal"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 1


@pytest.mark.parametrize("args", [
    ["--n-pairs", "3", "--relays", "2", "--hops", "3", "--distance-km", "1"],
    ["--n-pairs", "2", "--relays", "3", "--hops", "3"],
    ["--n-pairs", "2", "--relays", "3", "--hops", "3", "--distance-km", "-1"],
    ["--config", "/nonexistent/file.conf"],
])
def test_bad_input_exits_nonzero(args, capsys):
    assert main(args + ["--slots", "2"]) != 0
    assert "error" in capsys.readouterr().err


def test_bad_config_key(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("n_pairs = 2\nwhatever = 1\n")
    assert main(["--config", str(conf)]) == 2


def test_dump_and_replay(tmp_path, capsys):
    dump = tmp_path / "ls.csv"
    base = ["--n-pairs", "2", "--relays", "3", "--hops", "3", "--distance-km", "1.5",
            "--reference-loss-db", "128.1", "--slots", "20", "--seed", "7", "--scheme", "optimal"]
    assert main(base + ["--dump-large-scale", str(dump)]) == 0
    direct = _csv_rows(capsys.readouterr().out)
    assert dump.read_text().startswith("hop,tx,rx,attenuation")
    assert main(base + ["--replay", str(dump)]) == 0
    replay = _csv_rows(capsys.readouterr().out)
    assert replay[0]["outage_prob"] == direct[0]["outage_prob"]
    assert main(["--preset", "fig3", "--replay", str(dump)]) == 2


def test_complexity_report_columns():
    rows = emit_complexity_report([2], 3, [3, 4, 5], n_instances=2, seed=0)
    assert list(rows[0]) == COMPLEXITY_COLUMNS
    for r in rows:
        assert r["Z"] == 6
        assert r["dp_comparisons"] == 6 + 36 * (r["L"] - 2)
        assert r["exhaustive_paths"] == 6 ** (r["L"] - 1)


def test_complexity_report_skips_over_budget():
    rows = emit_complexity_report([2], 3, [6], n_instances=1, seed=0, budget=100)
    assert rows[0]["exhaustive_time_ms"] == "skipped"


def test_complexity_preset(tmp_path, capsys):
    out = tmp_path / "cx.csv"
    assert main(["--preset", "complexity", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1] == ",".join(COMPLEXITY_COLUMNS)
    assert len(lines) == 2 + 8
