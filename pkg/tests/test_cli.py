"""Tests for the command-line experiment runner."""

import csv
import io
import json
import math

import numpy as np
import pytest

from mapwalk.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    return rows[0], rows[1:]


def test_single_run_record_count_and_columns(capsys):
    code, out, _ = run_cli(capsys, "run", "--coin", "dft", "--M", "2",
                           "--L", "100", "--t-max", "40")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["time", "msd", "entropy", "pr"]
    assert len(rows) == 41
    assert all(len(r) == len(header) for r in rows)


def test_fourier_lethargy_sweep_recipe(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--coin", "dft", "--L", "100",
                           "--t-max", "40", "--sweep", "M=2,10,40")
    assert code == 0
    header, rows = parse_csv(out)
    assert header[0] == "M"
    assert len(rows) == 3 * 41
    # ordered by sweep value then time
    ms = [int(r[0]) for r in rows]
    assert ms == [2] * 41 + [10] * 41 + [40] * 41
    times = [int(r[1]) for r in rows[:41]]
    assert times == list(range(41))


def test_tr_breaking_cross_sweep_recipe(capsys):
    code, out, _ = run_cli(capsys, "run", "--coin", "harper", "--M", "40",
                           "--L", "100", "--t-max", "40",
                           "--sweep", "g=0.05,2", "--sweep", "phi=0,0.2")
    assert code == 0
    header, rows = parse_csv(out)
    assert header[:2] == ["g", "phi"]
    assert len(rows) == 4 * 41
    combos = sorted({(float(r[0]), float(r[1])) for r in rows})
    assert combos == [(0.05, 0.0), (0.05, 0.2), (2.0, 0.0), (2.0, 0.2)]


def test_csv_metadata_echoes_parameters(capsys):
    _, out, _ = run_cli(capsys, "run", "--coin", "harper", "--M", "4",
                        "--L", "10", "--g", "1.5", "--t-max", "2")
    meta = [ln for ln in out.splitlines() if ln.startswith("#")]
    assert len(meta) == 1
    for token in ("coin=harper", "M=4", "L=10", "g=1.5", "t_max=2",
                  "partition=horizontal", "seed=0"):
        assert token in meta[0]


def test_json_mirrors_csv_numbers(capsys):
    args = ["run", "--coin", "dft", "--M", "2", "--L", "10", "--t-max", "5"]
    _, out_csv, _ = run_cli(capsys, *args)
    _, out_json, _ = run_cli(capsys, *args, "--format", "json")
    _, rows = parse_csv(out_csv)
    payload = json.loads(out_json)
    assert payload["params"]["coin"] == "dft"
    assert len(payload["records"]) == len(rows)
    for row, rec in zip(rows, payload["records"]):
        assert int(row[0]) == rec["time"]
        assert float(row[1]) == rec["msd"]
        assert float(row[2]) == rec["entropy"]
        assert float(row[3]) == rec["pr"]


def test_emit_distributions_columns(capsys):
    code, out, _ = run_cli(capsys, "run", "--coin", "dft", "--M", "2",
                           "--L", "8", "--t-max", "3", "--emit-distributions")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["time", "msd", "entropy", "pr"] + [f"p{l}" for l in range(8)]
    for row in rows:
        total = sum(float(x) for x in row[4:])
        assert abs(total - 1.0) < 1e-10


def test_classical_run_rotation_period(capsys):
    code, out, _ = run_cli(capsys, "run", "--classical", "rotation", "--L", "11",
                           "--t-max", "8", "--n-points", "2000", "--seed", "7")
    assert code == 0
    _, rows = parse_csv(out)
    msd = [float(r[1]) for r in rows]
    assert msd[0] == msd[4] == msd[8]
    assert msd[1] == msd[5]


def test_classical_output_deterministic(capsys):
    args = ["run", "--classical", "baker", "--L", "21", "--t-max", "6",
            "--n-points", "5000", "--seed", "3"]
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b


def test_phase_space_record_count_and_torus(capsys):
    code, out, _ = run_cli(capsys, "phase-space", "--map", "harper", "--g", "1",
                           "--n-trajectories", "100", "--n-steps", "1000",
                           "--seed", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["q", "p"]
    assert len(rows) == 100_000
    sample = rows[:: 997]
    assert all(0.0 <= float(q) < 1.0 and 0.0 <= float(p) < 1.0 for q, p in sample)


def test_phase_space_byte_deterministic_and_g_sensitive(capsys):
    args = ["phase-space", "--map", "harper", "--n-trajectories", "5",
            "--n-steps", "50", "--seed", "2"]
    _, a, _ = run_cli(capsys, *args, "--g", "0.01")
    _, b, _ = run_cli(capsys, *args, "--g", "0.01")
    _, c, _ = run_cli(capsys, *args, "--g", "1")
    assert a == b
    assert a != c


def test_config_file_with_cli_override(tmp_path, capsys):
    cfg = tmp_path / "walk.cfg"
    cfg.write_text("coin = dft\nM = 4\nL = 12\nt-max = 3\nformat = csv\n")
    code, out, _ = run_cli(capsys, "run", "--config", str(cfg), "--M", "2")
    assert code == 0
    meta = [ln for ln in out.splitlines() if ln.startswith("#")][0]
    assert "M=2" in meta          # command line wins
    assert "L=12" in meta         # file value kept
    _, rows = parse_csv(out)
    assert len(rows) == 4


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "walk.cfg"
    cfg.write_text("coinn = dft\n")
    code, _, err = run_cli(capsys, "run", "--config", str(cfg))
    assert code == 2
    assert "coinn" in err


def test_invalid_field_exits_2_and_names_field(capsys):
    code, _, err = run_cli(capsys, "run", "--coin", "dft", "--M", "3")
    assert code == 2
    assert "M" in err
    code, _, err = run_cli(capsys, "run", "--coin", "harper", "--g", "-1")
    assert code == 2
    assert "g" in err
    code, _, err = run_cli(capsys, "run", "--phi", "1.5")
    assert code == 2
    assert "phi" in err


def test_bad_sweep_value_exits_2(capsys):
    code, _, err = run_cli(capsys, "run", "--sweep", "M=3,4")
    assert code == 2
    assert "M" in err
    code, _, err = run_cli(capsys, "run", "--sweep", "q=1,2")
    assert code == 2
    assert "sweep" in err


def test_sweep_subcommand_requires_sweep(capsys):
    code, _, err = run_cli(capsys, "sweep", "--coin", "dft")
    assert code == 2
    assert "sweep" in err


def test_sweep_l_with_distributions_rejected(capsys):
    code, _, err = run_cli(capsys, "run", "--sweep", "L=10,20",
                           "--emit-distributions")
    assert code == 2
    assert "sweep" in err


def test_no_partial_file_on_config_error(tmp_path, capsys):
    out_file = tmp_path / "results.csv"
    code, _, _ = run_cli(capsys, "run", "--M", "5", "--out", str(out_file))
    assert code == 2
    assert not out_file.exists()


def test_output_file_written_atomically(tmp_path, capsys):
    out_file = tmp_path / "results.csv"
    code, _, _ = run_cli(capsys, "run", "--coin", "dft", "--M", "2", "--L", "10",
                         "--t-max", "2", "--out", str(out_file))
    assert code == 0
    header, rows = parse_csv(out_file.read_text())
    assert len(rows) == 3
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert not leftovers


def test_full_precision_round_trip(capsys):
    _, out, _ = run_cli(capsys, "run", "--coin", "harper", "--M", "4",
                        "--L", "10", "--g", "2", "--t-max", "4")
    _, rows = parse_csv(out)
    # re-render the parsed numbers: 17 significant digits round-trip exactly
    for row in rows:
        for cell in row[1:]:
            x = float(cell)
            assert format(x, ".17g") == cell


def test_vertical_partition_accepted_and_close_to_horizontal(capsys):
    # expressing the coin in the conjugate basis is an inessential change:
    # the series differ, but stay the same order of magnitude
    base = ["run", "--coin", "harper", "--M", "8", "--L", "30", "--g", "2",
            "--t-max", "10"]
    _, h, _ = run_cli(capsys, *base)
    _, v, _ = run_cli(capsys, *base, "--partition", "vertical")
    _, rows_h = parse_csv(h)
    _, rows_v = parse_csv(v)
    msd_h = np.array([float(r[1]) for r in rows_h])
    msd_v = np.array([float(r[1]) for r in rows_v])
    assert not np.array_equal(msd_h, msd_v)
    assert msd_v[10] < 4 * msd_h[10] + 1.0
    assert msd_h[10] < 4 * msd_v[10] + 1.0
