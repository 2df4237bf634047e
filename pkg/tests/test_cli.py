import os

import numpy as np
import pytest

from cldg.cli import main

TINY_SOLITON = """\
experiment=soliton
theta=1
k=2
n_cells=60
domain=-25,25
tau=0.001
T=0.02
x0=10
snapshot_times=0,0.01,0.02
"""

TINY_CONVERGE = """\
experiment=converge
theta=1
k=2
N_list=30,60
tau=0.001
T=0.01
"""

TINY_PROJECT = """\
experiment=project_study
theta=0.4
k=2
N_list=16,32
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_soliton_writes_files(tmp_path, capsys):
    cfg = write(tmp_path, "s.cfg", TINY_SOLITON)
    out = str(tmp_path / "out")
    assert main(["run", cfg, "--out", out]) == 0
    captured = capsys.readouterr().out
    assert "charge_check=PASS" in captured
    assert "final_l2_error=" in captured
    assert os.path.exists(os.path.join(out, "charge.csv"))
    for t in ("0", "0.01", "0.02"):
        assert os.path.exists(os.path.join(out, f"snapshot_t{t}.csv"))


def test_snapshot_schema_and_stamp(tmp_path):
    cfg = write(tmp_path, "s.cfg", TINY_SOLITON)
    out = str(tmp_path / "out")
    main(["run", cfg, "--out", out])
    with open(os.path.join(out, "snapshot_t0.csv")) as fh:
        header = fh.readline()
        columns = fh.readline().strip()
        first = fh.readline().strip().split(",")
    assert header.startswith("# config: ")
    assert "theta=1" in header and "n_cells=60" in header
    assert columns == "x,r,s,abs"
    assert len(first) == 4
    x, r, s, ab = map(float, first)
    assert np.hypot(r, s) == pytest.approx(ab, rel=1e-15)
    # k + 2 = 4 sample points per cell
    n_rows = sum(1 for _ in open(os.path.join(out, "snapshot_t0.csv"))) - 2
    assert n_rows == 60 * 4


def test_charge_csv_schema(tmp_path):
    cfg = write(tmp_path, "s.cfg", TINY_SOLITON)
    out = str(tmp_path / "out")
    main(["run", cfg, "--out", out])
    with open(os.path.join(out, "charge.csv")) as fh:
        fh.readline()
        assert fh.readline().strip() == "t,charge,drift,relative_drift"
        rows = [line.strip().split(",") for line in fh]
    assert len(rows) == 21  # 20 steps + t=0
    assert float(rows[0][2]) == 0.0


def test_byte_identical_reruns(tmp_path):
    cfg = write(tmp_path, "s.cfg", TINY_SOLITON)
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    main(["run", cfg, "--out", out1])
    main(["run", cfg, "--out", out2])
    for name in os.listdir(out1):
        with open(os.path.join(out1, name), "rb") as f1, open(
            os.path.join(out2, name), "rb"
        ) as f2:
            assert f1.read() == f2.read(), name


def test_conserve_check_reports_pass(tmp_path, capsys):
    cfg = write(
        tmp_path, "c.cfg",
        TINY_SOLITON.replace("experiment=soliton", "experiment=conserve_check"),
    )
    out = str(tmp_path / "out")
    assert main(["run", cfg, "--out", out]) == 0
    captured = capsys.readouterr().out
    assert "max_relative_drift=" in captured
    assert "charge_check=PASS" in captured


def test_converge_subcommand(tmp_path, capsys):
    cfg = write(tmp_path, "c.cfg", TINY_CONVERGE.replace("experiment=converge\n", ""))
    out = str(tmp_path / "out")
    assert main(["converge", cfg, "--out", out]) == 0
    captured = capsys.readouterr().out
    assert "final_order=" in captured
    path = os.path.join(out, "convergence.csv")
    with open(path) as fh:
        fh.readline()
        assert fh.readline().strip() == "theta,k,N,h,l2_error,order"
        first_row = fh.readline().strip().split(",")
        second_row = fh.readline().strip().split(",")
    assert first_row[5] == ""  # no order on the first row
    assert float(second_row[5]) > 0
    assert os.path.exists(os.path.join(out, "convergence.txt"))


def test_project_study_subcommand(tmp_path):
    cfg = write(tmp_path, "p.cfg", TINY_PROJECT.replace("experiment=project_study\n", ""))
    out = str(tmp_path / "out")
    assert main(["project-study", cfg, "--out", out]) == 0
    with open(os.path.join(out, "projection_study.csv")) as fh:
        fh.readline()
        assert fh.readline().strip() == "theta,k,N,h,l2_error,slope"


def test_config_errors_exit_nonzero(tmp_path, capsys):
    cfg = write(tmp_path, "bad.cfg", "experiment=soliton\ntheta=5\n")
    assert main(["run", cfg]) == 1
    assert "stage=config" in capsys.readouterr().err

    assert main(["run", str(tmp_path / "missing.cfg")]) == 1
    assert "stage=config" in capsys.readouterr().err


def test_selftest_passes():
    assert main(["selftest"]) == 0


def test_fixture_configs_parse():
    from cldg.config import parse_config

    here = os.path.dirname(__file__)
    fixture_dirs = [
        os.path.join(here, "fixtures"),
        os.path.join(here, os.pardir, "configs"),
    ]
    seen = 0
    for d in fixture_dirs:
        for name in sorted(os.listdir(d)):
            if name.endswith(".cfg"):
                with open(os.path.join(d, name)) as fh:
                    parse_config(fh.read())
                seen += 1
    assert seen >= 10
