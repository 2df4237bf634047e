import numpy as np
import pytest

STAMP = "# config: experiment=soliton theta=1 k=2 n_cells=100 tau=0.001\n"


def write_csv(path, columns, rows, stamp=STAMP):
    with open(path, "w") as fh:
        fh.write(stamp)
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join("" if v is None else f"{v:.17g}" for v in row) + "\n")
    return str(path)


@pytest.fixture
def snapshot_t5_csv(tmp_path):
    """Soliton |u| profile at t=5, x0=10: peak at x = 4*5 - 10 = 10."""
    x = np.linspace(-25, 25, 401)
    amp = 1.0 / np.cosh(x + 10.0 - 20.0)
    phase = 2.0 * (x + 10.0 - 7.5)
    r = amp * np.cos(phase)
    s = amp * np.sin(phase)
    rows = zip(x, r, s, np.hypot(r, s))
    return write_csv(tmp_path / "snapshot_t5.csv", ["x", "r", "s", "abs"], rows)


@pytest.fixture
def snapshot_series(tmp_path):
    paths = []
    for t in (0.0, 2.0, 5.0):
        x = np.linspace(-25, 25, 201)
        amp = 1.0 / np.cosh(x + 10.0 - 4.0 * t)
        rows = zip(x, amp, 0.0 * x, amp)
        paths.append(write_csv(tmp_path / f"snapshot_t{t:g}.csv", ["x", "r", "s", "abs"], rows))
    return paths


@pytest.fixture
def charge_constant_csv(tmp_path):
    t = np.linspace(0, 5, 51)
    charge = np.full_like(t, 2.0)
    rows = zip(t, charge, 0.0 * t, 0.0 * t)
    return write_csv(
        tmp_path / "charge.csv", ["t", "charge", "drift", "relative_drift"], rows
    )


@pytest.fixture
def charge_drifting_csv(tmp_path):
    t = np.linspace(0, 5, 51)
    drift = 1e-13 * np.sin(t) ** 2
    rows = zip(t, 2.0 + drift, drift, drift / 2.0)
    return write_csv(
        tmp_path / "charge_drift.csv", ["t", "charge", "drift", "relative_drift"], rows
    )


@pytest.fixture
def convergence_csv(tmp_path):
    rows = []
    for n in (60, 120, 240, 480):
        err = 7.3 * n**-3.0
        order = None if n == 60 else 3.0
        rows.append((1.0, 2, n, 60.0 / n, err, order))
    return write_csv(
        tmp_path / "convergence.csv",
        ["theta", "k", "N", "h", "l2_error", "order"],
        rows,
    )
