import numpy as np
import pytest

from cldg.mesh import Mesh1D, make_uniform_mesh, map_from_reference, map_to_reference


def test_uniform_mesh_boundaries():
    mesh = make_uniform_mesh(0.0, 1.0, 4)
    np.testing.assert_allclose(mesh.boundaries, [0.0, 0.25, 0.5, 0.75, 1.0], atol=0)


def test_experiment_grid_spacing():
    mesh = make_uniform_mesh(-25.0, 25.0, 100)
    assert mesh.h == pytest.approx(0.5, abs=2 * np.spacing(0.5))
    mesh = make_uniform_mesh(-30.0, 30.0, 120)
    assert mesh.h == pytest.approx(0.5, abs=2 * np.spacing(0.5))
    assert mesh.boundaries.size == 121


def test_uniform_widths_and_gamma():
    mesh = make_uniform_mesh(-3.0, 7.0, 13)
    target = 10.0 / 13
    assert np.abs(mesh.widths - target).max() <= 2 * np.spacing(target)
    assert abs(mesh.gamma - 1.0) <= 2 * np.spacing(1.0)


def test_construction_rejections():
    with pytest.raises(ValueError):
        make_uniform_mesh(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        make_uniform_mesh(1.0, 1.0, 4)
    with pytest.raises(ValueError):
        make_uniform_mesh(2.0, 1.0, 4)
    with pytest.raises(ValueError):
        Mesh1D(np.array([0.0, 0.5, 0.25, 1.0]))


def test_quasi_uniform_mesh_accepted():
    mesh = Mesh1D(np.array([0.0, 0.1, 0.4, 0.5, 1.0]))
    assert mesh.n_cells == 4
    assert 0.0 < mesh.gamma < 1.0
    assert mesh.h == pytest.approx(0.5)


def test_map_to_reference_examples():
    mesh = make_uniform_mesh(0.0, 1.0, 2)  # cells [0, .5], [.5, 1]
    assert map_to_reference(mesh, 0, 0.25) == pytest.approx(0.0, abs=1e-15)
    assert map_to_reference(mesh, 0, 0.5) == pytest.approx(1.0, abs=1e-15)
    mesh = Mesh1D(np.array([0.0, 0.25, 0.75, 1.0]))
    assert map_to_reference(mesh, 1, 0.375) == pytest.approx(-0.5, abs=1e-15)


def test_map_to_reference_rejects_outside():
    mesh = make_uniform_mesh(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        map_to_reference(mesh, 0, 0.26)
    with pytest.raises(ValueError):
        map_to_reference(mesh, 1, 0.2)
    # within a few ulps of the face is clamped, not rejected
    assert map_to_reference(mesh, 0, 0.25 + np.spacing(0.25)) == 1.0


def test_round_trip_random_points():
    rng = np.random.default_rng(5)
    mesh = Mesh1D(np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 18)])))
    for _ in range(1000):
        cell = int(rng.integers(mesh.n_cells))
        x = rng.uniform(mesh.boundaries[cell], mesh.boundaries[cell + 1])
        xi = map_to_reference(mesh, cell, x)
        back = map_from_reference(mesh, cell, xi)
        assert abs(back - x) <= 4 * np.spacing(max(abs(x), mesh.widths[cell]))


def test_periodic_neighbor_wraps():
    mesh = make_uniform_mesh(0.0, 1.0, 7)
    cell = 3
    for _ in range(mesh.n_cells):
        cell = mesh.right_neighbor(cell)
    assert cell == 3
    assert mesh.right_neighbor(mesh.n_cells - 1) == 0
    assert mesh.left_neighbor(0) == mesh.n_cells - 1


def test_width_sum_telescopes():
    mesh = make_uniform_mesh(-25.0, 25.0, 100)
    assert abs(mesh.widths.sum() - 50.0) <= 8 * np.spacing(50.0)


def test_mesh_tokens_distinct():
    m1 = make_uniform_mesh(0.0, 1.0, 4)
    m2 = make_uniform_mesh(0.0, 1.0, 4)
    assert m1.token != m2.token
