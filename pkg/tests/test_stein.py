import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maslov_lab import dynamics, stein
from maslov_lab.errors import InvalidIndex, SingularGradient
from maslov_lab.verify import boundary_components_by_continuation

ns = st.integers(0, 6)


def test_residual_values():
    assert stein.wn_residual([1, 0, 0], 3) == 0
    assert stein.wn_residual([0, 0, 1], 2) == 0
    assert stein.wn_residual([0, 0, 0], 0) == -1


def test_projection_fixes_surface_points():
    p = stein.project_to_wn([1, 0, 0], 2)
    np.testing.assert_array_equal(p.z, [1, 0, 0])


def test_projection_from_nearby_point():
    z0 = np.array([1 + 1e-3, 0, 0])
    p = stein.project_to_wn(z0, 2)
    assert abs(stein.wn_residual(p.z, 2)) < 1e-12
    # frozen from a Newton run: the projection lands on (1, 0, 0)
    assert np.abs(p.z - z0).max() == pytest.approx(1e-3, abs=1e-9)
    assert np.abs(p.z - z0).max() < 2e-3


def test_projection_singular_gradient():
    with pytest.raises(SingularGradient):
        stein.project_to_wn([0, 0, 0], 1)


@given(ns, st.integers(0, 2**32 - 1))
def test_projection_random_points(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    p = stein.project_to_wn(z, n)
    assert abs(stein.wn_residual(p.z, n)) < 1e-12


def test_group_action_examples():
    for n in range(4):
        for p in stein.fixed_points(n):
            np.testing.assert_array_equal(stein.group_action(1.234, p).z, p.z)
    np.testing.assert_allclose(stein.group_action(np.pi / 2, np.array([1, 0, 0])), [0, 1, 0], atol=1e-16)
    z = stein.project_to_wn([0.3 + 0.1j, -0.7j, 0.5], 3).z
    np.testing.assert_allclose(stein.group_action(2 * np.pi, z), z, atol=1e-12)


@given(ns, st.floats(-10, 10), st.integers(0, 2**32 - 1))
def test_action_invariances(n, theta, seed):
    rng = np.random.default_rng(seed)
    z = stein.project_to_wn(rng.normal(size=3) + 1j * rng.normal(size=3), n).z
    y = stein.group_action(theta, z)
    scale = max(1.0, np.abs(z).max()) ** max(2, n + 1)
    assert abs(stein.wn_residual(y, n) - stein.wn_residual(z, n)) < 64 * np.finfo(float).eps * scale
    assert abs(stein.moment_map(y) - stein.moment_map(z)) < 1e-12 * scale
    assert stein.reduction_map(y) == stein.reduction_map(z)


def test_reduction_map_values():
    for k, p in enumerate(stein.fixed_points(4)):
        assert stein.reduction_map(p) == np.exp(2j * np.pi * k / 5)


def test_reduction_constant_along_gradient_flow():
    traj = dynamics.integrate_flow("grad", stein.to_real6(np.array([1, 0, 0])), 3.0, 1e-3)
    z = stein.from_real6(traj.states)
    assert np.abs(z[:, 2]).max() < 1e-8
    assert np.abs(stein.wn_residual(z, 2)).max() < 1e-8


def test_fixed_points():
    fps = stein.fixed_points(3)
    assert len(fps) == 4
    for p in fps:
        assert p.z[0] == p.z[1] == 0
        assert abs(p.z[2] ** 4 - 1) < 1e-15


def test_sphere_endpoints_n1():
    s = stein.sample_sphere(1, 1, 16)
    np.testing.assert_array_equal(s.points[0], np.broadcast_to([0, 0, 1], (16, 3)))
    np.testing.assert_allclose(s.points[-1], np.broadcast_to([0, 0, -1], (16, 3)), atol=1e-15)


def test_sphere_points_on_zero_level():
    s = stein.sample_sphere(2, 1, 32)
    assert np.abs(stein.moment_map(s.points)).max() < 1e-10
    assert np.abs(stein.wn_residual(s.points, 2)).max() < 1e-12


def test_sphere_adjacency_n2():
    a = stein.mesh_keys(stein.sample_sphere(2, 1, 32).points)
    b = stein.mesh_keys(stein.sample_sphere(2, 2, 32).points)
    assert a & b == stein.mesh_keys(stein.fixed_points(2)[1].z[None, :])


def test_nonadjacent_spheres_disjoint():
    a = stein.mesh_keys(stein.sample_sphere(3, 1, 32).points)
    c = stein.mesh_keys(stein.sample_sphere(3, 3, 32).points)
    assert not a & c


@pytest.mark.parametrize("n, k", [(1, 1), (3, 2), (5, 1), (5, 5)])
def test_spheres_are_lagrangian(n, k):
    assert stein.check_lagrangian_sphere(stein.sample_sphere(n, k, 64)) < 1e-6


def test_lagrangian_check_detects_non_lagrangian_surface():
    s = stein.sample_sphere(2, 1, 32)
    # a torus-like surface tilted into the symplectic z1 direction is not Lagrangian
    s.points = s.points.copy()
    s.points[..., 0] += 1j * s.phi[:, None] * np.cos(s.s)[None, :]
    assert stein.check_lagrangian_sphere(s) > 1e-2


def test_sphere_invariance():
    s = stein.sample_sphere(3, 2, 32)
    assert stein.sphere_invariance_defect(s, 0.77) < 1e-10


def test_sphere_index_range():
    with pytest.raises(InvalidIndex):
        stein.sample_sphere(2, 3)
    with pytest.raises(InvalidIndex):
        stein.sample_sphere(2, 0)


@pytest.mark.parametrize("n, expected", [(0, (0, 1)), (2, (1, 1)), (3, (1, 2)), (4, (2, 1)), (7, (3, 2))])
def test_riemann_surface_profile(n, expected):
    assert stein.riemann_surface_profile(n) == expected
    g, b = expected
    assert 2 - 2 * g - b == 2 - (n + 1)
    assert boundary_components_by_continuation(n) == b


@pytest.mark.parametrize("n", [0, 1, 4])
def test_morse_index_at_fixed_points(n):
    assert all(stein.restricted_hessian_index(n, k) == 2 for k in range(n + 1))


def test_wnpoint_validation():
    with pytest.raises(ValueError):
        stein.WnPoint([0, 0, 0], 1)
