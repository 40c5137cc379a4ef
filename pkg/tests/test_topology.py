import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maslov_lab import topology
from maslov_lab.errors import InvalidProfile, VanishingField
from maslov_lab.topology import SpaceProfile


def valid(n, g, b):
    try:
        return SpaceProfile(n, g, b)
    except InvalidProfile:
        return None


@pytest.mark.parametrize("n, g, b, counts", [
    (2, 1, 1, (1, 2, 4)),
    (0, 0, 1, (1, 0, 0)),
    (3, 0, 2, (1, 1, 4)),
])
def test_handle_counts(n, g, b, counts):
    inv = topology.handle_decomposition(SpaceProfile(n, g, b))
    assert (inv.zero_handles, inv.one_handles, inv.two_handles) == counts
    assert inv.two_handle_framings == [-1] * counts[2]
    assert inv.stein_framing_ok


@pytest.mark.parametrize("n, g, b, ranks", [
    (2, 1, 2, (1, 3, 5, 0, 0)),
    (0, 1, 1, (1, 2, 2, 0, 0)),
    (4, 0, 1, (1, 0, 4, 0, 0)),
])
def test_homology(n, g, b, ranks):
    assert topology.homology(SpaceProfile(n, g, b)).ranks == ranks


@pytest.mark.parametrize("n, g, b, chi", [(2, 1, 1, 3), (0, 0, 1, 1), (5, 2, 3, 6)])
def test_euler(n, g, b, chi):
    assert topology.euler_characteristic(SpaceProfile(n, g, b)) == chi


@pytest.mark.parametrize("args", [(-1, 0, 1), (0, -1, 1), (0, 0, 0), (0, 1, 0), (1.5, 0, 1)])
def test_invalid_profiles(args):
    with pytest.raises(InvalidProfile):
        SpaceProfile(*args)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(1, 20))
def test_consistency_triangle(n, g, b):
    p = valid(n, g, b)
    if p is None:
        return
    inv = topology.handle_decomposition(p)
    hom = topology.homology(p)
    assert topology.euler_characteristic(p) == n + 1 == inv.euler == hom.euler
    assert hom[1] == 2 * g + b - 1
    assert (hom[1] == 0) == ((g, b) == (0, 1))
    assert hom.ranks[3:] == (0, 0)
    assert all(f == -1 for f in inv.two_handle_framings)


def test_framing_case1():
    assert topology.framing_winding(topology.contact_framing_case1) == 1
    assert topology.framing_winding(topology.contact_framing_case1, reverse=True) == -1
    const = lambda th: np.broadcast_to([0.3, 0.8], np.shape(th) + (2,))  # noqa: E731
    assert topology.framing_winding(const) == 0


def test_case1_field_is_gradient_on_boundary():
    th = np.linspace(0, 2 * np.pi, 9)
    np.testing.assert_allclose(topology.contact_framing_case1(th),
                               np.stack([np.sin(th), -np.cos(th)], -1), atol=1e-15)


@pytest.mark.parametrize("eps", [0.01, 0.5, 0.99])
def test_framing_case2(eps):
    assert topology.framing_winding_2handle(eps) == 1
    assert topology.framing_winding_2handle(eps, reverse=True) == -1
    assert topology.framing_winding_2handle(eps, reference=(0.0, 1.0)) == 1


def test_framing_case2_epsilon_range():
    with pytest.raises(ValueError):
        topology.framing_winding_2handle(1.5)


def test_vanishing_field():
    with pytest.raises(VanishingField):
        topology.framing_winding(lambda th: np.stack([np.cos(th) * 0, np.sin(th) * 0], -1))


def test_profile_report():
    doc = topology.profile_report(SpaceProfile(2, 1, 1))
    assert doc == {
        "schema": "profile/1", "n": 2, "g": 1, "b": 1,
        "handles": {"zero": 1, "one": 2, "two": 4, "framings": [-1, -1, -1, -1]},
        "homology": [1, 2, 4, 0, 0], "euler": 3, "stein_framing_ok": True,
    }
