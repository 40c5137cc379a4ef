import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import oracle_index, random_unitary_loop
from maslov_lab import maslov
from maslov_lab.errors import FixedPointOrbit, LoopError, NotLagrangian, PhaseStepTooLarge
from maslov_lab.geometry import DX1, DX2, DY1, DY2, omega
from maslov_lab.maslov import maslov_index

seeds = st.integers(0, 2**32 - 1)


def index(loop):
    return maslov_index(loop).index


# -- golden values ----------------------------------------------------------

def test_constant_loop_index_zero():
    assert index(maslov.constant_loop()) == 0


@pytest.mark.parametrize("sign, expected", [(1, 4), (-1, -4)])
def test_central_loops(sign, expected):
    assert index(maslov.central_loop(sign)) == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_diagonal_power_loop(k):
    assert index(maslov.diagonal_power_loop(k)) == 2 * k


@pytest.mark.parametrize("direction, expected", [(1, 2), (-1, -2)])
def test_ruled_fiber_loops(direction, expected):
    assert index(maslov.ruled_fiber_loop(direction)) == expected


def test_ruled_fiber_concatenation_cancels():
    loop = maslov.concatenate(maslov.ruled_fiber_loop(1), maslov.ruled_fiber_loop(-1))
    assert index(loop) == 0


def test_orbit_loop_at_1_0_spans_real_plane():
    loop = maslov.orbit_lagrangian_loop([1, 0, 0, 0], -DX1)
    assert index(loop) == 0
    # the plane field is dx1 ^ dx2 at every point of the orbit
    F = loop.frames_at(np.linspace(0, 1, 17))
    assert np.abs(F[..., 2:]).max() < 1e-15


def test_orbit_loop_other_complements_give_same_index(rng):
    p = np.array([1.0, 0, 0, 0])
    # X(p) = dx2; the omega-orthogonal complement is span{dx1, dx2, dy1}
    for _ in range(10):
        c = rng.normal(size=3)
        w = c[0] * DX1 + c[1] * DX2 + c[2] * DY1
        if np.linalg.norm(w - np.dot(w, DX2) * DX2) < 1e-3:
            continue
        assert index(maslov.orbit_lagrangian_loop(p, w)) == 0


def test_orbit_loop_reversed_weight_matches_oracle():
    loop = maslov.orbit_lagrangian_loop([1, 0, 0, 0], -DX1, weight=-1)
    assert index(loop) == oracle_index(loop.generator) == 0


def test_orbit_loop_errors():
    with pytest.raises(FixedPointOrbit):
        maslov.orbit_lagrangian_loop([0, 0, 0, 0], DX1)
    with pytest.raises(NotLagrangian):
        maslov.orbit_lagrangian_loop([1, 0, 0, 0], DY2)


def test_central_loop_matches_oracle():
    loop = maslov.central_loop(1)
    assert oracle_index(loop.generator) == 4


def test_fast_winding_refines():
    res = maslov_index(maslov.diagonal_power_loop(50))
    assert res.index == 100
    assert res.max_phase_step < np.pi / 2
    assert res.samples_used > 64


def test_undersampled_frozen_loop_raises():
    loop = maslov.frozen(maslov.diagonal_power_loop(3, n=16))
    with pytest.raises(PhaseStepTooLarge):
        maslov_index(loop)


def test_loop_invariants_enforced():
    good = maslov.central_loop(1).samples
    with pytest.raises(LoopError):
        maslov.LagrangianLoop(good[:5])
    with pytest.raises(LoopError):
        maslov.LagrangianLoop(good[:-10])  # open
    bad = good.copy()
    bad[3, 1] = bad[3, 0] + np.array([0, 0, 1.0, 0]) * 0  # dependent columns
    with pytest.raises(ValueError):
        maslov.LagrangianLoop(bad)


# -- properties (oracle: 2(a+b) for random loops) ---------------------------

@given(seeds)
def test_index_matches_construction(seed):
    loop, expected = random_unitary_loop(np.random.default_rng(seed))
    res = maslov_index(loop)
    assert res.index == expected
    assert abs(res.winding - res.index) < 1e-6


@given(seeds)
def test_reparametrisation_invariance(seed):
    rng = np.random.default_rng(seed)
    loop, expected = random_unitary_loop(rng)
    c = rng.uniform(-0.9, 0.9) / (2 * np.pi)
    phi = lambda t: t + c * np.sin(2 * np.pi * t)  # noqa: E731 - strictly increasing
    assert index(maslov.reparametrize(loop, phi)) == expected


@given(seeds)
def test_refinement_stability(seed):
    loop, expected = random_unitary_loop(np.random.default_rng(seed))
    res = maslov_index(loop)
    doubled = maslov.frozen(maslov.resample(loop, 2 * res.samples_used))
    assert index(doubled) == res.index


@given(seeds)
def test_reversal_antisymmetry(seed):
    loop, _ = random_unitary_loop(np.random.default_rng(seed))
    assert index(maslov.reverse(loop)) == -index(loop)


@given(seeds, seeds)
def test_concatenation_additivity(s1, s2):
    a, ea = random_unitary_loop(np.random.default_rng(s1))
    b, eb = random_unitary_loop(np.random.default_rng(s2))
    # move b to a's base plane by a constant unitary so the loops share a base
    Ua = maslov.unitaries_from_frames(a.samples[0])
    Ub = maslov.unitaries_from_frames(b.samples[0])
    C = Ua @ np.conj(Ub.T)
    gb = b.generator
    moved = maslov.LagrangianLoop.from_generator(
        lambda t: maslov.frame_from_unitary(C @ maslov.unitaries_from_frames(gb(t))))
    assert index(maslov.concatenate(a, moved)) == ea + eb


@given(seeds, st.integers(-2, 2))
def test_central_twist_shift(seed, turns):
    loop, expected = random_unitary_loop(np.random.default_rng(seed))
    assert index(maslov.central_twist(loop, turns)) == expected + 4 * turns


@given(seeds)
def test_gauge_invariance(seed):
    rng = np.random.default_rng(seed)
    loop, expected = random_unitary_loop(rng)
    k = int(rng.integers(-3, 4))
    shear = rng.normal()

    def mats(t):
        a = 2 * np.pi * k * t
        R = np.stack([np.stack([np.cos(a), -np.sin(a)], -1), np.stack([np.sin(a), np.cos(a)], -1)], -2)
        S = np.array([[1.5, shear], [0.0, 0.7]])
        return S @ R

    assert index(maslov.regauge(loop, mats)) == expected


def test_gauge_invariance_pointwise_reflections(rng):
    loop, expected = random_unitary_loop(rng)
    frames = loop.frames_at(np.linspace(0, 1, 513))
    flips = rng.integers(0, 2, size=len(frames)).astype(bool)
    frames[flips] = frames[flips][:, ::-1]  # swap u, v: a reflection per sample
    assert index(maslov.LagrangianLoop(frames)) == expected


def test_lagrangian_defect_along_random_loop(rng):
    loop, _ = random_unitary_loop(rng)
    F = loop.frames_at(np.linspace(0, 1, 100))
    assert np.abs(omega(F[:, 0], F[:, 1])).max() < 1e-12


def test_non_orientable_loop_rejected():
    # half turn in the first factor: the plane closes up but its orientation flips
    loop = maslov.loop_from_unitary(lambda t: maslov._diag(np.exp(1j * np.pi * np.asarray(t)), 1))
    with pytest.raises(LoopError, match="non-orientable"):
        maslov_index(loop)
    with pytest.raises(LoopError, match="non-orientable"):
        maslov_index(maslov.frozen(maslov.resample(loop, 256)))
    assert index(maslov.concatenate(loop, loop)) == 2
