import numpy as np
import pytest
from hypothesis import settings

from maslov_lab import maslov
from maslov_lab.geometry import frame_from_unitary, to_complex

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def oracle_index(frame_fn, samples=20001):
    """Brute-force Maslov index: dense sampling, det^2 of the raw complexified
    frame (no orthonormalisation), numpy's unwrap."""
    t = np.linspace(0.0, 1.0, samples)
    F = frame_fn(t)
    M = np.stack([to_complex(F[:, 0]), to_complex(F[:, 1])], axis=-1)
    d = np.linalg.det(M) ** 2
    total = np.unwrap(np.angle(d))[-1] - np.angle(d[0])
    return int(round(total / (2 * np.pi)))


def _hermitian_exp(H):
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def random_unitary_loop(rng, max_turns=3, modes=2, amplitude=0.6):
    """Random smooth loop U(t) = W diag(e^{2pi i a t}, e^{2pi i b t}) exp(i H(t)),
    H a Hermitian trigonometric polynomial. Its Maslov index is 2(a + b)
    because det exp(iH) = exp(i tr H) has zero winding."""
    a, b = (int(x) for x in rng.integers(-max_turns, max_turns + 1, size=2))
    coef = rng.normal(size=(modes, 2, 2, 2)) + 1j * rng.normal(size=(modes, 2, 2, 2))
    coef = amplitude * (coef + np.conj(np.swapaxes(coef, -1, -2))) / 2
    W = _hermitian_exp(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) + 0j)
    W = _hermitian_exp((W + np.conj(W.T)) / 2)

    def U(t):
        t = np.asarray(t, dtype=float)[..., None, None]
        H = np.zeros(t.shape[:-2] + (2, 2), dtype=complex)
        for m in range(modes):
            H = H + coef[m, 0] * np.cos(2 * np.pi * (m + 1) * t) + coef[m, 1] * np.sin(2 * np.pi * (m + 1) * t)
        H = (H + np.conj(np.swapaxes(H, -1, -2))) / 2
        D = np.zeros_like(H)
        D[..., 0, 0] = np.exp(2j * np.pi * a * t[..., 0, 0])
        D[..., 1, 1] = np.exp(2j * np.pi * b * t[..., 0, 0])
        return W @ D @ _hermitian_exp(H)

    return maslov.loop_from_unitary(U), 2 * (a + b)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
