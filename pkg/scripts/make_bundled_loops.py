"""Regenerate the loop/1 files shipped in src/maslov_lab/data/."""

from pathlib import Path

from maslov_lab import io, maslov

DATA = Path(__file__).resolve().parents[1] / "src" / "maslov_lab" / "data"

LOOPS = {
    "central_loop.json": maslov.central_loop(1, n=64),
    "inverse_central_loop.json": maslov.central_loop(-1, n=64),
    "constant_loop.json": maslov.constant_loop(n=64),
    "ruled_fiber_loop.json": maslov.ruled_fiber_loop(1, n=64),
}

if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    for name, loop in LOOPS.items():
        io.write_loop(loop, DATA / name)
        print(name, maslov.maslov_index(maslov.frozen(loop)).index)
