"""Write sphere/1 meshes for every S_k in W_n and report the Lagrangian
defect of each as the resolution grows."""

import argparse
from pathlib import Path

from maslov_lab import io, stein


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--resolutions", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--out", type=Path, default=Path("spheres"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for k in range(1, args.n + 1):
        defects = []
        for res in args.resolutions:
            s = stein.sample_sphere(args.n, k, res)
            defects.append(stein.check_lagrangian_sphere(s))
        io.write_json(io.sphere_to_doc(s), args.out / f"W{args.n}_S{k}.json")
        print(f"S_{k}: " + "  ".join(f"R={r}: {d:.2e}" for r, d in zip(args.resolutions, defects)))


if __name__ == "__main__":
    main()
