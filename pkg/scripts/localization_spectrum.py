"""Top eigenvalue of truncated localization matrices for off-center discs.

Sweeps the disc center along the real axis and reports the largest eigenvalue
of the (N+1)x(N+1) Hermite-basis matrix next to 1 - exp(-pi R^2).  Truncation
from below means the eigenvalue can only grow with N.

    python3 scripts/localization_spectrum.py --radius 1 --n 30
"""

import argparse
import math

import numpy as np

from fockbound.geometry import disc
from fockbound.timefreq import localization_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--angles", type=int, default=1024)
    ap.add_argument("--centers", type=float, nargs="+", default=[0, 0.5, 1, 1.5, 2, 2.5, 3])
    args = ap.parse_args()

    bound = 1 - math.exp(-math.pi * args.radius ** 2)
    print(f"bound 1 - exp(-pi R^2) = {bound:.10f}")
    print(f"{'center':>7} {'top eig':>14} {'gap':>10} {'quad_error':>11}")
    for c in args.centers:
        M = localization_matrix(disc((c, 0.0), args.radius), args.n, args.angles)
        top = float(np.max(M.eigenvalues()))
        print(f"{c:7.2f} {top:14.10f} {bound - top:10.2e} {M.quad_error:11.1e}")


if __name__ == "__main__":
    main()
