"""Concentration of translated monomials on a disc as a function of degree.

For D(c, R) and n = 0..n_max, prints the per-ray average, the Jensen middle
term and the bound 1 - exp(-|D|), and writes an SVG plot.  With --center 0
the first row is the disc identity.

    python3 scripts/concentration_vs_n.py --center 2 --radius 1 --n-max 40
"""

import argparse
from pathlib import Path

from fockbound.concentration import jensen_chain
from fockbound.geometry import disc
from fockbound.report import svg_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--center", type=float, default=2.0, help="disc center on the real axis")
    ap.add_argument("--radius", type=float, default=1.0)
    ap.add_argument("--n-max", type=int, default=30)
    ap.add_argument("--angles", type=int, default=2048)
    ap.add_argument("--out", default="results/concentration_vs_n.svg")
    args = ap.parse_args()

    s = disc((args.center, 0.0), args.radius)
    chains = [jensen_chain(s, n, (0.0, 0.0), args.angles) for n in range(args.n_max + 1)]
    print(f"{'n':>3} {'concentration':>14} {'jensen':>10} {'bound':>10}")
    for n, ch in enumerate(chains):
        print(f"{n:3d} {ch.per_ray_average:14.8f} {ch.jensen_middle:10.6f} {ch.bound:10.6f}")
    peak = max(range(len(chains)), key=lambda n: chains[n].per_ray_average)
    print(f"peak at n={peak}: {chains[peak].per_ray_average:.6f} of bound {chains[0].bound:.6f}")

    svg = svg_plot(list(range(args.n_max + 1)),
                   {"concentration": [c.per_ray_average for c in chains],
                    "jensen middle": [c.jensen_middle for c in chains]},
                   hline=chains[0].bound, title=f"D({args.center:g}, {args.radius:g})",
                   xlabel="n", ylabel="mass on disc")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
