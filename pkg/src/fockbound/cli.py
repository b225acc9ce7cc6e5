"""Command-line experiment runner.

Exit codes: 0 success, 1 input error, 2 audit failure, 3 numerical non-convergence.
"""

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import concentration as conc
from . import geometry as geo
from . import symbols as sym
from . import timefreq as tf
from .report import svg_plot, to_csv, to_json
from .specfun import ConvergenceError, one_minus_exp_neg

EXIT_OK, EXIT_INPUT, EXIT_AUDIT, EXIT_NONCONVERGENCE = 0, 1, 2, 3
COARSE_K = 64


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    symbol: Optional[str] = None
    set: Optional[str] = None
    n_max: Optional[int] = None
    trunc_tol: float = 1e-12
    tol: Optional[float] = None
    angles: int = 1024
    seed: int = conc.DEFAULT_SEED
    trials: Optional[int] = None
    degree: int = 12
    eps: float = 0.1
    radius: float = 1.0
    count: int = 50
    point: Tuple[float, float] = (0.0, 0.0)
    intervals: List[Tuple[float, float]] = field(default_factory=list)
    set_out: Optional[str] = None
    format: str = "json"
    out: Optional[str] = None
    threads: int = 1

    def validate(self):
        if self.n_max is not None and self.n_max < 0:
            raise ConfigError("--n-max must be >= 0")
        if not self.trunc_tol > 0:
            raise ConfigError("--trunc-tol must be positive")
        if self.tol is not None and self.tol < 0:
            raise ConfigError("--tol must be >= 0")
        if self.angles < 8:
            raise ConfigError("--angles must be >= 8")
        if self.trials is not None and self.trials < 0:
            raise ConfigError("--trials must be >= 0")
        if self.degree < 0:
            raise ConfigError("--degree must be >= 0")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.format not in ("csv", "json", "svg"):
            raise ConfigError("--format must be csv, json or svg")


@dataclass
class Outcome:
    report: dict
    columns: List[str]
    rows: List[dict]
    svg: Optional[str] = None
    exit_code: int = EXIT_OK


def _map(config, fn, items):
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def _base_report(config):
    return {"command": config.command, "config": asdict(config), "seed": config.seed}


# --- commands ----------------------------------------------------------------


def run_toeplitz_norm(config: ExperimentConfig) -> Outcome:
    if not config.symbol:
        raise ConfigError("toeplitz-norm needs --symbol")
    s = sym.load_symbol(config.symbol)
    tol = 1e-10 if config.tol is None else config.tol
    report = _base_report(config)
    notes = []
    if s.center != (0.0, 0.0):
        notes.append("symbol translated to the origin; the norm is translation invariant")
    origin = sym.StepRadialSymbol(s.pieces)
    seq = sym.eigenvalue_sequence(origin, config.trunc_tol)
    norm = sym.toeplitz_norm(origin, config.trunc_tol)
    rows = [{"n": n, "eigenvalue": float(v)} for n, v in enumerate(seq.values)]
    report.update(norm=norm, sup_norm=sym.sup_norm(s), l1_norm=sym.l1_norm(s),
                  truncation=seq.truncation, tail_bound=seq.tail_bound,
                  eigenvalues=[r["eigenvalue"] for r in rows])
    if sym.sup_norm(s) == 0:
        notes.append("zero symbol: bound skipped, norm is 0")
        report.update(bound=None, slack=None, holds=True)
        code = EXIT_OK
    else:
        bound = sym.theorem1_bound(s)
        holds = norm <= bound + tol
        report.update(bound=bound, slack=bound - norm, holds=holds)
        code = EXIT_OK if holds else EXIT_AUDIT
    report["notes"] = notes
    svg = svg_plot([r["n"] for r in rows], {"eigenvalue": [r["eigenvalue"] for r in rows]},
                   hline=report["bound"], title="Toeplitz eigenvalues", xlabel="n",
                   ylabel="lambda_n")
    return Outcome(report, ["n", "eigenvalue"], rows, svg, code)


def _random_union(rng, max_pieces=8, span=50.0, max_total=50.0):
    k = int(rng.integers(1, max_pieces + 1))
    edges = np.sort(rng.uniform(0.0, span, size=2 * k))
    I = geo.IntervalUnion(tuple(zip(edges[0::2], edges[1::2])))
    if I.length > max_total:
        scale = max_total / I.length
        I = geo.IntervalUnion(tuple((lo * scale, hi * scale) for lo, hi in I))
    return I


def run_lemma_audit(config: ExperimentConfig) -> Outcome:
    tol = conc.LEMMA_TOL if config.tol is None else config.tol
    n_max = 60 if config.n_max is None else config.n_max
    trials = 200 if config.trials is None else config.trials
    p_max = min(n_max, 40)
    intervals = config.intervals or [(0.0, 1.0)]
    I = geo.IntervalUnion(tuple(intervals))
    rows = []
    for r in conc.lemma1_audit(I, n_max, tol):
        rows.append({"kind": "deterministic", "trial": 0, "n": r.params["n"],
                     "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack, "holds": r.holds})

    def one_trial(t):
        rng = np.random.default_rng([config.seed, t])
        U = _random_union(rng)
        worst = min(conc.lemma1_audit(U, n_max, tol), key=lambda r: r.slack)
        pieces = list(U)
        weights = rng.uniform(0.0, 1.0, size=len(pieces))
        p = int(rng.integers(0, p_max + 1))
        r2 = conc.lemma2_audit([(geo.IntervalUnion((iv,)), w) for iv, w in zip(pieces, weights)],
                               p, tol)
        return [
            {"kind": "random-single", "trial": t, "n": worst.params["n"], "lhs": worst.lhs,
             "rhs": worst.rhs, "slack": worst.slack, "holds": worst.holds},
            {"kind": "random-weighted", "trial": t, "n": p, "lhs": r2.lhs,
             "rhs": r2.rhs, "slack": r2.slack, "holds": r2.holds},
        ]

    for pair in _map(config, one_trial, range(trials)):
        rows.extend(pair)
    holds = all(r["holds"] for r in rows)
    report = _base_report(config)
    report.update(intervals=[list(iv) for iv in I], n_max=n_max, trials=trials, tolerance=tol,
                  violations=sum(not r["holds"] for r in rows),
                  min_slack=min(r["slack"] for r in rows), holds=holds, rows=rows)
    det = [r for r in rows if r["kind"] == "deterministic"]
    svg = svg_plot([r["n"] for r in det], {"lhs": [r["lhs"] for r in det]},
                   hline=det[0]["rhs"], title="Gamma mass vs bound", xlabel="n", ylabel="mass")
    return Outcome(report, ["kind", "trial", "n", "lhs", "rhs", "slack", "holds"], rows, svg,
                   EXIT_OK if holds else EXIT_AUDIT)


def run_concentration(config: ExperimentConfig) -> Outcome:
    if not config.set:
        raise ConfigError("concentration needs --set")
    s = geo.load_set(config.set)
    n_max = 20 if config.n_max is None else config.n_max
    K = s.K if isinstance(s, geo.AngularProfile) else config.angles
    warnings = []
    if K < COARSE_K:
        warnings.append(f"coarse angular grid K={K}; discretization tolerance 10/K = {10 / K:.3g}")
    radial = tf.as_origin_radial(geo.translate(s, (-config.point[0], -config.point[1])))

    def one(n):
        ch = conc.jensen_chain(s, n, config.point, K)
        row = {"n": n, "per_ray_average": ch.per_ray_average, "jensen_middle": ch.jensen_middle,
               "bound": ch.bound, "per_ray_link": ch.per_ray_link(), "jensen_link": ch.jensen_link(),
               "exact": None}
        if radial is not None:
            row["exact"] = conc.monomial_concentration(radial, n)
        row["holds"] = row["per_ray_link"] and row["jensen_link"]
        return row

    rows = _map(config, one, range(n_max + 1))
    holds = all(r["holds"] for r in rows)
    report = _base_report(config)
    report.update(measure=geo.measure(s), bound=rows[0]["bound"], K=K, warnings=warnings,
                  holds=holds, rows=rows)
    svg = svg_plot([r["n"] for r in rows],
                   {"concentration": [r["per_ray_average"] for r in rows],
                    "jensen middle": [r["jensen_middle"] for r in rows]},
                   hline=rows[0]["bound"], title="Monomial concentration", xlabel="n",
                   ylabel="mass on set")
    cols = ["n", "per_ray_average", "jensen_middle", "bound", "exact", "holds"]
    return Outcome(report, cols, rows, svg, EXIT_OK if holds else EXIT_AUDIT)


def run_localization(config: ExperimentConfig) -> Outcome:
    if not config.set:
        raise ConfigError("localization needs --set")
    N = 20 if config.n_max is None else config.n_max
    if N > tf.MAX_MATRIX_N:
        raise ConfigError(f"--n-max {N} exceeds the certified range N <= {tf.MAX_MATRIX_N}")
    K = max(config.angles, tf.MIN_MATRIX_K)
    s = geo.load_set(config.set)
    L = tf.localization_matrix(s, N, K)
    eig = L.eigenvalues()
    qe = L.quad_error
    bound = one_minus_exp_neg(geo.measure(s))
    diag = np.real(np.diag(L.entries))
    checks = {
        "hermitian": L.hermitian_defect() <= qe + 1e-12,
        "eigenvalues_in_unit_interval": bool(eig[0] >= -qe - 1e-12 and eig[-1] <= 1 + qe + 1e-12),
        "diagonal_below_bound": bool(np.all(diag <= bound + qe + 10.0 / K)),
    }
    single_disc = (isinstance(s, geo.Annuli) and len(s.rings) == 1 and s.rings.intervals[0][0] == 0) \
        or (isinstance(s, geo.DiscUnion) and len(s.discs) == 1)
    if single_disc:
        checks["top_eigenvalue_below_bound"] = bool(eig[-1] <= bound + qe + 1e-12)
    holds = all(checks.values())
    report = _base_report(config)
    report.update(matrix=L.to_dict(), eigenvalues=eig.tolist(), bound=bound, checks=checks,
                  holds=holds)
    eig_desc = eig[::-1]
    rows = [{"n": n, "diagonal": float(diag[n]), "eigenvalue": float(eig_desc[n])}
            for n in range(N + 1)]
    svg = svg_plot(list(range(N + 1)), {"diagonal": list(diag), "eigenvalue": list(eig_desc)},
                   hline=bound, title="Localization matrix", xlabel="n", ylabel="value")
    return Outcome(report, ["n", "diagonal", "eigenvalue"], rows, svg,
                   EXIT_OK if holds else EXIT_AUDIT)


def run_sparse_omega(config: ExperimentConfig) -> Outcome:
    trials = 200 if config.trials is None else config.trials
    K = max(config.angles, 4096)
    S, cert = conc.sparse_disc_construct(config.eps, config.radius, config.count)
    audit = conc.sparse_disc_audit(S, cert, trials=trials, degree=config.degree,
                                   seed=config.seed, K=K)
    if config.set_out:
        geo.dump_set(S, config.set_out)
    report = _base_report(config)
    report.update(set=geo.set_to_doc(S), measure=geo.measure(S), certificate=cert.to_dict(),
                  audit=audit.to_dict(), holds=audit.holds)
    rows = [{"center_x": c[0], "center_y": c[1], "radius": rho} for c, rho in S.discs]
    return Outcome(report, ["center_x", "center_y", "radius"], rows, None,
                   EXIT_OK if audit.holds else EXIT_AUDIT)


def run_bargmann_check(config: ExperimentConfig) -> Outcome:
    n_max = 8 if config.n_max is None else config.n_max
    tol_b = 1e-6 if config.tol is None else config.tol
    grid = np.linspace(-3.0, 3.0, 11)
    points = [complex(x, y) for x in grid for y in grid if abs(complex(x, y)) <= 3.0]
    rows = []
    for n in range(n_max + 1):
        hn = lambda t, n=n: tf.hermite_eval(n, t)
        worst_b = worst_v = worst_flip = 0.0
        for z in points:
            b, _ = tf.bargmann_transform(hn, z)
            e = tf.fock_monomial(n, z)
            # relative where e_n(z) != 0, absolute at the zero of e_n
            worst_b = max(worst_b, abs(b - e) / abs(e) if e else abs(b))
            v, _ = tf.gabor_transform(hn, z)
            worst_v = max(worst_v, abs(v - tf.stft_hermite(n, z)))
            flip = complex(math.cos(math.pi * z.real * z.imag), math.sin(math.pi * z.real * z.imag)) \
                * b * math.exp(-0.5 * math.pi * abs(z) ** 2)
            worst_flip = max(worst_flip, abs(tf.stft_hermite(n, z.conjugate()) - flip))
        rows.append({"n": n, "bargmann_rel_error": worst_b, "stft_abs_error": worst_v,
                     "flip_abs_error": worst_flip,
                     "holds": worst_b <= tol_b and worst_v <= 1e-8 and worst_flip <= tol_b})
    holds = all(r["holds"] for r in rows)
    report = _base_report(config)
    report.update(points=len(points), holds=holds, rows=rows)
    svg = svg_plot([r["n"] for r in rows],
                   {"log10 bargmann error": [math.log10(r["bargmann_rel_error"] + 1e-300) for r in rows],
                    "log10 stft error": [math.log10(r["stft_abs_error"] + 1e-300) for r in rows]},
                   title="Transform fidelity", xlabel="n", ylabel="log10 error")
    cols = ["n", "bargmann_rel_error", "stft_abs_error", "flip_abs_error", "holds"]
    return Outcome(report, cols, rows, svg, EXIT_OK if holds else EXIT_AUDIT)


COMMANDS = {
    "toeplitz-norm": run_toeplitz_norm,
    "lemma-audit": run_lemma_audit,
    "concentration": run_concentration,
    "localization": run_localization,
    "sparse-omega": run_sparse_omega,
    "bargmann-check": run_bargmann_check,
}


# --- argument parsing --------------------------------------------------------


def _point(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y got {text!r}") from None
    return (x, y)


def _interval(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi got {text!r}") from None
    return (lo, hi)


def build_parser():
    parser = argparse.ArgumentParser(prog="fockbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--symbol")
        p.add_argument("--set")
        p.add_argument("--n-max", type=int)
        p.add_argument("--trunc-tol", type=float, default=1e-12)
        p.add_argument("--tol", type=float, help="audit tolerance")
        p.add_argument("--angles", type=int, default=1024, metavar="K")
        p.add_argument("--seed", type=int, default=conc.DEFAULT_SEED)
        p.add_argument("--trials", type=int)
        p.add_argument("--degree", type=int, default=12)
        p.add_argument("--eps", type=float, default=0.1)
        p.add_argument("--radius", type=float, default=1.0)
        p.add_argument("--count", type=int, default=50)
        p.add_argument("--point", type=_point, default=(0.0, 0.0), help="translation point x,y")
        p.add_argument("--interval", type=_interval, action="append", dest="intervals",
                       default=[], help="lo:hi, repeatable")
        p.add_argument("--set-out")
        p.add_argument("--format", choices=["csv", "json", "svg"], default="json")
        p.add_argument("--out")
        p.add_argument("--threads", type=int, default=1)
    return parser


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(outcome.columns, outcome.rows)
    if fmt == "svg":
        if outcome.svg is None:
            raise ConfigError("this command has no plot; use --format json or csv")
        return outcome.svg
    return to_json(outcome.report)


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    config = ExperimentConfig(**args)
    try:
        config.validate()
        outcome = COMMANDS[config.command](config)
        text = render(outcome, config.format)
    except ConvergenceError as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if outcome.exit_code == EXIT_AUDIT:
        print("audit failed", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
