"""Radial step symbols and the spectrum of their Toeplitz operators.

For a symbol g(|z|) with g = sum_k v_k 1[a_k, b_k), the Toeplitz operator
on the Fock space is diagonal in the normalized monomials with

    lambda_n = sum_k v_k [P(n+1, pi b_k^2) - P(n+1, pi a_k^2)].
"""

import json
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .audit import AuditReport
from .geometry import IntervalUnion, Point, _as_point
from .specfun import one_minus_exp_neg, reg_lower_gamma

Piece = Tuple[float, float, float]


class SymbolFormatError(ValueError):
    """A symbol document does not describe a valid step symbol."""


@dataclass(frozen=True)
class StepRadialSymbol:
    """g(|z - center|) with g piecewise constant on half-open radius intervals."""

    pieces: Tuple[Piece, ...] = ()
    center: Point = (0.0, 0.0)

    def __post_init__(self):
        pieces = []
        for a, b, v in self.pieces:
            a, b, v = float(a), float(b), float(v)
            if not all(math.isfinite(t) for t in (a, b, v)):
                raise ValueError(f"symbol piece must be finite, got ({a}, {b}, {v})")
            if a < 0 or not b > a:
                raise ValueError(f"symbol piece needs 0 <= a < b, got [{a}, {b})")
            pieces.append((a, b, v))
        pieces.sort()
        for (_, b0, _), (a1, _, _) in zip(pieces, pieces[1:]):
            if a1 < b0:
                raise ValueError(f"symbol pieces overlap near r = {a1}")
        object.__setattr__(self, "pieces", tuple(pieces))
        object.__setattr__(self, "center", _as_point(self.center))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for _, _, v in self.pieces)

    @property
    def max_radius(self) -> float:
        return max((b for _, b, _ in self.pieces), default=0.0)

    def scaled(self, c: float) -> "StepRadialSymbol":
        return StepRadialSymbol(tuple((a, b, c * v) for a, b, v in self.pieces), self.center)

    def support(self) -> IntervalUnion:
        return IntervalUnion(tuple((a, b) for a, b, v in self.pieces if v != 0))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for a, b, v in self.pieces:
            out = np.where((r >= a) & (r < b), v, out)
        return out


@dataclass(frozen=True)
class EigenvalueSequence:
    values: np.ndarray
    tail_bound: float

    @property
    def truncation(self) -> int:
        return len(self.values) - 1


def indicator(a: float, b: float, value: float = 1.0, center=(0.0, 0.0)) -> StepRadialSymbol:
    return StepRadialSymbol(((a, b, value),), center)


def step_approximation(profile: Callable, r_max: float, pieces: int,
                       center=(0.0, 0.0)) -> StepRadialSymbol:
    """Sample a bounded radial profile at midpoints of a uniform radius grid."""
    edges = np.linspace(0.0, r_max, pieces + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    vals = np.asarray([profile(r) for r in mids], dtype=float)
    return StepRadialSymbol(tuple(zip(edges[:-1], edges[1:], vals)), center)


def sup_norm(sym: StepRadialSymbol) -> float:
    return max((abs(v) for _, _, v in sym.pieces), default=0.0)


def l1_norm(sym: StepRadialSymbol) -> float:
    return math.fsum(abs(v) * math.pi * (b * b - a * a) for a, b, v in sym.pieces)


def _require_origin(sym):
    if sym.center != (0.0, 0.0):
        raise ValueError(
            "eigenvalues are defined for origin-centered symbols; translate the symbol first"
        )


def _eigenvalues(sym, ns):
    ns = np.asarray(ns, dtype=float)
    out = np.zeros(ns.shape)
    for a, b, v in sym.pieces:
        if v == 0:
            continue
        upper = reg_lower_gamma(ns + 1.0, math.pi * b * b)
        lower = reg_lower_gamma(ns + 1.0, math.pi * a * a) if a > 0 else 0.0
        out = out + v * (upper - lower)
    return out


def radial_eigenvalue(sym: StepRadialSymbol, n: int) -> float:
    """lambda_n = <T_g e_n, e_n> for an origin-centered step symbol."""
    _require_origin(sym)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return float(_eigenvalues(sym, [n])[0])


def _tail(sup, x_max, ns):
    # |lambda_m| <= sup * P(m+1, x_max) and P(m+1, x) decreases in m,
    # so P(N+2, x_max) bounds every m > N
    return sup * reg_lower_gamma(np.asarray(ns, dtype=float) + 2.0, x_max)


def eigenvalue_sequence(sym: StepRadialSymbol, tol: float = 1e-12) -> EigenvalueSequence:
    """Eigenvalues lambda_0..lambda_N with N the first index whose tail bound is <= tol."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _require_origin(sym)
    sup = sup_norm(sym)
    if sup == 0:
        return EigenvalueSequence(np.zeros(1), 0.0)
    x_max = math.pi * sym.max_radius ** 2
    top = max(64, int(2 * x_max) + 64)
    while True:
        ns = np.arange(top)
        tails = _tail(sup, x_max, ns)
        ok = np.nonzero(tails <= tol)[0]
        if ok.size:
            N = int(ok[0])
            break
        top *= 2
    return EigenvalueSequence(_eigenvalues(sym, np.arange(N + 1)), float(tails[N]))


def toeplitz_norm(sym: StepRadialSymbol, tol: float = 1e-12) -> float:
    """Operator norm sup_n |lambda_n|, certified up to the truncation tail."""
    seq = eigenvalue_sequence(sym, tol)
    return float(max(np.max(np.abs(seq.values)), seq.tail_bound))


def theorem1_bound(sym: StepRadialSymbol) -> float:
    """||F||_inf (1 - exp(-||F||_1 / ||F||_inf))."""
    sup = sup_norm(sym)
    if sup == 0:
        raise ValueError("norm bound is degenerate for the zero symbol")
    return sup * one_minus_exp_neg(l1_norm(sym) / sup)


def theorem1_audit(sym: StepRadialSymbol, tol: float = 1e-12) -> AuditReport:
    """Compare the Toeplitz norm with the radial-symbol bound.

    A symbol centered away from the origin has the same norm as its
    origin-centered translate, so the audit runs on that.
    """
    origin_sym = StepRadialSymbol(sym.pieces)
    return AuditReport(
        context="toeplitz norm vs radial-symbol bound",
        lhs=toeplitz_norm(origin_sym, tol),
        rhs=theorem1_bound(sym),
        tolerance=tol,
        params={"center": list(sym.center), "pieces": len(sym.pieces),
                "sup_norm": sup_norm(sym), "l1_norm": l1_norm(sym)},
    )


def random_step_symbol(rng, max_pieces: int = 6, max_radius: float = 5.0) -> StepRadialSymbol:
    """Random origin-centered step symbol with |values| <= 1 and nonzero sup norm."""
    k = int(rng.integers(1, max_pieces + 1))
    edges = np.sort(rng.uniform(0.0, max_radius, size=2 * k))
    vals = rng.uniform(-1.0, 1.0, size=k)
    vals[int(rng.integers(k))] = rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 1.0)
    pieces = [(edges[2 * i], edges[2 * i + 1], vals[i]) for i in range(k)
              if edges[2 * i + 1] > edges[2 * i]]
    return StepRadialSymbol(tuple(pieces))


# --- JSON documents -------------------------------------------------------


def symbol_to_doc(sym: StepRadialSymbol) -> dict:
    return {
        "kind": "step",
        "center": list(sym.center),
        "pieces": [{"a": a, "b": b, "value": v} for a, b, v in sym.pieces],
    }


def symbol_from_doc(doc) -> StepRadialSymbol:
    if not isinstance(doc, dict):
        raise SymbolFormatError("symbol document must be a JSON object")
    if doc.get("kind") != "step":
        raise SymbolFormatError(f"field 'kind': expected 'step', got {doc.get('kind')!r}")
    center = doc.get("center", [0.0, 0.0])
    try:
        center = (float(center[0]), float(center[1]))
    except (TypeError, ValueError, IndexError):
        raise SymbolFormatError("field 'center': must be a point [x, y]") from None
    pieces = doc.get("pieces")
    if not isinstance(pieces, list):
        raise SymbolFormatError("field 'pieces': must be a list")
    parsed = []
    for i, p in enumerate(pieces):
        for key in ("a", "b", "value"):
            if not isinstance(p, dict) or key not in p:
                raise SymbolFormatError(f"pieces[{i}]: missing field '{key}'")
            if not isinstance(p[key], (int, float)) or isinstance(p[key], bool):
                raise SymbolFormatError(f"pieces[{i}].{key}: must be a number")
        parsed.append((p["a"], p["b"], p["value"]))
    try:
        return StepRadialSymbol(tuple(parsed), center)
    except ValueError as exc:
        raise SymbolFormatError(f"pieces: {exc}") from None


def load_symbol(path) -> StepRadialSymbol:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SymbolFormatError(
                f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}"
            ) from None
    return symbol_from_doc(doc)
