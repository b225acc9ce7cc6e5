"""Planar sets in three encodings: origin-style annuli, disc unions and
angular (polar-section) profiles, plus one-dimensional interval unions.

Rays of an angular profile sit at ``theta_j = 2 pi j / K``; the profile is a
piecewise-constant-in-angle approximation, exact for sets that are radial
about the profile center.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

Point = Tuple[float, float]

DEFAULT_ANGLES = 1024


class OverlapError(ValueError):
    """Disc unions must consist of pairwise disjoint discs."""


class SetFormatError(ValueError):
    """A set document does not describe a valid planar set."""


def _as_point(p) -> Point:
    if isinstance(p, complex):
        return (p.real, p.imag)
    x, y = p
    return (float(x), float(y))


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of bounded intervals on [0, inf), stored sorted and disjoint.

    Construction normalizes: overlapping or touching pieces are merged and
    empty pieces dropped, so normalizing twice is the same as once.
    """

    intervals: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        pieces = []
        for lo, hi in self.intervals:
            lo, hi = float(lo), float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"interval bounds must be finite, got ({lo}, {hi})")
            if lo < 0:
                raise ValueError(f"interval lies partly below 0: ({lo}, {hi})")
            if hi > lo:
                pieces.append((lo, hi))
        pieces.sort()
        merged = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    @property
    def length(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for lo, hi in self.intervals:
            cur = lo
            for olo, ohi in other.intervals:
                if ohi <= cur or olo >= hi:
                    continue
                if olo > cur:
                    out.append((cur, olo))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return IntervalUnion(tuple(out))

    def is_disjoint_from(self, other: "IntervalUnion") -> bool:
        for lo, hi in self.intervals:
            for olo, ohi in other.intervals:
                if lo < ohi and olo < hi:
                    return False
        return True

    def endpoints(self):
        """(lo, hi) as two float arrays."""
        if not self.intervals:
            return np.zeros(0), np.zeros(0)
        arr = np.asarray(self.intervals, dtype=float)
        return arr[:, 0], arr[:, 1]


@dataclass(frozen=True)
class Annuli:
    """The set {z : |z - center| in rings}."""

    center: Point = (0.0, 0.0)
    rings: IntervalUnion = field(default_factory=IntervalUnion)

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))


@dataclass(frozen=True)
class DiscUnion:
    """Union of pairwise disjoint open discs (center, radius)."""

    discs: Tuple[Tuple[Point, float], ...] = ()

    def __post_init__(self):
        discs = []
        for c, rho in self.discs:
            rho = float(rho)
            if not rho > 0:
                raise ValueError(f"disc radius must be positive, got {rho}")
            discs.append((_as_point(c), rho))
        centers = np.array([c for c, _ in discs], dtype=float).reshape(-1, 2)
        radii = np.array([r for _, r in discs], dtype=float)
        if len(discs) > 1:
            # sort along x so only neighbours within reach need checking
            order = np.argsort(centers[:, 0])
            c_sorted, r_sorted = centers[order], radii[order]
            reach = r_sorted.max()
            for i in range(len(discs)):
                j = i + 1
                while j < len(discs) and c_sorted[j, 0] - c_sorted[i, 0] < r_sorted[i] + reach:
                    d = math.hypot(*(c_sorted[j] - c_sorted[i]))
                    if d < r_sorted[i] + r_sorted[j]:
                        raise OverlapError(
                            f"discs at {tuple(c_sorted[i])} and {tuple(c_sorted[j])} overlap"
                        )
                    j += 1
        object.__setattr__(self, "discs", tuple(discs))


@dataclass(frozen=True)
class AngularProfile:
    """The set {center + r e^{i theta_j} : r in profiles[j]}, theta_j = 2 pi j / K."""

    center: Point = (0.0, 0.0)
    profiles: Tuple[IntervalUnion, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        profiles = tuple(
            p if isinstance(p, IntervalUnion) else IntervalUnion(tuple(p)) for p in self.profiles
        )
        if not profiles:
            raise ValueError("angular profile needs at least one ray")
        object.__setattr__(self, "profiles", profiles)

    @property
    def K(self) -> int:
        return len(self.profiles)

    @property
    def angles(self):
        return 2.0 * np.pi * np.arange(self.K) / self.K


PlanarSet = Union[Annuli, DiscUnion, AngularProfile]


def disc(center=(0.0, 0.0), radius=1.0) -> Annuli:
    """A single disc as a one-ring annuli set."""
    return Annuli(center, IntervalUnion(((0.0, radius),)))


def measure(s: PlanarSet) -> float:
    if isinstance(s, Annuli):
        return math.pi * math.fsum(hi * hi - lo * lo for lo, hi in s.rings)
    if isinstance(s, DiscUnion):
        return math.pi * math.fsum(rho * rho for _, rho in s.discs)
    if isinstance(s, AngularProfile):
        total = math.fsum(hi * hi - lo * lo for prof in s.profiles for lo, hi in prof)
        return math.pi * total / s.K
    raise TypeError(f"not a planar set: {type(s).__name__}")


def radii_to_t(u: IntervalUnion) -> IntervalUnion:
    """Push radii forward under r -> pi r**2."""
    return IntervalUnion(tuple((math.pi * lo * lo, math.pi * hi * hi) for lo, hi in u))


def translate(s: PlanarSet, v) -> PlanarSet:
    vx, vy = _as_point(v)
    if isinstance(s, Annuli):
        return Annuli((s.center[0] + vx, s.center[1] + vy), s.rings)
    if isinstance(s, DiscUnion):
        return DiscUnion(tuple(((c[0] + vx, c[1] + vy), rho) for c, rho in s.discs))
    if isinstance(s, AngularProfile):
        return AngularProfile((s.center[0] + vx, s.center[1] + vy), s.profiles)
    raise TypeError(f"not a planar set: {type(s).__name__}")


def ray_disc_radii(thetas, center: Point, rho: float):
    """Radial extent [r_lo, r_hi] of each ray from the origin through a disc.

    Solves r**2 - 2 r d cos(theta - phi) + d**2 = rho**2 and clips at r = 0.
    Rays that miss get r_lo == r_hi == 0.
    """
    thetas = np.asarray(thetas, dtype=float)
    d = math.hypot(*center)
    phi = math.atan2(center[1], center[0])
    proj = d * np.cos(thetas - phi)
    disc2 = rho * rho - (d * d - proj * proj)
    # avoid tangent-ray noise: d^2 sin^2 computed as d^2 - proj^2
    hit = disc2 > 0
    root = np.sqrt(np.where(hit, disc2, 0.0))
    lo = np.where(hit, np.maximum(proj - root, 0.0), 0.0)
    hi = np.where(hit, np.maximum(proj + root, 0.0), 0.0)
    return lo, hi


def angular_profile_of(s: PlanarSet, K: int = DEFAULT_ANGLES, origin=(0.0, 0.0)) -> AngularProfile:
    """Polar sections of an annuli or disc-union set, seen from ``origin``."""
    if K < 8:
        raise ValueError(f"need K >= 8 rays, got {K}")
    ox, oy = _as_point(origin)
    thetas = 2.0 * np.pi * np.arange(K) / K
    if isinstance(s, Annuli):
        c = (s.center[0] - ox, s.center[1] - oy)
        if c == (0.0, 0.0):
            return AngularProfile((ox, oy), (s.rings,) * K)
        per_ray = [[] for _ in range(K)]
        for lo_ring, hi_ring in s.rings:
            outer = ray_disc_radii(thetas, c, hi_ring)
            inner = ray_disc_radii(thetas, c, lo_ring) if lo_ring > 0 else None
            for j in range(K):
                piece = IntervalUnion(((outer[0][j], outer[1][j]),))
                if inner is not None:
                    piece = piece.difference(IntervalUnion(((inner[0][j], inner[1][j]),)))
                per_ray[j].extend(piece.intervals)
        return AngularProfile((ox, oy), tuple(IntervalUnion(tuple(p)) for p in per_ray))
    if isinstance(s, DiscUnion):
        per_ray = [[] for _ in range(K)]
        for (cx, cy), rho in s.discs:
            lo, hi = ray_disc_radii(thetas, (cx - ox, cy - oy), rho)
            for j in np.nonzero(hi > lo)[0]:
                per_ray[j].append((lo[j], hi[j]))
        return AngularProfile((ox, oy), tuple(IntervalUnion(tuple(p)) for p in per_ray))
    raise TypeError(f"angular_profile_of expects Annuli or DiscUnion, got {type(s).__name__}")


def profile_measure_convergence(s: PlanarSet, K: int = DEFAULT_ANGLES, origin=(0.0, 0.0)):
    """Measure of the K-ray and 2K-ray profiles and their difference."""
    m1 = measure(angular_profile_of(s, K, origin))
    m2 = measure(angular_profile_of(s, 2 * K, origin))
    return {"K": K, "measure_K": m1, "measure_2K": m2, "difference": abs(m2 - m1)}


def is_origin_radial(s: PlanarSet) -> bool:
    return isinstance(s, Annuli) and s.center == (0.0, 0.0)


# --- JSON documents -------------------------------------------------------


def set_to_doc(s: PlanarSet) -> dict:
    if isinstance(s, Annuli):
        return {
            "kind": "annuli",
            "center": list(s.center),
            "rings": [{"lo": lo, "hi": hi} for lo, hi in s.rings],
        }
    if isinstance(s, DiscUnion):
        return {
            "kind": "discs",
            "discs": [{"center": list(c), "radius": rho} for c, rho in s.discs],
        }
    if isinstance(s, AngularProfile):
        return {
            "kind": "angular_profile",
            "center": list(s.center),
            "K": s.K,
            "profiles": [[[lo, hi] for lo, hi in p] for p in s.profiles],
        }
    raise TypeError(f"not a planar set: {type(s).__name__}")


def _point_field(doc, key, where):
    try:
        p = doc[key]
        if len(p) != 2:
            raise ValueError
        return (float(p[0]), float(p[1]))
    except (KeyError, TypeError, ValueError):
        raise SetFormatError(f"{where}: field '{key}' must be a point [x, y]") from None


def set_from_doc(doc: dict) -> PlanarSet:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SetFormatError("set document: missing field 'kind'")
    kind = doc["kind"]
    try:
        if kind == "annuli":
            center = _point_field(doc, "center", "annuli")
            rings = []
            for i, ring in enumerate(doc.get("rings", [])):
                try:
                    lo, hi = float(ring["lo"]), float(ring["hi"])
                except (KeyError, TypeError, ValueError):
                    raise SetFormatError(f"annuli.rings[{i}]: needs numeric 'lo' and 'hi'") from None
                if not hi > lo:
                    raise SetFormatError(f"annuli.rings[{i}]: hi must exceed lo")
                rings.append((lo, hi))
            return Annuli(center, IntervalUnion(tuple(rings)))
        if kind == "discs":
            discs = []
            for i, d in enumerate(doc.get("discs", [])):
                c = _point_field(d, "center", f"discs[{i}]")
                try:
                    rho = float(d["radius"])
                except (KeyError, TypeError, ValueError):
                    raise SetFormatError(f"discs[{i}]: needs numeric 'radius'") from None
                discs.append((c, rho))
            return DiscUnion(tuple(discs))
        if kind == "angular_profile":
            center = _point_field(doc, "center", "angular_profile")
            profiles = doc.get("profiles")
            K = doc.get("K")
            if not isinstance(profiles, list) or K != len(profiles):
                raise SetFormatError("angular_profile: 'K' must equal the number of profiles")
            parsed = []
            for j, prof in enumerate(profiles):
                try:
                    parsed.append(IntervalUnion(tuple((float(a), float(b)) for a, b in prof)))
                except (TypeError, ValueError) as exc:
                    raise SetFormatError(f"angular_profile.profiles[{j}]: {exc}") from None
            return AngularProfile(center, tuple(parsed))
    except SetFormatError:
        raise
    except ValueError as exc:
        raise SetFormatError(f"{kind}: {exc}") from exc
    raise SetFormatError(f"unknown set kind {kind!r}")


def load_set(path) -> PlanarSet:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SetFormatError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from None
    return set_from_doc(doc)


def dump_set(s: PlanarSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(set_to_doc(s), fh, indent=2)


def random_disjoint_discs(rng, count: int, box: float = 4.0, max_radius: float = 1.0,
                          tries: int = 1000) -> DiscUnion:
    """Rejection-sample up to ``count`` disjoint discs inside [-box, box]**2."""
    discs: list = []
    for _ in range(tries):
        if len(discs) == count:
            break
        c = tuple(rng.uniform(-box, box, size=2))
        rho = rng.uniform(0.05, max_radius)
        if all(math.hypot(c[0] - d[0][0], c[1] - d[0][1]) >= rho + d[1] for d in discs):
            discs.append((c, rho))
    return DiscUnion(tuple(discs))


def interval_union(pairs: Sequence[Tuple[float, float]]) -> IntervalUnion:
    return IntervalUnion(tuple(pairs))
