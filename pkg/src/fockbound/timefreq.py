"""Hermite functions, Gabor transforms with the Gaussian window, the Bargmann
transform, and truncated matrices of time-frequency localization operators.

Conventions: z = x + i xi, (pi(z) f)(t) = exp(2 pi i xi t) f(t - x),
V f(z) = <f, pi(z) h_0>, h_0(t) = 2^{1/4} exp(-pi t^2).
"""

import json
import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .audit import AuditReport
from .concentration import (
    fock_gram,
    monomial_concentration,
    profile_about,
)
from .geometry import AngularProfile, Annuli, DiscUnion, IntervalUnion, PlanarSet, measure, set_to_doc
from .specfun import ConvergenceError, log_factorial, one_minus_exp_neg
from .symbols import StepRadialSymbol, theorem1_bound

MAX_HERMITE = 200
MAX_MATRIX_N = 60
MIN_MATRIX_K = 256

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_FOURTH_ROOT_2 = 2.0 ** 0.25


def hermite_all(N: int, t) -> np.ndarray:
    """Rows h_0(t)..h_N(t), by the three-term recurrence

        h_{n+1} = sqrt(2/(n+1)) u h_n - sqrt(n/(n+1)) h_{n-1},   u = sqrt(2 pi) t.
    """
    if not 0 <= N <= MAX_HERMITE:
        raise ValueError(f"Hermite index must lie in [0, {MAX_HERMITE}], got {N}")
    t = np.asarray(t, dtype=float)
    u = _SQRT_2PI * t
    with np.errstate(under="ignore"):
        h0 = _FOURTH_ROOT_2 * np.exp(-math.pi * t * t)
    out = np.empty((N + 1,) + t.shape)
    out[0] = h0
    if N >= 1:
        out[1] = math.sqrt(2.0) * u * h0
    for n in range(1, N):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * u * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_eval(n: int, t):
    """Orthonormal Hermite function h_n at t (0 where the Gaussian underflows)."""
    vals = hermite_all(n, t)[n]
    return float(vals) if vals.ndim == 0 else vals


@dataclass(frozen=True)
class HermiteBasis:
    max_index: int
    t_min: float = -8.0
    t_max: float = 8.0
    samples: int = 4001

    @property
    def grid(self):
        return np.linspace(self.t_min, self.t_max, self.samples)

    def evaluate(self) -> np.ndarray:
        return hermite_all(self.max_index, self.grid)

    def gram(self) -> np.ndarray:
        """Trapezoid Gram matrix on the grid; close to identity."""
        H = self.evaluate()
        dt = (self.t_max - self.t_min) / (self.samples - 1)
        w = np.full(self.samples, dt)
        w[[0, -1]] *= 0.5
        return (H * w) @ H.T


def stft_hermite(n: int, z) -> complex:
    """<h_n, pi(z) h_0> = exp(-i pi x xi - pi |z|^2 / 2) sqrt(pi^n / n!) conj(z)^n."""
    if not 0 <= n <= MAX_HERMITE:
        raise ValueError(f"Hermite index must lie in [0, {MAX_HERMITE}], got {n}")
    z = complex(z)
    x, xi = z.real, z.imag
    r = abs(z)
    if r == 0:
        return complex(1.0 if n == 0 else 0.0)
    log_mag = n * math.log(r) + 0.5 * n * math.log(math.pi) - 0.5 * log_factorial(n) - 0.5 * math.pi * r * r
    phase = -math.pi * x * xi - n * math.atan2(xi, x)
    return math.exp(log_mag) * complex(math.cos(phase), math.sin(phase))


def fock_monomial(n: int, z) -> complex:
    """e_n(z) = sqrt(pi^n / n!) z^n."""
    z = complex(z)
    if z == 0:
        return complex(1.0 if n == 0 else 0.0)
    mag = math.exp(n * math.log(abs(z)) + 0.5 * n * math.log(math.pi) - 0.5 * log_factorial(n))
    return mag * complex(math.cos(n * math.atan2(z.imag, z.real)), math.sin(n * math.atan2(z.imag, z.real)))


@lru_cache(maxsize=16)
def _nodes(n):
    return leggauss(n)


def _gauss_legendre(fn, T, nodes):
    x, w = _nodes(nodes)
    vals = fn(T * x)
    return T * np.sum(w * vals), T * np.sum(w * np.abs(vals))


def _refine(fn, T, nodes, rtol, atol, max_nodes):
    # tolerance is relative to the integral of |integrand|, the round-off floor
    coarse, _ = _gauss_legendre(fn, T, nodes)
    while True:
        fine, scale = _gauss_legendre(fn, T, 2 * nodes)
        err = abs(fine - coarse)
        if err <= max(atol, rtol * scale):
            return complex(fine), float(err)
        nodes *= 2
        if 2 * nodes > max_nodes:
            raise ConvergenceError(f"Gauss-Legendre did not converge: err={err:.3g}")
        coarse = fine


def bargmann_transform(f: Callable, z, T: float = 8.0, nodes: int = 128,
                       rtol: float = 1e-12, atol: float = 1e-13,
                       max_nodes: int = 4096) -> Tuple[complex, float]:
    """(Bf)(z) = 2^{1/4} int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt on [-T, T].

    Returns (value, error estimate); the estimate is the change under node doubling.
    """
    z = complex(z)
    if abs(z) > 5.0:
        raise ValueError("bargmann_transform is only certified for |z| <= 5")

    def integrand(t):
        return _FOURTH_ROOT_2 * f(t) * np.exp(2 * math.pi * t * z - math.pi * t * t - 0.5 * math.pi * z * z)

    return _refine(integrand, T, nodes, rtol, atol, max_nodes)


def gabor_transform(f: Callable, z, T: float = 8.0, nodes: int = 128,
                    rtol: float = 1e-12, atol: float = 1e-14,
                    max_nodes: int = 4096) -> Tuple[complex, float]:
    """V f(z) = int f(t) exp(-2 pi i xi t) h_0(t - x) dt by Gauss-Legendre on [-T, T]."""
    z = complex(z)
    x, xi = z.real, z.imag

    def integrand(t):
        return f(t) * np.exp(-2j * math.pi * xi * t) * hermite_all(0, t - x)[0]

    return _refine(integrand, T, nodes, rtol, atol, max_nodes)


# --- localization matrices -------------------------------------------------


@dataclass
class LocalizationMatrix:
    """entries[n, m] = <H_set h_n, h_m> for n, m <= N."""

    entries: np.ndarray
    set: PlanarSet
    K: int
    quad_error: float

    @property
    def N(self) -> int:
        return self.entries.shape[0] - 1

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "set": set_to_doc(self.set),
            "entries_re": self.entries.real.tolist(),
            "entries_im": self.entries.imag.tolist(),
            "quad_error": self.quad_error,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def diagonal_csv(self) -> str:
        lines = ["n,diagonal"]
        lines += [f"{n},{v.real:.17g}" for n, v in enumerate(np.diag(self.entries))]
        return "\n".join(lines) + "\n"


def as_origin_radial(s: PlanarSet):
    """Return an origin-centered Annuli equivalent of s, or None."""
    if isinstance(s, Annuli) and s.center == (0.0, 0.0):
        return s
    if isinstance(s, DiscUnion) and len(s.discs) == 1 and s.discs[0][0] == (0.0, 0.0):
        return Annuli((0.0, 0.0), IntervalUnion(((0.0, s.discs[0][1]),)))
    if (isinstance(s, AngularProfile) and s.center == (0.0, 0.0)
            and all(p == s.profiles[0] for p in s.profiles)):
        return Annuli((0.0, 0.0), s.profiles[0])
    return None


def localization_matrix(s: PlanarSet, N: int, K: int = 1024) -> LocalizationMatrix:
    """Truncated Hermite-basis matrix of the localization operator with symbol 1_s.

    Computed on the Fock side: <H h_n, h_m> = int_s conj(z)^n z^m ... dlambda,
    i.e. the complex conjugate of the Fock Gram matrix of the set.  Sets that are
    radial about the origin give an exactly diagonal matrix.  Otherwise entries
    use the 2K-ray angular rule and quad_error is the largest entry change
    between the K-ray and 2K-ray rules (for a given angular profile: between
    its own rays and every other ray).
    """
    if not 0 <= N <= MAX_MATRIX_N:
        raise ValueError(f"N must lie in [0, {MAX_MATRIX_N}], got {N}")
    if K < MIN_MATRIX_K:
        raise ValueError(f"K must be >= {MIN_MATRIX_K}, got {K}")
    radial = as_origin_radial(s)
    if radial is not None:
        diag = [monomial_concentration(radial, n) for n in range(N + 1)]
        return LocalizationMatrix(np.diag(np.asarray(diag, dtype=complex)), s, K, 0.0)
    if isinstance(s, AngularProfile):
        if s.center != (0.0, 0.0):
            raise ValueError("angular profiles must be centered at the origin here")
        M = fock_gram(s, N).conj()
        if s.K % 2:
            raise ValueError("angular profiles need an even ray count for the error estimate")
        half = fock_gram(AngularProfile(s.center, s.profiles[::2]), N).conj()
        return LocalizationMatrix(M, s, s.K, float(np.max(np.abs(M - half))))
    coarse = fock_gram(profile_about(s, (0.0, 0.0), K), N).conj()
    fine = fock_gram(profile_about(s, (0.0, 0.0), 2 * K), N).conj()
    return LocalizationMatrix(fine, s, K, float(np.max(np.abs(fine - coarse))))


def localization_norm_bound(sym: StepRadialSymbol) -> float:
    """Norm bound for a localization operator with a radial step symbol."""
    return theorem1_bound(sym)


# --- convex combinations of shifted Hermite functions ---------------------


def _polar_nodes(prof: AngularProfile, radial_nodes: int, panel: float):
    """Quadrature nodes (z, weight) for dA over the profile set."""
    xg, wg = _nodes(radial_nodes)
    zs, ws = [], []
    dtheta = 2.0 * math.pi / prof.K
    for theta, piece in zip(prof.angles, prof.profiles):
        direction = complex(math.cos(theta), math.sin(theta))
        for lo, hi in piece:
            panels = max(1, int(math.ceil((hi - lo) / panel)))
            edges = np.linspace(lo, hi, panels + 1)
            for a, b in zip(edges[:-1], edges[1:]):
                r = 0.5 * (b - a) * xg + 0.5 * (a + b)
                zs.append(r * direction)
                ws.append(0.5 * (b - a) * wg * r * dtheta)
    if not zs:
        return np.zeros(0, complex), np.zeros(0)
    return np.concatenate(zs), np.concatenate(ws)


def _shifted_stft(n: int, zj: complex, z: np.ndarray) -> np.ndarray:
    """<pi(z_j) h_n, pi(z) h_0> = exp(-2 pi i x_j (xi - xi_j)) V h_n(z - z_j)."""
    w = z - zj
    r = np.abs(w)
    with np.errstate(divide="ignore"):
        log_mag = (n * np.log(r) if n else 0.0) + 0.5 * n * math.log(math.pi) \
            - 0.5 * log_factorial(n) - 0.5 * math.pi * r * r
    vals = np.exp(log_mag) * np.exp(-1j * (math.pi * w.real * w.imag + n * np.angle(w)))
    return vals * np.exp(-2j * math.pi * zj.real * (z.imag - zj.imag))


def m1_finite_combination_check(shifts: Sequence[Tuple[complex, complex]], n: int, s: PlanarSet,
                                K: int = 1024, radial_nodes: int = 24,
                                panel: float = 0.5) -> AuditReport:
    """Concentration of V f on s for f = sum_j alpha_j pi(z_j) h_n with sum |alpha_j| <= 1.

    lhs is (int_s |V f|^2 dA)^{1/2}; the triangle-inequality majorant
    sum_j |alpha_j| (int_{s - z_j} |V h_n|^2 dA)^{1/2} is computed with the same
    quadrature so that the first link of the chain is exact.
    """
    shifts = [(complex(a), complex(z)) for a, z in shifts]
    budget = math.fsum(abs(a) for a, _ in shifts)
    if budget > 1.0 + 1e-12:
        raise ValueError(f"coefficient budget sum |alpha_j| = {budget} exceeds 1")
    area = measure(s)
    if not math.isfinite(area):
        raise ValueError("set must have finite measure")
    prof = profile_about(s, (0.0, 0.0), K)
    z, w = _polar_nodes(prof, radial_nodes, panel)
    terms = [alpha * _shifted_stft(n, zj, z) for alpha, zj in shifts]
    total = np.sum(terms, axis=0) if terms else np.zeros_like(z)
    lhs = math.sqrt(max(float(np.sum(w * np.abs(total) ** 2)), 0.0))
    pieces = [abs(alpha) * math.sqrt(float(np.sum(w * np.abs(_shifted_stft(n, zj, z)) ** 2)))
              for alpha, zj in shifts]
    majorant = math.fsum(pieces)
    rhs = math.sqrt(one_minus_exp_neg(area))
    return AuditReport(
        context=f"finite combination of shifted h_{n}",
        lhs=lhs,
        rhs=rhs,
        tolerance=10.0 / prof.K,
        params={"n": n, "K": prof.K, "budget": budget, "majorant": majorant,
                "triangle_link": lhs <= majorant + 1e-12,
                "majorant_link": majorant <= rhs + 10.0 / prof.K},
    )
