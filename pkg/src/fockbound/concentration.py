"""Gaussian-weighted concentration of monomials, kernels and Fock polynomials
on planar sets, and the inequality audits built on top.

Every radial integral reduces to incomplete-gamma masses: under t = pi r^2,
the mass of |e_n|^2 dlambda on a radial section I is the Gamma(n+1) mass of
the pushed-forward interval union.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from .audit import AuditReport
from .geometry import (
    AngularProfile,
    Annuli,
    DiscUnion,
    IntervalUnion,
    PlanarSet,
    angular_profile_of,
    measure,
    radii_to_t,
    translate,
)
from .specfun import one_minus_exp_neg, reg_lower_gamma

DEFAULT_SEED = 0
LEMMA_TOL = 1e-11


def _gamma_mass(I: IntervalUnion, shape) -> float:
    lo, hi = I.endpoints()
    if lo.size == 0:
        return 0.0
    upper = reg_lower_gamma(shape, hi)
    lower = reg_lower_gamma(shape, lo)
    return math.fsum(np.atleast_1d(upper - lower))


def lemma1_lhs(I: IntervalUnion, n: int) -> float:
    """(1/n!) * integral over I of s^n e^{-s} ds."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _gamma_mass(I, n + 1.0)


def lemma1_audit(I: IntervalUnion, n_max: int, tol: float = LEMMA_TOL) -> List[AuditReport]:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rhs = one_minus_exp_neg(I.length)
    ns = np.arange(n_max + 1, dtype=float)
    lo, hi = I.endpoints()
    if lo.size:
        masses = (reg_lower_gamma(ns[:, None] + 1.0, hi[None, :])
                  - reg_lower_gamma(ns[:, None] + 1.0, lo[None, :])).sum(axis=1)
    else:
        masses = np.zeros(n_max + 1)
    return [
        AuditReport(f"single-interval-union bound, n={n}", float(m), rhs, tol,
                    params={"n": n, "measure": I.length, "pieces": len(I)})
        for n, m in enumerate(masses)
    ]


def lemma2_audit(pairs: Sequence[Tuple[IntervalUnion, float]], p: int,
                 tol: float = LEMMA_TOL) -> AuditReport:
    """Weighted version: sum_k w_k Gamma(p+1)-mass(I_k) <= 1 - exp(-sum_k w_k |I_k|)."""
    pairs = list(pairs)
    for k, (I, w) in enumerate(pairs):
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weight {k} must lie in [0, 1], got {w}")
        for j in range(k):
            if not I.is_disjoint_from(pairs[j][0]):
                raise ValueError(f"interval sets {j} and {k} are not disjoint")
    lhs = math.fsum(w * lemma1_lhs(I, p) for I, w in pairs if w != 0)
    rhs = one_minus_exp_neg(math.fsum(w * I.length for I, w in pairs))
    return AuditReport(f"weighted interval bound, p={p}", lhs, rhs, tol,
                       params={"p": p, "weights": [w for _, w in pairs]})


def monomial_concentration(s: Annuli, n: int) -> float:
    """Integral of |e_n|^2 dlambda over an origin-centered annuli set."""
    if not isinstance(s, Annuli) or s.center != (0.0, 0.0):
        raise ValueError("monomial_concentration needs an origin-centered annuli set")
    return lemma1_lhs(radii_to_t(s.rings), n)


# --- per-ray machinery ------------------------------------------------------


def _flatten_profile(prof: AngularProfile):
    ray, lo, hi = [], [], []
    for j, p in enumerate(prof.profiles):
        for a, b in p:
            ray.append(j)
            lo.append(a)
            hi.append(b)
    return np.asarray(ray, dtype=int), np.asarray(lo, float), np.asarray(hi, float)


def ray_gamma_masses(prof: AngularProfile, shapes) -> np.ndarray:
    """Array [len(shapes), K]: Gamma(shape) mass of each ray's t-section."""
    shapes = np.atleast_1d(np.asarray(shapes, dtype=float))
    out = np.zeros((shapes.size, prof.K))
    ray, lo, hi = _flatten_profile(prof)
    if ray.size == 0:
        return out
    t_lo, t_hi = math.pi * lo * lo, math.pi * hi * hi
    diff = reg_lower_gamma(shapes[:, None], t_hi[None, :]) - reg_lower_gamma(shapes[:, None], t_lo[None, :])
    np.add.at(out.T, ray, diff.T)
    return out


def ray_t_lengths(prof: AngularProfile) -> np.ndarray:
    """|I_theta| = pi * sum (hi^2 - lo^2) per ray."""
    out = np.zeros(prof.K)
    ray, lo, hi = _flatten_profile(prof)
    np.add.at(out, ray, math.pi * (hi * hi - lo * lo))
    return out


def profile_about(s: PlanarSet, a=(0.0, 0.0), K: int = 1024) -> AngularProfile:
    """Angular profile of s - a around the origin."""
    ax, ay = (a.real, a.imag) if isinstance(a, complex) else a
    shifted = translate(s, (-ax, -ay))
    if isinstance(shifted, AngularProfile):
        if shifted.center != (0.0, 0.0):
            raise ValueError("an angular profile can only be evaluated about its own center")
        return shifted
    return angular_profile_of(shifted, K)


@dataclass(frozen=True)
class JensenChain:
    """per_ray_average <= jensen_middle <= bound (up to angular discretization)."""

    per_ray_average: float
    jensen_middle: float
    bound: float
    profile_measure: float
    K: int

    def per_ray_link(self, tol: float = 1e-12) -> bool:
        return self.per_ray_average <= self.jensen_middle + tol

    def jensen_link(self, tol: Optional[float] = None) -> bool:
        tol = 10.0 / self.K if tol is None else tol
        return self.jensen_middle <= self.bound + tol


def jensen_chain(s: PlanarSet, n: int, a=(0.0, 0.0), K: int = 1024) -> JensenChain:
    if K < 8:
        raise ValueError(f"need K >= 8 rays, got {K}")
    prof = profile_about(s, a, K)
    per_ray = ray_gamma_masses(prof, [n + 1.0])[0]
    lengths = ray_t_lengths(prof)
    return JensenChain(
        per_ray_average=math.fsum(per_ray) / prof.K,
        jensen_middle=math.fsum(one_minus_exp_neg(lengths)) / prof.K,
        bound=one_minus_exp_neg(measure(s)),
        profile_measure=math.fsum(lengths) / prof.K,
        K=prof.K,
    )


def translated_monomial_concentration(s: PlanarSet, n: int, a=(0.0, 0.0),
                                      K: int = 1024) -> AuditReport:
    """Concentration of the translated monomial T_a e_n on s."""
    chain = jensen_chain(s, n, a, K)
    a_pt = [a.real, a.imag] if isinstance(a, complex) else list(a)
    return AuditReport(
        context=f"translated monomial concentration, n={n}",
        lhs=chain.per_ray_average,
        rhs=chain.bound,
        tolerance=10.0 / chain.K,
        params={
            "n": n, "a": a_pt, "K": chain.K,
            "jensen_middle": chain.jensen_middle,
            "profile_measure": chain.profile_measure,
            "per_ray_link": chain.per_ray_link(),
            "jensen_link": chain.jensen_link(),
        },
    )


def kernel_concentration(w, s: PlanarSet, K: int = 1024) -> AuditReport:
    """Concentration of the normalized reproducing kernel at w on s."""
    report = translated_monomial_concentration(s, 0, w, K)
    report.context = "normalized kernel concentration"
    return report


# --- sparse disc sets with small concentration ----------------------------


@dataclass(frozen=True)
class SparseDiscCertificate:
    eps: float
    R: float
    C_R: float
    delta: float
    rho: float
    spacing: float
    count: int

    @property
    def guaranteed_bound(self) -> float:
        return self.delta / self.C_R

    def to_dict(self) -> dict:
        return {"eps": self.eps, "R": self.R, "C_R": self.C_R, "delta": self.delta,
                "rho": self.rho, "spacing": self.spacing, "count": self.count,
                "guaranteed_bound": self.guaranteed_bound}


def sparse_disc_construct(eps: float, R: float = 1.0, count: int = 50):
    """Discs of area eps * C_R spaced so any disc of radius R meets at most one.

    C_R = 1 - exp(-pi R^2) is the Gaussian mass of D(0, R).  Centers sit on the
    real axis at multiples of the spacing, starting at the origin.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    C_R = one_minus_exp_neg(math.pi * R * R)
    delta = eps * C_R
    rho = math.sqrt(delta / math.pi)
    spacing = 2.0 * R + 2.0 * rho + 1.0
    discs = DiscUnion(tuple(((j * spacing, 0.0), rho) for j in range(count)))
    return discs, SparseDiscCertificate(eps, R, C_R, delta, rho, spacing, count)


def fock_gram(prof: AngularProfile, degree: int) -> np.ndarray:
    """G[p, q] = integral over the profile set of e_p conj(e_q) dlambda, p, q <= degree.

    Polar form: G[p, q] = c_pq * avg_theta e^{i(p-q)theta} * Gamma((p+q)/2 + 1)-mass
    of the t-section, with c_pq = Gamma((p+q)/2+1) / sqrt(p! q!) <= 1.
    """
    if prof.center != (0.0, 0.0):
        raise ValueError("fock_gram needs a profile centered at the origin")
    N = degree
    ks = np.arange(2 * N + 1)
    D = ray_gamma_masses(prof, ks / 2.0 + 1.0)
    ds = np.arange(-N, N + 1)
    phases = np.exp(1j * np.outer(prof.angles, ds))
    F = D @ phases / prof.K
    p = np.arange(N + 1)
    P, Q = np.meshgrid(p, p, indexing="ij")
    coef = np.exp(gammaln((P + Q) / 2.0 + 1.0) - 0.5 * (gammaln(P + 1.0) + gammaln(Q + 1.0)))
    G = coef * F[P + Q, P - Q + N]
    # enforce exact Hermitian symmetry; the two triangles agree up to round-off
    return 0.5 * (G + G.conj().T)


def polynomial_concentration(gram: np.ndarray, coeffs) -> float:
    """Integral of |sum_p b_p e_p|^2 dlambda over the set behind ``gram``, for unit b."""
    b = np.asarray(coeffs, dtype=complex)
    norm = np.linalg.norm(b)
    if norm == 0:
        raise ValueError("polynomial must be nonzero (unit-norm precondition)")
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"coefficients must have unit norm, got {norm}")
    return float(np.real(b @ gram @ b.conj()))


def random_unit_coefficients(rng, degree: int) -> np.ndarray:
    b = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return b / np.linalg.norm(b)


def sparse_disc_audit(s: DiscUnion, certificate: Optional[SparseDiscCertificate],
                      eps: Optional[float] = None, trials: int = 200, degree: int = 12,
                      seed: int = DEFAULT_SEED, K: int = 4096) -> AuditReport:
    """Largest concentration of random unit Fock polynomials on the disc set."""
    if certificate is None:
        raise ValueError("sparse_disc_audit needs the separation certificate")
    if not isinstance(s, DiscUnion) or len(s.discs) != certificate.count:
        raise ValueError("set does not match its certificate")
    if any(abs(rho - certificate.rho) > 1e-12 for _, rho in s.discs):
        raise ValueError("disc radii do not match the certificate")
    eps = certificate.eps if eps is None else eps
    gram = fock_gram(angular_profile_of(s, K), degree)
    rng = np.random.default_rng(seed)
    ratios = [polynomial_concentration(gram, random_unit_coefficients(rng, degree))
              for _ in range(trials)]
    worst = float(np.linalg.eigvalsh(gram)[-1])
    return AuditReport(
        context="sparse disc set concentration",
        lhs=max(ratios),
        rhs=eps,
        seed=seed,
        params={"trials": trials, "degree": degree, "K": K,
                "gram_top_eigenvalue": worst, "certificate": certificate.to_dict()},
    )
