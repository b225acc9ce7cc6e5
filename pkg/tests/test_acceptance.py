"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line with its measured value and runtime.
Also runnable directly: python3 tests/test_acceptance.py
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.special import gammainc

sys.path.insert(0, str(Path(__file__).parent))
from oracles import stft_quad  # noqa: E402

from fockbound.concentration import (  # noqa: E402
    jensen_chain,
    lemma1_audit,
    lemma1_lhs,
    lemma2_audit,
    monomial_concentration,
    sparse_disc_audit,
    sparse_disc_construct,
)
from fockbound.geometry import IntervalUnion, disc, measure  # noqa: E402
from fockbound.specfun import reg_lower_gamma, truncated_exp_sum  # noqa: E402
from fockbound.symbols import indicator, random_step_symbol, theorem1_bound, toeplitz_norm  # noqa: E402
from fockbound.timefreq import (  # noqa: E402
    bargmann_transform,
    fock_monomial,
    hermite_eval,
    localization_matrix,
    stft_hermite,
)

SEED = 20261015
_emit = print


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    # let the PASS/FAIL lines through pytest's output capture
    global _emit
    def emit(line):
        with capsys.disabled():
            print("\n" + line, flush=True)
    _emit = emit
    yield
    _emit = print


def _report(number, title, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    _emit(line)
    return ok and within


def _random_union(rng):
    k = int(rng.integers(1, 9))
    edges = np.sort(rng.uniform(0, 60, size=2 * k))
    I = IntervalUnion(tuple(zip(edges[0::2], edges[1::2])))
    if I.length > 50:
        I = IntervalUnion(tuple((a * 50 / I.length, b * 50 / I.length) for a, b in I))
    return I


def test_criterion_01_disc_tightness():
    t0 = time.perf_counter()
    worst = max(abs(monomial_concentration(disc((0, 0), R), 0) - (1 - math.exp(-math.pi * R * R)))
                for R in (0.5, 1.0, 2.0))
    assert _report(1, "disc tightness", worst <= 1e-10, f"max error {worst:.2e}",
                   time.perf_counter() - t0, 1)


def test_criterion_02_toeplitz_norm_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = math.inf
    for _ in range(1000):
        sym = random_step_symbol(rng, max_pieces=6, max_radius=5.0)
        worst = min(worst, theorem1_bound(sym) + 1e-10 - toeplitz_norm(sym))
    tight = max(abs(toeplitz_norm(indicator(0, R)) - theorem1_bound(indicator(0, R)))
                for R in (0.25, 0.5, 1.0, 2.0, 4.0))
    ok = worst >= 0 and tight <= 1e-10
    assert _report(2, "Toeplitz norm bound", ok,
                   f"min slack {worst - 1e-10:.2e}, disc equality gap {tight:.2e}",
                   time.perf_counter() - t0, 30)


def test_criterion_03_gamma_mass_sweep():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    violations = 0
    for _ in range(1000):
        violations += sum(not r.holds for r in lemma1_audit(_random_union(rng), 60, 1e-11))
    closed = max(abs(lemma1_lhs(IntervalUnion(((0, s),)), k) - truncated_exp_sum(k, s))
                 for s in (0.01, 0.5, 1, 3, 10, 30, 50) for k in range(0, 61, 3))
    ok = violations == 0 and closed <= 1e-12
    assert _report(3, "gamma-mass sweep", ok,
                   f"{violations} violations, closed-form error {closed:.2e}",
                   time.perf_counter() - t0, 60)


def test_criterion_04_weighted_mass_sweep():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 4)
    violations = 0
    for _ in range(1000):
        U = _random_union(rng)
        pairs = [(IntervalUnion((iv,)), w) for iv, w in zip(U, rng.uniform(0, 1, size=len(U)))]
        violations += not lemma2_audit(pairs, int(rng.integers(0, 41)), 1e-11).holds
    agree = 0.0
    for _ in range(100):
        U = _random_union(rng)
        p = int(rng.integers(0, 41))
        single = lemma1_audit(U, p)[p]
        ones = lemma2_audit([(IntervalUnion((iv,)), 1.0) for iv in U], p)
        zeros = lemma2_audit([(IntervalUnion((iv,)), 0.0) for iv in U], p)
        agree = max(agree, abs(ones.lhs - single.lhs), abs(ones.rhs - single.rhs),
                    abs(zeros.lhs), abs(zeros.rhs))
    ok = violations == 0 and agree <= 1e-13
    assert _report(4, "weighted gamma-mass sweep", ok,
                   f"{violations} violations, 0/1-weight agreement {agree:.2e}",
                   time.perf_counter() - t0, 60)


def test_criterion_05_jensen_chain():
    t0 = time.perf_counter()
    K = 1024
    failures = []
    for c in (1, 2, 3):
        for R in (0.5, 1.0):
            for n in range(21):
                ch = jensen_chain(disc((c, 0), R), n, (0, 0), K)
                first = ch.per_ray_average <= ch.jensen_middle + 1e-12
                second = ch.jensen_middle <= 1 - math.exp(-measure(disc((c, 0), R))) + 10 / K
                if not (first and second):
                    failures.append((c, R, n))
    assert _report(5, "Jensen chain off-center discs", not failures,
                   f"{len(failures)} link failures of 120", time.perf_counter() - t0, 60)


def test_criterion_06_bargmann_fidelity():
    t0 = time.perf_counter()
    grid = np.linspace(-3, 3, 11)
    points = [complex(x, y) for x in grid for y in grid if abs(complex(x, y)) <= 3]
    worst = 0.0
    for n in range(9):
        f = lambda t, n=n: hermite_eval(n, t)
        for z in points:
            b, _ = bargmann_transform(f, z)
            e = fock_monomial(n, z)
            worst = max(worst, abs(b - e) / abs(e) if e else abs(b))
    assert _report(6, "Bargmann fidelity", worst <= 1e-6,
                   f"max relative error {worst:.2e} over {len(points)} points",
                   time.perf_counter() - t0, 30)


def test_criterion_07_stft_closed_form():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 7)
    points = rng.uniform(-2.5, 2.5, size=25) + 1j * rng.uniform(-2.5, 2.5, size=25)
    worst = 0.0
    for n in range(11):
        f = lambda t, n=n: hermite_eval(n, t)
        for z in points:
            worst = max(worst, abs(stft_hermite(n, z) - stft_quad(f, z)))
    assert _report(7, "STFT closed form", worst <= 1e-8, f"max abs error {worst:.2e}",
                   time.perf_counter() - t0, 30)


def test_criterion_08_localization_matrix():
    t0 = time.perf_counter()
    M = localization_matrix(disc((0, 0), 1), 40)
    off = np.max(np.abs(M.entries - np.diag(np.diag(M.entries))))
    diag_err = np.max(np.abs(np.diag(M.entries).real - gammainc(np.arange(1, 42), math.pi)))
    top_err = abs(M.eigenvalues().max() - (1 - math.exp(-math.pi)))
    L = localization_matrix(disc((2, 0), 1), 10, K=1024)
    qe = L.quad_error
    ev = L.eigenvalues()
    herm = L.hermitian_defect() <= qe
    in_range = ev.min() >= -qe and ev.max() <= 1 - math.exp(-math.pi) + qe
    ok = off < 1e-12 and diag_err <= 1e-12 and top_err <= 1e-10 and herm and in_range
    assert _report(8, "localization matrices", ok,
                   f"D(0,1): off-diag {off:.1e}, diag err {diag_err:.1e}, top err {top_err:.1e}; "
                   f"D(2,1): eig [{ev.min():.2e}, {ev.max():.4f}], quad_error {qe:.1e}",
                   time.perf_counter() - t0, 120)


def test_criterion_09_sparse_construction():
    t0 = time.perf_counter()
    S, cert = sparse_disc_construct(0.1, 1.0, 50)
    audit = sparse_disc_audit(S, cert, trials=200, degree=12)
    measure_ok = abs(measure(S) - 50 * cert.delta) <= 1e-12 * measure(S)
    bound_ok = abs(cert.guaranteed_bound - 0.1) <= 1e-12
    ok = measure_ok and bound_ok and audit.lhs <= 0.1
    assert _report(9, "sparse infinite-measure construction", ok,
                   f"measure {measure(S):.4f} = 50 delta, certificate {cert.guaranteed_bound:.3g}, "
                   f"max ratio {audit.lhs:.4f}", time.perf_counter() - t0, 120)


def test_criterion_10_special_function_identity():
    t0 = time.perf_counter()
    worst = max(abs(reg_lower_gamma(k + 1, x) - truncated_exp_sum(k, x))
                for k in range(101) for x in (0.1, 1.0, 10.0, 100.0))
    assert _report(10, "incomplete gamma identity", worst <= 1e-12, f"max error {worst:.2e}",
                   time.perf_counter() - t0, 1)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
