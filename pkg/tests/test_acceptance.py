"""Acceptance criteria 1-10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import os
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from verlinde_kit import (  # noqa: E402
    RegularityError,
    TorusElement,
    TorusTwisting,
    alcove_points,
    build_irrep,
    build_loop_spinors,
    build_root_datum,
    build_twisted_datum,
    character,
    circle_flow,
    count_regular_orbits,
    dirac_bundle,
    dirac_residuals,
    kostant_cohomology,
    loop_residuals,
    orbit_scan,
    s_matrix,
    scan_grid,
    shift_identity,
    torus_class_census,
    twisted_alcove_points,
    verify_alt1,
    verify_fusion,
)
from verlinde_kit.cartan import weyl_elements  # noqa: E402
from verlinde_kit.dirac import normal_clifford_residual  # noqa: E402
from verlinde_kit.twisted import twisted_alcove_records  # noqa: E402

RESULTS: dict = {}


def record(n, ok, elapsed, budget, detail):
    within = budget is None or elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    limit = f" (budget {budget:g}s)" if budget else ""
    RESULTS[n] = f"criterion {n:2d}: {status}  {elapsed:7.2f}s{limit}  {detail}"
    print(RESULTS[n])
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, budget {budget}s"


def test_criterion_01_rank_concordance():
    t = time.perf_counter()
    rows = []
    for name, levels in [("A1", range(7)), ("A2", range(4))]:
        d = build_root_datum(name)
        for k in levels:
            rows.append((len(alcove_points(d, k)), count_regular_orbits(d, k + d.h_dual), len(s_matrix(d, k).basis)))
    ok = all(a == b == c for a, b, c in rows)
    record(1, ok, time.perf_counter() - t, 1.0, f"{len(rows)} levels, alcove = regular orbits = S basis")


def test_criterion_02_fusion_oracle():
    t = time.perf_counter()
    worst, bad, n = 0.0, 0, 0
    for name, levels in [("A1", range(7)), ("A2", range(5)), ("G2", range(3))]:
        d = build_root_datum(name)
        for k in levels:
            rep = verify_fusion(d, k)
            worst = max(worst, rep["max_residual"])
            bad += len(rep["mismatches"])
            n += rep["pairs"]
    record(2, bad == 0 and worst < 1e-6, time.perf_counter() - t, 30.0, f"{n} pairs, {bad} mismatches, max residual {worst:.1e}")


def test_criterion_03_dirac_identities():
    t = time.perf_counter()
    worst = 0.0
    for name, lams in [("A1", [(0,), (1,), (2,)]), ("A2", [(0, 0), (1, 0)])]:
        d = build_root_datum(name)
        for lam in lams:
            res = dirac_residuals(dirac_bundle(d, lam))
            worst = max(worst, res["D_psi"], res["D_T"], res["D_squared"])
    record(3, worst <= 1e-8, time.perf_counter() - t, 10.0, f"max residual {worst:.1e}")


def test_criterion_04_kernel_localization():
    t = time.perf_counter()
    fails, worst, cases = 0, 0.0, 0
    rng = np.random.default_rng(4)
    for name, lam in [("A1", (0,)), ("A1", (1,)), ("A2", (0, 0)), ("A2", (1, 0))]:
        d = build_root_datum(name)
        b = dirac_bundle(d, lam)
        fails += len(orbit_scan(b, scan_grid(b, 200, seed=cases)).localization_failures(1e-6))
        for w in weyl_elements(d):
            mu = b.torus_point(w.apply(b.shifted))
            nu = np.zeros(b.frame.dim)
            nu[: d.rank] = 1e-3 * rng.normal(size=d.rank)
            worst = max(worst, normal_clifford_residual(b, mu, nu))
        cases += 1
    record(4, fails == 0 and worst < 1e-7, time.perf_counter() - t, None,
           f"{cases} cases x 200 points, {fails} failures, D_(mu+nu) - i psi(nu) on kernel {worst:.1e}")


def _oracle_weights(name, lam):
    v = tuple(-c - 1 for c in lam)
    return sorted(tuple(int(x) + 1 for x in oracles.apply(m, v)) for m, _ in oracles.weyl_group(name))


def test_criterion_05_kostant():
    t = time.perf_counter()
    ok = True
    for name, lam, dims in [("A1", (0,), (1, 1)), ("A1", (1,), (1, 1)), ("A2", (0, 0), (1, 2, 2, 1)), ("A2", (1, 0), (1, 2, 2, 1))]:
        rep = kostant_cohomology(build_irrep(build_root_datum(name), lam))
        ok &= rep.dims == dims and rep.matches and sorted(w for _, w in rep.weights) == _oracle_weights(name, lam)
    record(5, ok, time.perf_counter() - t, None, "degree dims and harmonic weights w(-lam-rho)+rho")


def test_criterion_06_decomposition():
    t = time.perf_counter()
    worst = 0.0
    for name, lams in [("A1", [(0,), (1,)]), ("A2", [(0, 0), (1, 0)])]:
        for lam in lams:
            worst = max(worst, max(verify_alt1(dirac_bundle(build_root_datum(name), lam)).values()))
    record(6, worst <= 1e-8, time.perf_counter() - t, None, f"max assembly residual {worst:.1e}")


def test_criterion_07_truncated_loop():
    t = time.perf_counter()
    loop = build_loop_spinors(build_root_datum("A1"), 2)
    res = loop_residuals(loop)
    worst = max(res["central"], res["current"], res["D_psi"], res["D_T"])
    record(7, worst <= 1e-8 and loop.dim <= 256, time.perf_counter() - t, 60.0, f"dim {loop.dim}, max residual {worst:.1e}")


def test_criterion_08_character():
    t = time.perf_counter()
    d = build_root_datum("A1")
    ok = True
    for lam in (0, 1):
        got = [c.real for c in character(d, 1, (lam,), TorusElement.identity(1), 8).coefficients()]
        ok &= [int(round(c)) for c in got] == oracles.affine_freudenthal_a1(1, lam, 8)
        ok &= all(abs(c - round(c)) < 1e-9 for c in got)
    rng = np.random.default_rng(8)
    worst = 0.0
    w = weyl_elements(d)[1]
    for _ in range(3):
        g = TorusElement((Fraction(int(rng.integers(1, 1000)), 1000),))
        for lam in (0, 1):
            worst = max(worst, character(d, 1, (lam,), g, 8).max_distance(character(d, 1, (lam,), g.weyl_image(w.matrix), 8)))
    record(8, ok and worst < 1e-9, time.perf_counter() - t, None, f"graded dims exact to q^8, W-invariance {worst:.1e}")


def test_criterion_09_spectral_flow():
    t = time.perf_counter()
    ok = circle_flow([0, 1]).net_flow == 1
    rng = np.random.default_rng(9)
    checked = 0
    while checked < 10:
        n = int(rng.integers(1, 3))
        kappa = rng.integers(-5, 6, size=(n, n))
        tw = TorusTwisting(n, kappa.tolist())
        if not tw.regular:
            continue
        ok &= torus_class_census(tw) == abs(round(np.linalg.det(kappa)))
        checked += 1
    try:
        torus_class_census(TorusTwisting(2, [[2, 4], [1, 2]]))
        ok = False
    except RegularityError:
        pass
    record(9, ok, time.perf_counter() - t, None, "unit loop 1, 10 censuses = |det kappa|, singular rejected")


def test_criterion_10_twisted():
    t = time.perf_counter()
    ok = True
    for base, r in [("A2", 2), ("A3", 2), ("D4", 3)]:
        lhs, rhs = shift_identity(build_twisted_datum(base, r))
        ok &= isinstance(lhs, Fraction) and lhs == rhs == Fraction(build_root_datum(base).h_dual, r)
    tw = build_twisted_datum("A2", 2)
    for k in range(6):
        ok &= all(rec["spin_parity"] == k % 2 for rec in twisted_alcove_records(tw, k))
        ok &= len(twisted_alcove_points(tw, k)) == oracles.comark_count((1, 2), k)
    record(10, ok, time.perf_counter() - t, None, "shift identity exact, A2 parity rule enforced")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
