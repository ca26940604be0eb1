import numpy as np
import pytest

import oracles
from verlinde_kit import (
    DomainError,
    build_irrep,
    build_loop_spinors,
    build_root_datum,
    dirac_bundle,
    dirac_residuals,
    family_at,
    kostant_cohomology,
    loop_residuals,
    orbit_distance,
    orbit_scan,
    scan_grid,
    thom_deformation,
    verify_alt1,
)
from verlinde_kit.cartan import weyl_elements
from verlinde_kit.dirac import family_square_residual, half_kernel, normal_clifford_residual

CASES = [("A1", (0,)), ("A1", (1,)), ("A1", (2,)), ("A2", (0, 0)), ("A2", (1, 0)), ("B2", (0, 0)), ("G2", (0, 0))]


@pytest.mark.parametrize("name,lam", CASES)
def test_dirac_relations(name, lam):
    b = dirac_bundle(build_root_datum(name), lam)
    res = dirac_residuals(b)
    assert max(res.values()) < 1e-8, res


def test_d_squared_value():
    # |lam + rho|^2 with (omega|omega) = 1/2: lam = omega gives 2, lam = 0 gives 1/2
    for lam, value in [((1,), 2.0), ((0,), 0.5), ((2,), 4.5)]:
        b = dirac_bundle(build_root_datum("A1"), lam)
        assert np.allclose(np.linalg.eigvals(b.D @ b.D), -value)


@pytest.mark.parametrize("name,lam", CASES[:5])
def test_family_square(name, lam):
    b = dirac_bundle(build_root_datum(name), lam)
    rng = np.random.default_rng(3)
    for _ in range(4):
        assert family_square_residual(b, rng.normal(size=b.frame.dim)) < 1e-9


@pytest.mark.parametrize("name,lam", [("A1", (0,)), ("A1", (1,)), ("A2", (1, 0))])
def test_kernel_on_weyl_images(name, lam):
    d = build_root_datum(name)
    b = dirac_bundle(d, lam)
    for w in weyl_elements(d):
        mu = b.torus_point(w.apply(b.shifted))
        assert half_kernel(b, mu)[0] == 1
        assert family_at(b, mu).kernel_dim > 0
        assert orbit_distance(b, mu) < 1e-8


def test_full_kernel_dimension_a1():
    b = dirac_bundle(build_root_datum("A1"), (1,))
    assert family_at(b, b.torus_point(b.shifted)).kernel_dim == 2
    assert family_at(b, b.torus_point((3,))).kernel_dim == 0


@pytest.mark.parametrize("name,lam", [("A1", (0,)), ("A1", (2,)), ("A2", (0, 0)), ("A2", (1, 0))])
def test_orbit_scan_localizes(name, lam):
    b = dirac_bundle(build_root_datum(name), lam)
    res = orbit_scan(b, scan_grid(b, 200, seed=11))
    assert not res.localization_failures(1e-6)
    assert sum(s.kernel_dim > 0 for s in res.samples) == 100


def test_orbit_scan_threads_match(a2):
    b = dirac_bundle(a2, (1, 0))
    grid = scan_grid(b, 24, seed=2)
    assert orbit_scan(b, grid, jobs=3).samples == orbit_scan(b, grid, jobs=1).samples


@pytest.mark.parametrize("name,lam", [("A1", (1,)), ("A2", (1, 0))])
def test_normal_clifford(name, lam):
    d = build_root_datum(name)
    b = dirac_bundle(d, lam)
    mu = b.torus_point(b.shifted)
    rng = np.random.default_rng(5)
    for _ in range(3):
        nu = np.zeros(b.frame.dim)
        nu[: d.rank] = 1e-3 * rng.normal(size=d.rank)
        assert normal_clifford_residual(b, mu, nu) < 1e-7


def test_normal_clifford_requires_kernel(a1):
    b = dirac_bundle(a1, (0,))
    with pytest.raises(DomainError):
        normal_clifford_residual(b, b.torus_point((3,)), np.zeros(3))


def test_thom(a2):
    b = dirac_bundle(a2, (1, 0))
    off = thom_deformation(b, b.torus_point(tuple(2 * c for c in b.shifted)))
    assert off["invertible"]
    on = thom_deformation(b, b.torus_point(b.shifted))
    assert not on["steps"][-1]["invertible"]
    assert all(r["invertible"] for r in on["steps"][:-1])
    with pytest.raises(DomainError):
        thom_deformation(b, np.zeros(b.frame.dim))


def expected_weights(name, lam):
    """w(-lam-rho)+rho over the oracle's Weyl group."""
    v = tuple(-c - 1 for c in lam)
    return [tuple(int(x) + 1 for x in oracles.apply(m, v)) for m, _ in oracles.weyl_group(name)]


@pytest.mark.parametrize("name,lam,dims", [
    ("A1", (0,), (1, 1)), ("A1", (2,), (1, 1)), ("A2", (0, 0), (1, 2, 2, 1)), ("A2", (1, 0), (1, 2, 2, 1)), ("B2", (0, 0), (1, 2, 2, 2, 1)),
])
def test_kostant(name, lam, dims):
    d = build_root_datum(name)
    rep = kostant_cohomology(build_irrep(d, lam))
    assert rep.dims == dims
    assert rep.matches
    assert rep.dbar_squared < 1e-10
    if name in oracles.CARTAN:
        assert sorted(w for _, w in rep.weights) == sorted(expected_weights(name, lam))


def test_kostant_frozen_a1():
    rep = kostant_cohomology(build_irrep(build_root_datum("A1"), (0,)))
    assert rep.weights == ((0, (0,)), (1, (2,)))


@pytest.mark.parametrize("name,lam", [("A1", (0,)), ("A1", (1,)), ("A2", (0, 0)), ("A2", (1, 0)), ("B2", (0, 0))])
def test_decomposition_identity(name, lam):
    res = verify_alt1(dirac_bundle(build_root_datum(name), lam))
    assert max(res.values()) < 1e-8, res


def test_truncated_loop(a1):
    res = loop_residuals(build_loop_spinors(a1, 2))
    assert max(res.values()) < 1e-8, res
