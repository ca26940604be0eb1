import numpy as np
import pytest

from conftest import ALGEBRAS
from verlinde_kit import CapExceededError, build_frame, build_irrep, build_loop_spinors, build_root_datum, build_spinors
from verlinde_kit.cartan import irrep_dimension
from verlinde_kit.frame import clifford_gammas, frame_residuals
from verlinde_kit.reps import irrep_residuals, spinor_residuals


@pytest.mark.parametrize("m", range(1, 8))
def test_clifford_gammas(m):
    g = clifford_gammas(m)
    n = g[0].shape[0]
    assert n == 2 ** (m // 2)
    for a in range(m):
        assert np.allclose(g[a], g[a].conj().T)
        for b in range(m):
            anti = g[a] @ g[b] + g[b] @ g[a]
            assert np.allclose(anti, 2 * (a == b) * np.eye(n))


@pytest.mark.parametrize("name", ALGEBRAS)
def test_frame(name):
    fr = build_frame(name)
    res = frame_residuals(fr)
    assert max(res.values()) < 1e-10
    assert fr.dim == build_root_datum(name).dim
    # orthonormal frame: structure constants totally antisymmetric
    assert np.allclose(fr.f, -fr.f.transpose(1, 0, 2))
    assert np.allclose(fr.f, -fr.f.transpose(0, 2, 1))


@pytest.mark.parametrize("name,lam", [
    ("A1", (0,)), ("A1", (1,)), ("A1", (3,)), ("A2", (1, 0)), ("A2", (1, 1)), ("A2", (2, 1)),
    ("B2", (1, 0)), ("B2", (0, 1)), ("C3", (1, 0, 0)), ("G2", (1, 0)), ("D4", (0, 0, 1, 0)),
])
def test_irreps(name, lam):
    d = build_root_datum(name)
    rep = build_irrep(d, lam)
    assert rep.dim == irrep_dimension(d, lam)
    res = irrep_residuals(rep)
    assert max(res.values()) < 1e-9


def test_irrep_cap():
    with pytest.raises(CapExceededError):
        build_irrep(build_root_datum("A2"), (4, 4))


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3"])
def test_spinors(name):
    s = build_spinors(build_root_datum(name))
    assert s.dim == 2 ** ((len(s.psi) + 1) // 2)
    assert max(spinor_residuals(s).values()) < 1e-10


def test_loop_cap():
    with pytest.raises(CapExceededError):
        build_loop_spinors(build_root_datum("A2"), 2)


def test_loop_spinor_dimension():
    loop = build_loop_spinors(build_root_datum("A1"), 2)
    assert loop.dim == 256
