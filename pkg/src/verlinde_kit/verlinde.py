"""The level-k fusion ring.

Fusion coefficients come from the Kac-Walton algorithm: tensor product
coefficients whose rho-shifted highest weights are folded back into the
level k + h_dual alcove with the sign of the affine Weyl element. The
S-matrix gives an independent check through the Verlinde formula.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .affine import alcove_points, in_alcove, kernel_data
from .cartan import AlgebraSpec, RootDatum, Weight, build_root_datum, conjugate_weight, weight_multiplicities, weyl_elements
from .errors import DomainError, InvariantError


@lru_cache(maxsize=512)
def _weight_arrays(datum: RootDatum, mu: tuple) -> tuple[np.ndarray, np.ndarray]:
    mults = weight_multiplicities(datum, mu)
    w = np.array([x.coords for x in mults], dtype=np.int64).reshape(-1, datum.rank)
    m = np.array(list(mults.values()), dtype=np.int64)
    return w, m


def _dominant(datum: RootDatum, lam) -> tuple:
    lam = tuple(lam)
    if len(lam) != datum.rank or any(int(c) != c or c < 0 for c in lam):
        raise DomainError(f"{lam} is not a dominant integral weight of {datum.spec.name}")
    return tuple(int(c) for c in lam)


def _accumulate(datum: RootDatum, k_dual: int, lam: tuple, mu: tuple) -> dict[Weight, int]:
    # iterate over the weights of the smaller module
    if sum(lam) < sum(mu):
        lam, mu = mu, lam
    w, m = _weight_arrays(datum, mu)
    shifted = [a + 1 for a in lam]
    raw = _kernels.klimyk_accumulate(*kernel_data(datum), k_dual, shifted, w, m)
    out = {}
    for key, total in raw.items():
        if total == 0:
            continue
        if total < 0:
            raise InvariantError(f"negative coefficient {total} at {key}")
        out[Weight(tuple(int(c) - 1 for c in key))] = int(total)
    return dict(sorted(out.items()))


def tensor_decompose(datum: RootDatum, lam, mu) -> dict[Weight, int]:
    """Multiplicities of irreducibles in V_lam (x) V_mu (Brauer-Klimyk)."""
    return _accumulate(datum, 0, _dominant(datum, lam), _dominant(datum, mu))


def fuse(datum: RootDatum, k: int, lam, mu) -> dict[Weight, int]:
    """Level-k fusion product of two alcove weights (Kac-Walton)."""
    lam, mu = _dominant(datum, lam), _dominant(datum, mu)
    for x in (lam, mu):
        if not in_alcove(datum, k, x):
            raise DomainError(f"{x} is outside the level-{k} alcove of {datum.spec.name}")
    return _accumulate(datum, k + datum.h_dual, lam, mu)


@dataclass(frozen=True, eq=False)
class FusionTable:
    algebra: AlgebraSpec
    level: int
    basis: tuple
    n: dict = field(repr=False)

    def coefficient(self, i: int, j: int, m: int) -> int:
        return self.n.get((i, j, m), 0)

    def index(self, lam) -> int:
        return self.basis.index(Weight(tuple(lam)))

    def as_array(self) -> np.ndarray:
        size = len(self.basis)
        arr = np.zeros((size, size, size), dtype=np.int64)
        for (i, j, m), v in self.n.items():
            arr[i, j, m] = v
        return arr

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "level": self.level,
            "basis": [list(b.coords) for b in self.basis],
            "triples": [[i, j, m, v] for (i, j, m), v in sorted(self.n.items())],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FusionTable":
        basis = tuple(Weight(tuple(b)) for b in doc["basis"])
        n = {(i, j, m): v for i, j, m, v in doc["triples"]}
        return cls(AlgebraSpec.parse(doc["algebra"]), int(doc["level"]), basis, n)


def _row(args):
    name, k, i, basis = args
    datum = build_root_datum(name)
    index = {b: t for t, b in enumerate(basis)}
    out = {}
    for j in range(i, len(basis)):
        for nu, v in fuse(datum, k, basis[i], basis[j]).items():
            out[(i, j, index[nu])] = v
    return out


def _jobs(jobs) -> int:
    env = os.environ.get("VERLINDE_KIT_JOBS")
    if env:
        jobs = int(env)
    return max(1, int(jobs or 1))


def fusion_table(datum: RootDatum, k: int, jobs: int | None = None) -> FusionTable:
    """All fusion coefficients among the level-k alcove weights."""
    basis = tuple(alcove_points(datum, k))
    tasks = [(datum.spec.name, k, i, basis) for i in range(len(basis))]
    njobs = _jobs(jobs)
    if njobs > 1 and len(basis) > 8:
        with ProcessPoolExecutor(njobs) as ex:
            rows = list(ex.map(_row, tasks))
    else:
        rows = [_row(t) for t in tasks]
    n = {}
    for row in rows:
        for (i, j, m), v in row.items():
            n[(i, j, m)] = v
            n[(j, i, m)] = v
    return FusionTable(datum.spec, k, basis, dict(sorted(n.items())))


def ring_axiom_defects(table: FusionTable) -> dict:
    """Number of entries violating each ring axiom."""
    a = table.as_array()
    size = a.shape[0]
    comm = int(np.sum(a != a.transpose(1, 0, 2)))
    unit = int(np.sum(a[0] != np.eye(size, dtype=np.int64)))
    # (x_i x_j) x_l versus x_i (x_j x_l)
    left = np.einsum("ijm,mlp->ijlp", a, a)
    right = np.einsum("jlm,imp->ijlp", a, a)
    assoc = int(np.sum(left != right))
    return {"commutativity": comm, "unit": unit, "associativity": assoc}


@dataclass(frozen=True, eq=False)
class SMatrixData:
    entries: np.ndarray
    k_dual: int
    basis: tuple

    def unitarity_residual(self) -> float:
        s = self.entries
        return float(np.max(np.abs(s @ s.conj().T - np.eye(len(s)))))

    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.T)))


@lru_cache(maxsize=None)
def _weyl_arrays(datum: RootDatum) -> tuple[np.ndarray, np.ndarray]:
    els = weyl_elements(datum)
    mats = np.array([w.matrix for w in els], dtype=float)
    signs = np.array([w.sign for w in els], dtype=float)
    return mats, signs


def _gram(datum: RootDatum) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in datum.gram])


def s_matrix(datum: RootDatum, k: int) -> SMatrixData:
    """Modular S-matrix on the level-k alcove, normalised to be unitary with S_00 > 0."""
    if int(k) != k or k < 0:
        raise DomainError(f"level must be a non-negative integer, got {k!r}")
    basis = tuple(alcove_points(datum, k))
    k_dual = k + datum.h_dual
    shifted = np.array([[c + 1 for c in b.coords] for b in basis], dtype=float)
    mats, signs = _weyl_arrays(datum)
    g = _gram(datum)
    images = np.einsum("wij,lj->wli", mats, shifted)  # w(lam + rho)
    pair = np.einsum("wli,ij,mj->wlm", images, g, shifted)
    raw = np.einsum("w,wlm->lm", signs, np.exp(-2j * np.pi * pair / k_dual))
    size = len(basis)
    s = raw * np.sqrt(size) / np.linalg.norm(raw)
    s *= np.conj(s[0, 0]) / abs(s[0, 0])
    data = SMatrixData(s, k_dual, basis)
    if data.unitarity_residual() > 1e-9 or data.symmetry_residual() > 1e-9:
        raise InvariantError("S-matrix failed unitarity or symmetry")
    if np.any(s[0].real <= 0) or np.max(np.abs(s[0].imag)) > 1e-9:
        raise InvariantError("first row of the S-matrix is not positive")
    return data


def verlinde_coefficients(sdata: SMatrixData) -> np.ndarray:
    """Complex Verlinde sums N_{ij}^m before rounding."""
    s = sdata.entries
    return np.einsum("is,js,ms,s->ijm", s, s, s.conj(), 1 / s[0])


def verify_fusion(datum: RootDatum, k: int, table: FusionTable | None = None) -> dict:
    """Compare Kac-Walton fusion with the Verlinde formula on all basis pairs."""
    table = table or fusion_table(datum, k)
    sdata = s_matrix(datum, k)
    raw = verlinde_coefficients(sdata)
    rounded = np.rint(raw.real).astype(np.int64)
    residual = float(np.max(np.abs(raw - rounded))) if raw.size else 0.0
    kw = table.as_array()
    mismatches = [
        {"i": int(i), "j": int(j), "m": int(m), "kac_walton": int(kw[i, j, m]), "verlinde": int(rounded[i, j, m])}
        for i, j, m in zip(*np.nonzero(kw != rounded))
    ]
    return {
        "algebra": datum.spec.name,
        "level": k,
        "basis_size": len(table.basis),
        "pairs": len(table.basis) ** 2,
        "mismatches": mismatches,
        "max_residual": residual,
        "ok": not mismatches and residual < 1e-6,
    }


@dataclass(frozen=True)
class SignedTorusImage:
    terms: tuple  # (sign, w(lam + rho)) pairs

    def __len__(self):
        return len(self.terms)


def restrict_to_torus(datum: RootDatum, k: int, lam) -> SignedTorusImage:
    """Signed Weyl orbit of lam + rho, one term per Weyl element."""
    lam = _dominant(datum, lam)
    if not in_alcove(datum, k, lam):
        raise DomainError(f"{lam} is outside the level-{k} alcove")
    shifted = tuple(c + 1 for c in lam)
    return SignedTorusImage(tuple((w.sign, w.apply(shifted)) for w in weyl_elements(datum)))


def duality_pairing(datum: RootDatum, k: int, sdata: SMatrixData | None = None) -> list[int]:
    """Permutation i -> index of the dual weight -w0(lam_i), checked against S^2."""
    basis = alcove_points(datum, k)
    index = {b: t for t, b in enumerate(basis)}
    perm = [index[Weight(conjugate_weight(datum, b.coords))] for b in basis]
    sdata = sdata or s_matrix(datum, k)
    c = sdata.entries @ sdata.entries
    expect = np.zeros_like(c)
    expect[np.arange(len(perm)), perm] = 1
    if np.max(np.abs(c - expect)) > 1e-8:
        raise InvariantError("S^2 does not match the conjugation permutation")
    return perm

