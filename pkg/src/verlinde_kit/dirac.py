"""Cubic Dirac operators and the family D_mu, with Kostant cohomology as a check."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .cartan import RootDatum, ip, weyl_elements
from .errors import DomainError
from .reps import IrrepMatrices, SpinorModule, TruncatedLoopClifford, build_irrep

KERNEL_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class DiracBundle:
    """D on V (x) S with the total action T_a and Clifford generators psi^a."""

    irrep: IrrepMatrices
    spinors: SpinorModule
    D: np.ndarray
    T: np.ndarray
    psi: np.ndarray
    grading: np.ndarray

    @property
    def frame(self):
        return self.irrep.frame

    @property
    def datum(self) -> RootDatum:
        return self.irrep.frame.datum

    @property
    def shifted(self) -> tuple:
        """lam + rho in fundamental-weight coordinates."""
        return tuple(c + 1 for c in self.irrep.lam)

    @property
    def radius(self) -> float:
        s = self.shifted
        return float(ip(self.datum, s, s)) ** 0.5

    def clifford(self, mu) -> np.ndarray:
        return np.einsum("a,aij->ij", np.asarray(mu, dtype=float), self.psi)

    def total_action(self, mu) -> np.ndarray:
        return np.einsum("a,aij->ij", np.asarray(mu, dtype=float), self.T)

    def torus_point(self, coords) -> np.ndarray:
        """Frame coordinates of a vector of t* given on the fundamental weights."""
        out = np.zeros(self.frame.dim)
        out[: self.frame.rank] = self.frame.from_omega(coords)
        return out


def cubic_dirac(irrep: IrrepMatrices, spinors: SpinorModule) -> DiracBundle:
    """D = R_a (x) psi^a + 1/3 sigma_a psi^a and T_a = R_a (x) 1 + 1 (x) sigma_a."""
    dv, ds = irrep.dim, spinors.dim
    iv, is_ = np.eye(dv), np.eye(ds)
    r, psi, sig = irrep.R, spinors.psi, spinors.sigma
    d = len(psi)
    big_psi = np.array([np.kron(iv, p) for p in psi])
    t = np.array([np.kron(r[a], is_) + np.kron(iv, sig[a]) for a in range(d)])
    cubic = np.matmul(sig, psi).sum(axis=0) / 3
    dirac = np.einsum("aij,akl->ikjl", r, psi).reshape(dv * ds, dv * ds) + np.kron(iv, cubic)
    return DiracBundle(irrep, spinors, dirac, t, big_psi, np.kron(iv, spinors.grading))


@lru_cache(maxsize=64)
def dirac_bundle(datum: RootDatum, lam: tuple) -> DiracBundle:
    from .reps import build_spinors

    return cubic_dirac(build_irrep(datum, lam), build_spinors(datum))


def _comm(a, b):
    return a @ b - b @ a


def _anti(a, b):
    return a @ b + b @ a


def dirac_residuals(bundle: DiracBundle) -> dict:
    """Residuals of [D, psi^b] = 2 T_b, [D, T_b] = 0, D^2 = -|lam+rho|^2 and structural checks."""
    D = bundle.D
    n = len(D)
    s = bundle.shifted
    value = float(ip(bundle.datum, s, s))
    return {
        "D_psi": max(float(np.max(np.abs(_anti(D, p) - 2 * t))) for p, t in zip(bundle.psi, bundle.T)),
        "D_T": max(float(np.max(np.abs(_comm(D, t)))) for t in bundle.T),
        "D_squared": float(np.max(np.abs(D @ D + value * np.eye(n)))),
        "odd": float(np.max(np.abs(_anti(D, bundle.grading)))),
        "skew": float(np.max(np.abs(D + D.conj().T))),
    }


class FamilyPoint(NamedTuple):
    matrix: np.ndarray
    kernel_dim: int
    min_singular: float


def family_matrix(bundle: DiracBundle, mu) -> np.ndarray:
    """D_mu = D + i psi(mu) for mu in frame coordinates."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (bundle.frame.dim,):
        raise DomainError(f"mu must have {bundle.frame.dim} frame coordinates, got shape {mu.shape}")
    return bundle.D + 1j * bundle.clifford(mu)


def _kernel(mat: np.ndarray) -> tuple[int, float]:
    s = np.linalg.svd(mat, compute_uv=False)
    top = max(float(s[0]), 1e-300)
    return int(np.sum(s < KERNEL_RTOL * top)), float(s[-1])


def family_at(bundle: DiracBundle, mu) -> FamilyPoint:
    """D_mu with its kernel dimension and smallest singular value on all of V (x) S."""
    mat = family_matrix(bundle, mu)
    k, smin = _kernel(mat)
    return FamilyPoint(mat, k, smin)


@lru_cache(maxsize=64)
def _half_projector(bundle: DiracBundle) -> tuple[np.ndarray, np.ndarray]:
    """Isometries onto the two halves used for the skew-adjoint half family."""
    s = bundle.spinors
    split = s.volume if s.volume is not None else s.grading
    w, u = np.linalg.eigh(split)
    plus, minus = u[:, w > 0], u[:, w < 0]
    iv = np.eye(bundle.irrep.dim)
    return np.kron(iv, plus), np.kron(iv, minus)


def half_family(bundle: DiracBundle, mu) -> np.ndarray:
    """Chirality block S+ -> S- (even dimension) or the volume-form block on S+ (odd)."""
    mat = family_matrix(bundle, mu)
    plus, minus = _half_projector(bundle)
    if bundle.spinors.volume is None:
        return minus.conj().T @ mat @ plus
    return plus.conj().T @ mat @ plus


def half_kernel(bundle: DiracBundle, mu) -> tuple[int, float]:
    return _kernel(half_family(bundle, mu))


def family_square_residual(bundle: DiracBundle, mu) -> float:
    """|| D_mu^2 + |lam+rho|^2 - 2i T(mu) + |mu|^2 ||, zero for every mu."""
    mat = family_matrix(bundle, mu)
    mu = np.asarray(mu, dtype=float)
    s = bundle.shifted
    val = float(ip(bundle.datum, s, s)) + float(mu @ mu)
    lhs = mat @ mat + val * np.eye(len(mat)) - 2j * bundle.total_action(mu)
    return float(np.max(np.abs(lhs)))


# --------------------------------------------------------------------------
# orbit geometry


@lru_cache(maxsize=None)
def _fundamental_reps(datum: RootDatum) -> tuple:
    l = datum.rank
    return tuple(build_irrep(datum, tuple(1 if j == i else 0 for j in range(l)), cap=128) for i in range(l))


def dominant_torus_point(datum: RootDatum, mu) -> np.ndarray:
    """h-coordinates of the dominant t*-point on the coadjoint orbit of mu.

    <omega_i, dom(mu)> is the top eigenvalue of i rho(X_mu) on the module with
    lowest weight -omega_i.
    """
    reps = _fundamental_reps(datum)
    mu = np.asarray(mu, dtype=float)
    frame = reps[0].frame
    pairs = []
    for rep in reps:
        x = rep.rep(mu)
        pairs.append(float(np.max(np.linalg.eigvalsh(1j * x))))
    return np.linalg.solve(frame.omega_h, np.array(pairs))


def orbit_distance(bundle: DiracBundle, mu) -> float:
    """Distance from mu to the coadjoint orbit through lam + rho."""
    dom = dominant_torus_point(bundle.datum, mu)
    target = bundle.frame.from_omega(bundle.shifted)
    return float(np.linalg.norm(dom - target))


@dataclass(frozen=True)
class ScanSample:
    mu: tuple
    min_singular: float
    kernel_dim: int
    distance: float


@dataclass(frozen=True)
class FamilyScanResult:
    samples: tuple
    orbit_radius: float

    def localization_failures(self, tol: float = 1e-6) -> list:
        return [s for s in self.samples if (s.kernel_dim > 0) != (s.distance < tol)]


def _jobs(jobs) -> int:
    env = os.environ.get("VERLINDE_KIT_JOBS")
    return max(1, int(env) if env else int(jobs or 1))


def orbit_scan(bundle: DiracBundle, grid, jobs: int | None = None) -> FamilyScanResult:
    """Half-family kernel and orbit distance at each grid point (frame coordinates)."""

    def one(mu):
        k, smin = half_kernel(bundle, mu)
        return ScanSample(tuple(float(x) for x in mu), smin, k, orbit_distance(bundle, mu))

    grid = [np.asarray(m, dtype=float) for m in grid]
    n = _jobs(jobs)
    if n > 1:
        with ThreadPoolExecutor(n) as ex:
            samples = list(ex.map(one, grid))
    else:
        samples = [one(m) for m in grid]
    return FamilyScanResult(tuple(samples), bundle.radius)


def scan_grid(bundle: DiracBundle, n: int = 200, seed: int = 0) -> list[np.ndarray]:
    """Half of the points on the orbit of lam + rho, the rest pushed off radially or random."""
    if n < 2:
        raise DomainError("a scan needs at least two points")
    rng = np.random.default_rng(seed)
    frame = bundle.frame
    base = bundle.torus_point(bundle.shifted)
    r = bundle.radius
    grid = []
    for t in range(n):
        g = expm(frame.ad_of(rng.normal(size=frame.dim)))
        on = g @ base
        kind = t % 4
        if kind < 2:
            grid.append(on)
        elif kind == 2:
            # radial step off the orbit, well clear of the kernel tolerance
            grid.append(on * (1 + rng.choice([-1, 1]) * 10 ** rng.uniform(-4, -0.5)))
        else:
            grid.append(rng.normal(size=frame.dim) * r)
    return grid


def kernel_projector(bundle: DiracBundle, mu) -> np.ndarray:
    """Orthonormal basis (columns) of ker D_mu on V (x) S."""
    mat = family_matrix(bundle, mu)
    _, s, vh = np.linalg.svd(mat)
    keep = s < KERNEL_RTOL * max(float(s[0]), 1e-300)
    return vh[keep].conj().T


def normal_clifford_residual(bundle: DiracBundle, mu, nu) -> float:
    """On ker D_mu, D_{mu+nu} acts as i psi(nu), which preserves the kernel for normal nu."""
    basis = kernel_projector(bundle, mu)
    if basis.shape[1] == 0:
        raise DomainError("D_mu has no kernel at this point")
    mu, nu = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    act = family_matrix(bundle, mu + nu) @ basis
    cliff = 1j * bundle.clifford(nu) @ basis
    leak = cliff - basis @ (basis.conj().T @ cliff)
    return float(max(np.max(np.abs(act - cliff)), np.max(np.abs(leak))))


def thom_deformation(bundle: DiracBundle, mu, steps: int = 11) -> dict:
    """Smallest singular value of eps D + i psi(mu) along eps in [0, 1]."""
    mu = np.asarray(mu, dtype=float)
    if not np.any(mu):
        raise DomainError("the deformation needs mu != 0")
    if steps < 2:
        raise DomainError("need at least two steps")
    cliff = 1j * bundle.clifford(mu)
    rows = []
    for eps in np.linspace(0.0, 1.0, steps):
        mat = eps * bundle.D + cliff
        s = np.linalg.svd(mat, compute_uv=False)
        rows.append({"eps": float(eps), "min_singular": float(s[-1]), "invertible": bool(s[-1] >= KERNEL_RTOL * s[0])})
    return {"norm_mu": float(np.linalg.norm(mu)), "steps": rows, "invertible": all(r["invertible"] for r in rows)}


# --------------------------------------------------------------------------
# Kostant cohomology


def _fermions(n: int) -> tuple[list, list]:
    """Creation/annihilation operators on the exterior algebra of C^n (Jordan-Wigner)."""
    z = np.diag([1.0, -1.0])
    low = np.array([[0.0, 1.0], [0.0, 0.0]])
    eye = np.eye(2)
    ann = []
    for i in range(n):
        m = np.ones((1, 1))
        for j in range(n):
            m = np.kron(m, z if j < i else (low if j == i else eye))
        ann.append(m)
    return [a.T.copy() for a in ann], ann


def _structure(frame, npos):
    """c[i, b, g] = -<E_b, [E_-i, E_-g]>: coadjoint action of E_-i on n-bar*."""
    ep = [frame.root_vector(i, True) for i in range(npos)]
    em = [frame.root_vector(i, False) for i in range(npos)]
    c = np.zeros((npos, npos, npos), dtype=complex)
    for i in range(npos):
        for g in range(npos):
            br = frame.bracket(em[i], em[g])
            for b in range(npos):
                c[i, b, g] = -np.sum(ep[b] * br)
    return em, c


def kostant_differential(irrep: IrrepMatrices) -> tuple[np.ndarray, np.ndarray, list]:
    """Chevalley differential of n-bar with values in V on V (x) exterior(n-bar*).

    Returns (d, degree operator diagonal, weight of each basis vector).
    """
    frame = irrep.frame
    datum = frame.datum
    npos = len(datum.positive_roots)
    eps, iota = _fermions(npos)
    em, c = _structure(frame, npos)
    iv = np.eye(irrep.dim)
    dim_l = 2**npos
    d = np.zeros((irrep.dim * dim_l,) * 2, dtype=complex)
    for i in range(npos):
        d += np.kron(irrep.rep(em[i]), eps[i])
        adv = sum(c[i, b, g] * eps[g] @ iota[b] for b in range(npos) for g in range(npos) if abs(c[i, b, g]) > 1e-12)
        if not isinstance(adv, int):
            d += 0.5 * np.kron(iv, eps[i] @ adv)
    bits = [[(s >> (npos - 1 - i)) & 1 for i in range(npos)] for s in range(dim_l)]
    degree = np.array([sum(b) for _ in range(irrep.dim) for b in bits])
    weights = []
    for w in irrep.weights:
        for b in bits:
            tot = list(w)
            for i, on in enumerate(b):
                if on:
                    tot = [x + y for x, y in zip(tot, datum.positive_roots[i])]
            weights.append(tuple(tot))
    return d, degree, weights


@dataclass(frozen=True)
class CohomologyReport:
    dims: tuple  # dimension in each degree
    weights: tuple  # (degree, weight) of harmonic representatives, sorted
    dbar_squared: float
    expected_weights: tuple

    @property
    def matches(self) -> bool:
        return self.weights == self.expected_weights


def kostant_cohomology(irrep: IrrepMatrices) -> CohomologyReport:
    """Harmonic representatives of H(n-bar; V) grouped by degree and t-weight."""
    d, degree, weights = kostant_differential(irrep)
    lap = d @ d.conj().T + d.conj().T @ d
    groups: dict = {}
    for idx, key in enumerate(zip(degree.tolist(), weights)):
        groups.setdefault(key, []).append(idx)
    harmonic = []
    for key, idx in sorted(groups.items()):
        block = lap[np.ix_(idx, idx)]
        ev = np.linalg.eigvalsh(block)
        harmonic += [key] * int(np.sum(np.abs(ev) < 1e-8))
    datum = irrep.frame.datum
    npos = len(datum.positive_roots)
    dims = [0] * (npos + 1)
    for q, _ in harmonic:
        dims[q] += 1
    return CohomologyReport(
        tuple(dims),
        tuple(sorted(harmonic)),
        float(np.max(np.abs(d @ d))),
        tuple(expected_harmonic_weights(datum, irrep.lam)),
    )


def expected_harmonic_weights(datum: RootDatum, lam) -> list:
    """(length(w), w(-lam-rho)+rho) for w in W, sorted."""
    v = tuple(-c - 1 for c in lam)
    return sorted((w.length, tuple(int(x) + 1 for x in w.apply(v))) for w in weyl_elements(datum))


def dbar_operator(bundle: DiracBundle) -> np.ndarray:
    """sqrt(2) times the Kostant differential, realised on V (x) S via a^dagger = psi(E_alpha)/sqrt(2)."""
    frame = bundle.frame
    npos = len(bundle.datum.positive_roots)
    psi_s = bundle.spinors.psi
    iv = np.eye(bundle.irrep.dim)
    em, c = _structure(frame, npos)
    ep = [frame.root_vector(i, True) for i in range(npos)]
    adag = [np.kron(iv, np.einsum("a,aij->ij", ep[i], psi_s)) / np.sqrt(2) for i in range(npos)]
    ann = [np.kron(iv, np.einsum("a,aij->ij", em[i], psi_s)) / np.sqrt(2) for i in range(npos)]
    ds = bundle.spinors.dim
    out = np.zeros_like(bundle.D)
    for i in range(npos):
        out += adag[i] @ np.kron(bundle.irrep.rep(em[i]), np.eye(ds))
        for b in range(npos):
            for g in range(npos):
                if abs(c[i, b, g]) > 1e-12:
                    out += 0.5 * c[i, b, g] * adag[i] @ adag[g] @ ann[b]
    return np.sqrt(2) * out


def torus_dirac(bundle: DiracBundle) -> np.ndarray:
    """sum over Cartan directions of psi^j T_j."""
    l = bundle.frame.rank
    return sum(bundle.psi[j] @ bundle.T[j] for j in range(l))


def verify_alt1(bundle: DiracBundle) -> dict:
    """Residuals of D = dbar + dbar^* + D^t, with dbar^* = -dbar^dagger in the skew convention."""
    dbar = dbar_operator(bundle)
    dt = torus_dirac(bundle)
    off = dbar - dbar.conj().T
    npos = len(bundle.datum.positive_roots)
    # Lambda-degree = number operator of a^dagger a
    frame = bundle.frame
    iv = np.eye(bundle.irrep.dim)
    number = np.zeros_like(bundle.D)
    for i in range(npos):
        ad = np.kron(iv, np.einsum("a,aij->ij", frame.root_vector(i, True), bundle.spinors.psi)) / np.sqrt(2)
        number += ad @ ad.conj().T
    return {
        "decomposition": float(np.max(np.abs(bundle.D - (off + dt)))),
        # both operators are odd, so the graded commutator is the anticommutator
        "commutation": float(np.max(np.abs(_anti(dt, off)))),
        "dbar_squared": float(np.max(np.abs(dbar @ dbar))),
        "degree": float(np.max(np.abs(_comm(dt, number)))),
    }


# --------------------------------------------------------------------------
# truncated loop checks


def loop_residuals(loop: TruncatedLoopClifford) -> dict:
    """Loop relations restricted to energy-interior states (H trivial, k = 0)."""
    N = loop.N
    f = loop.frame.f
    d = loop.frame.dim
    h = loop.frame.datum.h_dual
    rho = loop.frame.datum.rho
    rho2 = float(ip(loop.frame.datum, rho, rho))
    eye = np.eye(loop.dim)
    D = loop.dirac()

    def block(op, win):
        if len(win) == 0:
            return 0.0
        dense = op.toarray() if hasattr(op, "toarray") else np.asarray(op)
        return float(np.max(np.abs(dense[:, win])))

    out = {"clifford": 0.0, "current": 0.0, "central": 0.0, "D_psi": 0.0, "D_T": 0.0, "D_squared": 0.0}
    keys = [(a, m) for a in range(d) for m in range(-N, N + 1)]
    for a, m in keys:
        for b, n in keys:
            anti = loop.psi[(a, m)] @ loop.psi[(b, n)] + loop.psi[(b, n)] @ loop.psi[(a, m)]
            target = 2.0 if (a == b and m == -n) else 0.0
            out["clifford"] = max(out["clifford"], float(np.max(np.abs((anti - target * eye).data))) if anti.nnz else abs(target))
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            if abs(m + n) > N:
                continue
            win = loop.window(N - max(abs(m), abs(n)))
            for a in range(d):
                for b in range(d):
                    sa, sb = loop.sigma(a, m), loop.sigma(b, n)
                    lhs = sa @ sb - sb @ sa
                    rhs = sum(f[a, b, c] * loop.sigma(c, m + n) for c in range(d))
                    central = h * m if (a == b and m == -n) else 0.0
                    res = block(lhs - rhs - central * eye, win)
                    out["current"] = max(out["current"], res)
                    if central:
                        out["central"] = max(out["central"], res)
    for n in range(-N, N + 1):
        win = loop.window(N - abs(n))
        for b in range(d):
            p, t = loop.psi[(b, n)], loop.sigma(b, n)
            out["D_psi"] = max(out["D_psi"], block(D @ p + p @ D - 2 * t, win))
            out["D_T"] = max(out["D_T"], block(D @ t - t @ D + n * h * p, win))
    sq = (D @ D).toarray() + 2 * h * np.diag(loop.energy) + rho2 * eye
    out["D_squared"] = block(sq, loop.window(N))
    return out

