"""Spectral flow of the abelian families d/dtheta + i xi on circles and tori.

On the circle the mode e^{in theta} is an eigenvector of D_xi = d/dtheta + i xi
with eigenvalue i(n + xi). Tracks record the imaginary parts, so a track
moving upward through zero counts +1; the unit loop xi: 0 -> 1 has flow +1.
On a torus with twisting kappa the shift is kappa(xi) + lambda, one scalar
family per axis of the mode lattice.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linear_sum_assignment
from sympy.matrices.normalforms import smith_normal_form

from .errors import DomainError, RegularityError
from .frame import clifford_gammas

DEFAULT_MODES = 8
_TOL = 1e-12
_MAX_STEP = 0.25  # eigenvalue gap is 1


@dataclass(frozen=True)
class TorusTwisting:
    """Integer matrix kappa: Pi -> Pi* on the lattice Z^rank."""

    rank: int
    kappa: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in np.atleast_2d(np.array(self.kappa, dtype=object)))
        if len(rows) != self.rank or any(len(r) != self.rank for r in rows):
            raise DomainError(f"kappa must be a {self.rank}x{self.rank} integer matrix")
        object.__setattr__(self, "kappa", rows)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.kappa, dtype=np.int64)

    @property
    def determinant(self) -> int:
        return int(sympy.Matrix(self.kappa).det())

    @property
    def regular(self) -> bool:
        return self.determinant != 0


@dataclass(frozen=True, eq=False)
class FlowRecord:
    path: np.ndarray  # (samples, rank) sampled xi values
    eigenvalue_tracks: np.ndarray  # (samples, tracks), imaginary parts
    net_flow: int
    crossings: tuple = ()  # (track, sample index, +1 or -1)
    axis_flows: tuple = field(default=())

    def tracks_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample_index", "track_index", "value"])
        for s, row in enumerate(self.eigenvalue_tracks):
            for t, v in enumerate(row):
                w.writerow([s, t, "%.12e" % v])
        return buf.getvalue()


def _densify(path: np.ndarray, slope: float) -> np.ndarray:
    """Insert samples so consecutive eigenvalues move by less than a quarter gap."""
    out = [path[0]]
    for a, b in zip(path[:-1], path[1:]):
        move = slope * float(np.max(np.abs(b - a))) if len(a) else 0.0
        steps = max(1, int(math.ceil(move / _MAX_STEP * (1 + 1e-9))) + (1 if move > 0 else 0))
        for t in range(1, steps + 1):
            out.append(a + (b - a) * t / steps)
    return np.array(out)


def _track(spectra: list[np.ndarray]) -> np.ndarray:
    """Nearest-match tracking of sorted real spectra between consecutive samples."""
    tracks = [np.sort(spectra[0])]
    for vals in spectra[1:]:
        prev = tracks[-1]
        cost = np.abs(prev[:, None] - vals[None, :])
        rows, cols = linear_sum_assignment(cost)
        nxt = np.empty_like(prev)
        nxt[rows] = vals[cols]
        tracks.append(nxt)
    return np.array(tracks)


def _crossings(tracks: np.ndarray, skip: set) -> list[tuple[int, int, int]]:
    out = []
    nonneg = tracks >= -_TOL
    for t in range(tracks.shape[1]):
        if t in skip:
            continue
        for s in range(tracks.shape[0] - 1):
            if nonneg[s, t] != nonneg[s + 1, t]:
                out.append((t, s + 1, 1 if nonneg[s + 1, t] else -1))
    return out


def _scalar_family(offsets: np.ndarray, N: int) -> tuple[np.ndarray, list]:
    """Tracks and crossings of diag(i(n + offset)), n in [-N, N]."""
    if float(np.max(np.abs(offsets))) > N - 1 + _TOL:
        raise DomainError(f"path leaves the mode window |n| <= {N}; increase N")
    modes = np.arange(-N, N + 1, dtype=float)
    spectra = []
    for c in offsets:
        op = np.diag(1j * (modes + c))
        spectra.append(np.linalg.eigvalsh(-1j * op))  # hermitian, eigenvalues n + c
    tracks = _track(spectra)
    # the extreme modes sit within distance 1 of the window edge
    return tracks, _crossings(tracks, {0, 2 * N})


def _as_path(path, rank: int) -> np.ndarray:
    arr = np.array(path, dtype=float)
    if rank == 1 and arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != rank or len(arr) < 1:
        raise DomainError(f"path must be a sequence of points in R^{rank}")
    if len(arr) == 1:
        arr = np.vstack([arr, arr])
    return arr


def circle_flow(path, N: int = DEFAULT_MODES) -> FlowRecord:
    """Spectral flow of d/dtheta + i xi along the sampled path of xi values."""
    pts = _densify(_as_path(path, 1), 1.0)
    tracks, cross = _scalar_family(pts[:, 0], int(N))
    return FlowRecord(pts, tracks, sum(c[2] for c in cross), tuple(cross), (sum(c[2] for c in cross),))


def smith_invariants(tw: TorusTwisting) -> tuple[int, ...]:
    snf = smith_normal_form(sympy.Matrix(tw.kappa), domain=sympy.ZZ)
    return tuple(abs(int(snf[i, i])) for i in range(tw.rank))


def torus_class_census(tw: TorusTwisting) -> int:
    """|Pi* / kappa(Pi)| from the Smith normal form of kappa."""
    if not tw.regular:
        raise RegularityError(f"kappa {tw.kappa} is singular")
    return int(np.prod(smith_invariants(tw)))


def census_record(tw: TorusTwisting) -> dict:
    return {
        "rank": tw.rank,
        "kappa": [list(r) for r in tw.kappa],
        "invariant_factors": list(smith_invariants(tw)),
        "census": torus_class_census(tw),
    }


def _lam(tw: TorusTwisting, lam_class) -> np.ndarray:
    if lam_class is None:
        return np.zeros(tw.rank)
    lam = np.atleast_1d(np.array(lam_class, dtype=float))
    if lam.shape != (tw.rank,) or np.any(lam != np.rint(lam)):
        raise DomainError(f"lambda class must be an integer vector of length {tw.rank}")
    return lam


def torus_flow(tw: TorusTwisting, lam_class=None, path=None, N: int = DEFAULT_MODES) -> FlowRecord:
    """Spectral flow of the twisted torus family along ``path`` in t.

    Axis j carries the scalar family i(n + (kappa xi + lambda)_j); the net flow
    is the sum of the axis flows, which for a closed loop gamma is the entry
    sum of kappa gamma.
    """
    if not tw.regular:
        raise RegularityError(f"kappa {tw.kappa} is singular")
    lam = _lam(tw, lam_class)
    if path is None:
        path = [np.zeros(tw.rank), np.zeros(tw.rank)]
    k = tw.matrix.astype(float)
    slope = float(np.max(np.sum(np.abs(k), axis=1)))
    pts = _densify(_as_path(path, tw.rank), max(slope, 1.0))
    offsets = pts @ k.T + lam
    all_tracks, cross, axis = [], [], []
    width = 2 * int(N) + 1
    for j in range(tw.rank):
        tracks, cj = _scalar_family(offsets[:, j], int(N))
        all_tracks.append(tracks)
        cross += [(t + j * width, s, d) for t, s, d in cj]
        axis.append(sum(d for _, _, d in cj))
    return FlowRecord(pts, np.hstack(all_tracks), sum(axis), tuple(cross), tuple(axis))


def torus_kernel_dim(tw: TorusTwisting, lam_class, xi, N: int = DEFAULT_MODES, tol: float = 1e-9) -> int:
    """Kernel dimension of sum_j psi^j i(n + kappa xi + lambda)_j on the mode window."""
    lam = _lam(tw, lam_class)
    shift = tw.matrix.astype(float) @ np.atleast_1d(np.array(xi, dtype=float)) + lam
    gammas = clifford_gammas(tw.rank)
    dim = 0
    for n in itertools.product(range(-N, N + 1), repeat=tw.rank):
        v = np.array(n, dtype=float) + shift
        block = sum(1j * c * g for c, g in zip(v, gammas))
        sv = np.linalg.svd(block, compute_uv=False)
        dim += int(np.sum(sv < tol))
    return dim


def kernel_points(tw: TorusTwisting, lam_class=None) -> list[tuple]:
    """Exact xi in [0,1)^rank with kappa xi + lambda in Z^rank (where the kernel appears)."""
    if not tw.regular:
        raise RegularityError(f"kappa {tw.kappa} is singular")
    lam = [int(c) for c in _lam(tw, lam_class)]
    adj = sympy.Matrix(tw.kappa).adjugate()
    det = tw.determinant
    n = tw.rank
    found = set()
    # det * Z^n lies in kappa(Z^n), so m modulo |det| covers every coset
    for m in itertools.product(range(abs(det)), repeat=n):
        v = [m[i] - lam[i] for i in range(n)]
        found.add(tuple(Fraction(sum(int(adj[i, j]) * v[j] for j in range(n)), det) % 1 for i in range(n)))
    return sorted(found)
