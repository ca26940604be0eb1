"""Unitary matrices for irreducible modules and for (loop) spinor modules.

Irreducible modules are found inside tensor powers of the faithful module
used for the frame: the lowest weight vector is a joint kernel vector of
the simple lowering operators, and the module is generated from it by the
simple raising operators with Gram-Schmidt. The module labelled by a
dominant weight lam has lowest weight -lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .cartan import RootDatum, irrep_dimension, weight_multiplicities
from .errors import CapExceededError, DomainError, InvariantError
from .frame import OrthonormalFrame, build_frame, clifford_gammas

IRREP_CAP = 64
TENSOR_CAP = 65536
LOOP_CAP = 30
_GS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class IrrepMatrices:
    lam: tuple
    dim: int
    R: np.ndarray  # (d, dim, dim), anti-hermitian
    weights: tuple  # fundamental-weight coordinates of each basis vector
    frame: OrthonormalFrame

    def rep(self, x) -> np.ndarray:
        """Action of a (possibly complex) frame-coordinate vector."""
        return np.einsum("a,aij->ij", np.asarray(x), self.R)

    def weight_h(self) -> np.ndarray:
        return np.array([self.frame.from_omega(w) for w in self.weights])


def _defining(frame: OrthonormalFrame):
    """Frame matrices in a basis diagonalising the Cartan, plus integral weights."""
    mats = frame.matrices
    l = frame.rank
    rng = np.random.default_rng(7)
    gen = sum(c * mats[j] for j, c in enumerate(rng.standard_normal(l)))
    _, u = np.linalg.eigh(1j * gen)
    rot = np.einsum("ji,ajk,kl->ail", u.conj(), mats, u)
    weights_h = np.array([[(-1j * rot[j][s, s]).real for j in range(l)] for s in range(rot.shape[1])])
    om = weights_h @ frame.coroot_h.T
    wint = np.rint(om).astype(np.int64)
    if np.max(np.abs(om - wint)) > 1e-6:
        raise InvariantError("defining module weights are not integral")
    return rot, wint


class _TensorPower:
    """Operators of the m-th tensor power restricted to sets of basis states."""

    def __init__(self, rot: np.ndarray, wint: np.ndarray, m: int):
        self.rot, self.n, self.m = rot, rot.shape[1], m
        grids = np.indices((self.n,) * m).reshape(m, -1).T
        self.states = grids  # (n^m, m) multi-indices
        self.weights = wint[grids].sum(axis=1)
        self.strides = self.n ** np.arange(m - 1, -1, -1)

    def select(self, weight_set) -> np.ndarray:
        keys = {tuple(w) for w in weight_set}
        mask = np.array([tuple(w) in keys for w in self.weights.tolist()])
        return np.nonzero(mask)[0]

    def operator(self, x: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
        """Sum over tensor slots of the n x n matrix x, as a sparse rows x cols block."""
        n, m = self.n, self.m
        data, ri, ci = [], [], []
        cstates = self.states[cols]
        flat = cols
        order = np.argsort(rows)
        srows = rows[order]
        for k in range(m):
            src = cstates[:, k]
            coeff = x[:, src]  # (n, |cols|)
            new = flat[None, :] + (np.arange(n)[:, None] - src[None, :]) * self.strides[k]
            pos = np.searchsorted(srows, new)
            pos = np.minimum(pos, len(srows) - 1) if len(srows) else pos
            ok = (srows[pos] == new) & (np.abs(coeff) > 1e-14) if len(srows) else np.zeros_like(new, bool)
            jj, cc = np.nonzero(ok)
            data.append(coeff[jj, cc])
            ri.append(order[pos[jj, cc]])
            ci.append(cc)
        return sp.csr_matrix(
            (np.concatenate(data), (np.concatenate(ri), np.concatenate(ci))), shape=(len(rows), len(cols))
        )

    def complex_op(self, frame: OrthonormalFrame, vec: np.ndarray) -> np.ndarray:
        return np.einsum("a,aij->ij", vec, self.rot)


def _null_vector(mat: np.ndarray) -> np.ndarray | None:
    if mat.shape[0] == 0:
        v = np.zeros(mat.shape[1], dtype=complex)
        v[0] = 1
        return v
    _, s, vh = np.linalg.svd(mat)
    scale = max(float(s[0]) if s.size else 1.0, 1.0)
    rank = int(np.sum(s > 1e-9 * scale))
    if rank == mat.shape[1]:
        return None
    return vh[rank].conj()


@lru_cache(maxsize=128)
def _build_irrep(datum: RootDatum, lam: tuple, cap: int) -> IrrepMatrices:
    frame = build_frame(datum)
    dim = irrep_dimension(datum, lam)
    if dim > cap:
        raise CapExceededError(f"module of highest weight {lam} has dimension {dim} > cap {cap}")
    d, l = frame.dim, datum.rank
    if dim == 1:
        return IrrepMatrices(lam, 1, np.zeros((d, 1, 1), dtype=complex), ((0,) * l,), frame)
    rot, wint = _defining(frame)
    n = rot.shape[1]
    weight_set = [tuple(-c for c in w.coords) for w in weight_multiplicities(datum, lam)]
    lowest = tuple(-c for c in lam)
    simple_idx = [datum.positive_roots.index(tuple(datum.simple_roots[i])) for i in range(l)]
    m = 1
    while n**m <= TENSOR_CAP:
        tp = _TensorPower(rot, wint, m)
        low = tp.select([lowest])
        if len(low):
            blocks = []
            for i, idx in enumerate(simple_idx):
                target = tuple(a - b for a, b in zip(lowest, datum.simple_roots[i]))
                rows = tp.select([target])
                e_minus = tp.complex_op(frame, frame.root_vector(idx, positive=False))
                blocks.append(tp.operator(e_minus, rows, low).toarray())
            v = _null_vector(np.vstack(blocks))
            if v is not None:
                return _generate(datum, frame, tp, lam, dim, weight_set, low, v, simple_idx)
        m += 1
    raise CapExceededError(f"lowest weight {lowest} not reached within tensor cap {TENSOR_CAP}")


def _generate(datum, frame, tp, lam, dim, weight_set, low, v, simple_idx) -> IrrepMatrices:
    support = tp.select(weight_set)
    where = {s: t for t, s in enumerate(support.tolist())}
    start = np.zeros(len(support), dtype=complex)
    for t, s in enumerate(low.tolist()):
        start[where[s]] = v[t]
    raise_ops = [tp.operator(tp.complex_op(frame, frame.root_vector(i)), support, support) for i in simple_idx]
    basis = [start / np.linalg.norm(start)]
    queue = [basis[0]]
    while queue:
        w = queue.pop(0)
        for op in raise_ops:
            u = op @ w
            for b in basis:
                u = u - np.vdot(b, u) * b
            nu = np.linalg.norm(u)
            if nu > _GS_TOL * max(1.0, np.linalg.norm(op @ w)):
                u = u / nu
                for b in basis:  # second pass for stability
                    u = u - np.vdot(b, u) * b
                u = u / np.linalg.norm(u)
                basis.append(u)
                queue.append(u)
        if len(basis) > dim:
            break
    if len(basis) != dim:
        raise InvariantError(f"generated {len(basis)} vectors, expected dimension {dim}")
    q = np.array(basis).T
    r = np.empty((frame.dim, dim, dim), dtype=complex)
    for a in range(frame.dim):
        op = tp.operator(tp.rot[a], support, support)
        r[a] = q.conj().T @ (op @ q)
    sw = tp.weights[support]
    weights = []
    for col in q.T:
        t = int(np.argmax(np.abs(col)))
        weights.append(tuple(int(c) for c in sw[t]))
    return IrrepMatrices(tuple(lam), dim, r, tuple(weights), frame)


def build_irrep(datum: RootDatum, lam, cap: int = IRREP_CAP) -> IrrepMatrices:
    """Unitary module with lowest weight -lam, as anti-hermitian matrices R_a."""
    lam = tuple(lam)
    if len(lam) != datum.rank or any(int(c) != c or c < 0 for c in lam):
        raise DomainError(f"{lam} is not a dominant integral weight of {datum.spec.name}")
    return _build_irrep(datum, tuple(int(c) for c in lam), int(cap))


def _pairwise(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """out[a, b] = x[a] @ y[b] as one batched matmul."""
    return np.matmul(x[:, None], y[None, :])


def irrep_residuals(irrep: IrrepMatrices) -> dict:
    r, f = irrep.R, irrep.frame.f
    rr = _pairwise(r, r)
    comm = rr - rr.transpose(1, 0, 2, 3)
    target = np.tensordot(f, r, axes=([2], [0]))
    cas = rr[np.arange(len(r)), np.arange(len(r))].sum(axis=0)
    d = irrep.frame.datum
    lam = irrep.lam
    from .cartan import ip

    value = float(ip(d, lam, lam) + 2 * ip(d, lam, d.rho))
    return {
        "bracket": float(np.max(np.abs(comm - target))),
        "antihermitian": float(np.max(np.abs(r + r.conj().transpose(0, 2, 1)))),
        "casimir": float(np.max(np.abs(cas + value * np.eye(irrep.dim)))),
    }


# --------------------------------------------------------------------------
# spinors


def _chirality(gammas: list[np.ndarray]) -> np.ndarray:
    p = np.eye(gammas[0].shape[0], dtype=complex)
    for g in gammas:
        p = p @ g
    if np.allclose(p @ p, -np.eye(len(p))):
        p = 1j * p
    return p


@dataclass(frozen=True, eq=False)
class SpinorModule:
    psi: np.ndarray  # (d, s, s) hermitian Clifford generators
    grading: np.ndarray
    sigma: np.ndarray  # (d, s, s)
    volume: np.ndarray | None  # self-adjoint volume element for odd d
    frame: OrthonormalFrame

    @property
    def dim(self) -> int:
        return self.psi.shape[1]

    def clifford(self, x) -> np.ndarray:
        return np.einsum("a,aij->ij", np.asarray(x), self.psi)


def sigma_from_psi(f: np.ndarray, psi) -> np.ndarray:
    """sigma_a = -1/4 f_bc^a psi^b psi^c."""
    if sp.issparse(psi[0]):
        d = f.shape[0]
        out = []
        for a in range(d):
            acc = None
            for b, c in zip(*np.nonzero(f[:, :, a])):
                term = (-0.25 * f[b, c, a]) * (psi[b] @ psi[c])
                acc = term if acc is None else acc + term
            out.append(acc.tocsr())
        return out
    return -0.25 * np.tensordot(f, _pairwise(psi, psi), axes=([0, 1], [0, 1]))


@lru_cache(maxsize=None)
def _build_spinors(datum: RootDatum) -> SpinorModule:
    frame = build_frame(datum)
    d = frame.dim
    if d % 2 == 0:
        gam = clifford_gammas(d)
        psi = np.array(gam)
        grading = _chirality(gam)
        volume = None
    else:
        gam = clifford_gammas(d + 1)
        psi = np.array(gam[:d])
        grading = _chirality(gam)
        volume = _chirality(gam[:d])
    return SpinorModule(psi, grading, sigma_from_psi(frame.f, psi), volume, frame)


def build_spinors(datum: RootDatum) -> SpinorModule:
    """Graded irreducible Cliff(g*)-module with the induced g-action sigma."""
    return _build_spinors(datum)


def spinor_residuals(s: SpinorModule) -> dict:
    psi, sig, f = s.psi, s.sigma, s.frame.f
    d = len(psi)
    eye = np.eye(s.dim)
    anti = _pairwise(psi, psi)
    anti = anti + anti.transpose(1, 0, 2, 3)
    anti[np.arange(d), np.arange(d)] -= 2 * eye
    ss = _pairwise(sig, sig)
    comm = ss - ss.transpose(1, 0, 2, 3)
    mixed = _pairwise(sig, psi) - _pairwise(psi, sig).transpose(1, 0, 2, 3)
    odd = s.grading @ psi + psi @ s.grading
    return {
        "clifford": float(np.max(np.abs(anti))),
        "odd": float(np.max(np.abs(odd))),
        "sigma_bracket": float(np.max(np.abs(comm - np.tensordot(f, sig, axes=([2], [0]))))),
        "intertwining": float(np.max(np.abs(mixed - np.tensordot(f.transpose(1, 2, 0), psi, axes=([2], [0]))))),
    }


# --------------------------------------------------------------------------
# truncated loop spinors


@dataclass(frozen=True, eq=False)
class TruncatedLoopClifford:
    """Modes psi^a(m), |m| <= N, on S(0) (x) exterior algebra of the positive modes.

    psi^a(m) for m > 0 creates energy m; psi^a(-m) annihilates the vacuum
    line S(0) (x) 1.
    """

    N: int
    frame: OrthonormalFrame
    psi: dict  # (a, m) -> sparse matrix
    energy: np.ndarray  # diagonal of the energy operator
    grading: np.ndarray  # diagonal parity of the Fock factor times S(0) grading (dense)
    _sigma: dict

    @property
    def dim(self) -> int:
        return len(self.energy)

    def sigma(self, a: int, m: int) -> sp.csr_matrix:
        key = (a, m)
        if key not in self._sigma:
            f = self.frame.f
            acc = sp.csr_matrix((self.dim, self.dim), dtype=complex)
            n = self.N
            for p in range(max(-n, m - n), min(n, m + n) + 1):
                q = m - p
                for b, c in zip(*np.nonzero(f[:, :, a])):
                    acc = acc + (-0.25 * f[b, c, a]) * (self.psi[(b, p)] @ self.psi[(c, q)])
            self._sigma[key] = acc.tocsr()
        return self._sigma[key]

    def window(self, emax: float) -> np.ndarray:
        """Indices of states with energy <= emax."""
        return np.nonzero(self.energy <= emax + 1e-9)[0]

    def dirac(self) -> sp.csr_matrix:
        """(1/3) sum_m sigma_a(m) psi^a(-m): the Dirac operator with trivial H."""
        acc = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for m in range(-self.N, self.N + 1):
            for a in range(self.frame.dim):
                acc = acc + self.sigma(a, m) @ self.psi[(a, -m)]
        return (acc / 3).tocsr()


def build_loop_spinors(datum: RootDatum, N: int) -> TruncatedLoopClifford:
    frame = build_frame(datum)
    d = frame.dim
    if N < 0 or d * (2 * N + 1) > LOOP_CAP:
        raise CapExceededError(f"d(2N+1) = {d * (2 * N + 1)} exceeds the cap {LOOP_CAP}")
    s0 = build_spinors(datum)
    modes = d * N
    fock = 2**modes
    eye_f = sp.identity(fock, dtype=complex, format="csr")
    z = sp.csr_matrix(np.diag([1.0, -1.0]).astype(complex))
    lower = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))  # |1> -> |0>
    one = sp.identity(2, dtype=complex, format="csr")
    g0 = sp.csr_matrix(s0.grading)

    def kron_all(ms):
        out = sp.identity(1, dtype=complex, format="csr")
        for x in ms:
            out = sp.kron(out, x, format="csr")
        return out

    psi = {}
    for a in range(d):
        psi[(a, 0)] = sp.kron(sp.csr_matrix(s0.psi[a]), eye_f, format="csr")
    energy_f = np.zeros(fock)
    slot = 0
    for m in range(1, N + 1):
        for a in range(d):
            ann = kron_all([z] * slot + [lower] + [one] * (modes - slot - 1))
            c = sp.kron(g0, ann, format="csr")
            psi[(a, -m)] = (np.sqrt(2) * c).tocsr()
            psi[(a, m)] = (np.sqrt(2) * c.conj().T).tocsr()
            bits = (np.arange(fock) >> (modes - 1 - slot)) & 1
            energy_f += m * bits
            slot += 1
    energy = np.kron(np.ones(s0.dim), energy_f)
    par_f = np.array([(-1) ** bin(i).count("1") for i in range(fock)], dtype=float)
    grading = np.kron(np.diag(s0.grading).real, par_f)
    return TruncatedLoopClifford(N, frame, psi, energy, grading, {})
