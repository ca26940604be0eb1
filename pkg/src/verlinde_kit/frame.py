"""Real orthonormal frames and structure constants.

Each compact simple algebra is realised by anti-hermitian matrices in a
faithful module W (defining module for A and C, spin module for B and D,
the 7-dimensional module for G2). From that realisation we extract a
Cartan subalgebra, the roots, and a frame

    xi_1 .. xi_l               (orthonormal Cartan directions)
    X_a1, Y_a1, X_a2, Y_a2 ..  (one real pair per positive root)

orthonormal for the basic form. ``xi_j`` acts on a vector of weight ``w``
by ``i * w[j]`` where ``w`` is written in "h-coordinates" (components along
the orthonormal Cartan directions). Root vectors are

    E_alpha = (X_alpha - i Y_alpha) / sqrt(2),    E_{-alpha} = conj(E_alpha),

so that the complex bilinear extension of the basic form pairs them to 1.
Structure constants are ``f[a, b, c] = <[xi_a, xi_b], xi_c>``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cartan import AlgebraSpec, RootDatum, build_root_datum
from .errors import InvariantError

_SEED = 20240917
_TOL = 1e-8


# --------------------------------------------------------------------------
# defining matrices


def clifford_gammas(m: int) -> list[np.ndarray]:
    """``m`` anticommuting hermitian involutions of size 2**(m // 2)."""
    if m == 0:
        return []
    n = m // 2 if m % 2 == 0 else (m - 1) // 2
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    eye = np.eye(2, dtype=complex)

    def kron_all(ms):
        out = np.ones((1, 1), dtype=complex)
        for a in ms:
            out = np.kron(out, a)
        return out

    gammas = []
    for k in range(n):
        pre = [z] * k
        post = [eye] * (n - k - 1)
        gammas.append(kron_all(pre + [x] + post))
        gammas.append(kron_all(pre + [y] + post))
    if m % 2 == 1:
        gammas.append(kron_all([z] * n) if n else np.ones((1, 1), dtype=complex))
    return gammas


def _su(n: int) -> list[np.ndarray]:
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[i, j], a[j, i] = 1, -1
            basis.append(a)
            b = np.zeros((n, n), dtype=complex)
            b[i, j] = b[j, i] = 1j
            basis.append(b)
    for i in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[i, i], h[i + 1, i + 1] = 1j, -1j
        basis.append(h)
    return basis


def _u_basis(n: int) -> list[np.ndarray]:
    basis = _su(n)
    basis.append(1j * np.eye(n, dtype=complex))
    return basis


def _nullspace(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    _, s, vh = np.linalg.svd(mat)
    scale = max(s[0] if s.size else 1.0, 1.0)
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].T


def _subalgebra(basis: list[np.ndarray], constraint) -> list[np.ndarray]:
    """Real span of ``basis`` cut out by the real-linear map ``constraint``."""
    cols = []
    for b in basis:
        c = constraint(b).ravel()
        cols.append(np.concatenate([c.real, c.imag]))
    null = _nullspace(np.array(cols).T)
    return [sum(v[k] * basis[k] for k in range(len(basis))) for v in null.T]


def _sp(n: int) -> list[np.ndarray]:
    j = np.zeros((2 * n, 2 * n), dtype=complex)
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return _subalgebra(_u_basis(2 * n), lambda x: x.T @ j + j @ x)


def _spin(m: int) -> list[np.ndarray]:
    g = clifford_gammas(m)
    return [0.5 * g[i] @ g[j] for i in range(m) for j in range(i + 1, m)]


# the G2 three-form on R^7 (1-based index triples with signs)
_PHI = ((1, 2, 3, 1), (1, 4, 5, 1), (1, 6, 7, 1), (2, 4, 6, 1), (2, 5, 7, -1), (3, 4, 7, -1), (3, 5, 6, -1))


def _g2() -> list[np.ndarray]:
    phi = np.zeros((7, 7, 7))
    for i, j, k, s in _PHI:
        for p in itertools.permutations(range(3)):
            idx = (i - 1, j - 1, k - 1)
            sign = s * np.linalg.det(np.eye(3)[list(p)])
            phi[idx[p[0]], idx[p[1]], idx[p[2]]] = sign
    so7 = []
    for i in range(7):
        for j in range(i + 1, 7):
            a = np.zeros((7, 7), dtype=complex)
            a[i, j], a[j, i] = 1, -1
            so7.append(a)

    def act(x):
        x = x.real
        return (
            np.einsum("li,ljk->ijk", x, phi)
            + np.einsum("lj,ilk->ijk", x, phi)
            + np.einsum("lk,ijl->ijk", x, phi)
        ).astype(complex)

    return _subalgebra(so7, act)


def defining_matrices(spec: AlgebraSpec) -> list[np.ndarray]:
    """A real basis (not orthonormal) of a faithful anti-hermitian realisation."""
    s, n = spec.series, spec.rank
    if s == "A" or n == 1:
        return _su(n + 1)
    if s == "C":
        return _sp(n)
    if s == "B":
        return _spin(2 * n + 1)
    if s == "D":
        return _spin(2 * n)
    if s == "G":
        return _g2()
    raise AssertionError(s)


# --------------------------------------------------------------------------
# frame


@dataclass(frozen=True, eq=False)
class OrthonormalFrame:
    """Orthonormal frame of a compact simple algebra with its structure constants."""

    datum: RootDatum
    basis_labels: tuple
    matrices: np.ndarray  # (d, n, n) anti-hermitian realisation of the frame
    f: np.ndarray  # (d, d, d)
    roots_h: np.ndarray  # (npos, l) positive roots in h-coordinates
    simple_h: np.ndarray  # (l, l) simple roots in h-coordinates, Bourbaki order
    coroot_h: np.ndarray  # (l, l) rows: simple coroots in h-coordinates
    omega_h: np.ndarray  # (l, l) rows: fundamental weights in h-coordinates

    @property
    def dim(self) -> int:
        return self.f.shape[0]

    @property
    def rank(self) -> int:
        return self.datum.rank

    def ad(self, a: int) -> np.ndarray:
        """Matrix of ad(xi_a) on frame coordinates: column b holds [xi_a, xi_b]."""
        return self.f[a].T

    def ad_of(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("a,abc->cb", np.asarray(x), self.f)

    def root_vector(self, index: int, positive: bool = True) -> np.ndarray:
        """E_alpha (or E_{-alpha}) as a complex coordinate vector in the frame."""
        v = np.zeros(self.dim, dtype=complex)
        x = self.rank + 2 * index
        v[x] = 1 / np.sqrt(2)
        v[x + 1] = (-1j if positive else 1j) / np.sqrt(2)
        return v

    def to_omega(self, w) -> np.ndarray:
        """h-coordinates to fundamental-weight coordinates."""
        return self.coroot_h @ np.asarray(w, dtype=float)

    def from_omega(self, lam) -> np.ndarray:
        """Fundamental-weight coordinates to h-coordinates."""
        return self.omega_h.T @ np.asarray(lam, dtype=float)

    def rho_h(self) -> np.ndarray:
        return self.from_omega(self.datum.rho)

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of two coordinate vectors (real or complex)."""
        return np.einsum("a,b,abc->c", x, y, self.f)


def _orthonormalize(vecs: np.ndarray) -> np.ndarray:
    """Rows orthonormal spanning the same space."""
    q, r = np.linalg.qr(vecs.T)
    keep = np.abs(np.diag(r)) > 1e-10
    return q[:, keep].T


def _vec(m: np.ndarray) -> np.ndarray:
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


@lru_cache(maxsize=None)
def _build_frame(spec: AlgebraSpec) -> OrthonormalFrame:
    datum = build_root_datum(spec)
    raw = defining_matrices(spec)
    n = raw[0].shape[0]
    basis_vecs = _orthonormalize(np.array([_vec(m) for m in raw]))
    d = basis_vecs.shape[0]
    if d != datum.dim:
        raise InvariantError(f"realisation of {spec} has dimension {d}, expected {datum.dim}")

    def unvec(v):
        return (v[: n * n] + 1j * v[n * n :]).reshape(n, n)

    base = np.array([unvec(v) for v in basis_vecs])
    comm = np.einsum("aij,bjk->abik", base, base)
    comm = comm - comm.transpose(1, 0, 2, 3)
    # f0[a,b,c] = <[B_a,B_b], B_c>_0 with <X,Y>_0 = -Re tr(XY)
    f0 = -np.einsum("abij,cji->abc", comm, base).real

    rng = np.random.default_rng(_SEED)
    l = datum.rank
    ad0 = lambda x: np.einsum("a,abc->cb", x, f0)
    x0 = rng.standard_normal(d)
    cartan = _orthonormalize(_nullspace(ad0(x0), 1e-9).T)
    if cartan.shape[0] != l:
        raise InvariantError(f"centraliser of a generic element has dimension {cartan.shape[0]}, expected {l}")
    ad_h = [ad0(h) for h in cartan]
    gen = rng.standard_normal(l) + 0.1
    mat = sum(g * a for g, a in zip(gen, ad_h))
    evals, evecs = np.linalg.eigh(1j * mat)
    pos_vecs, pos_roots = [], []
    for e, v in zip(evals, evecs.T):
        if -e > 1e-6:  # ad(H) v = i alpha(H) v with alpha(H) = -e
            alpha = np.array([np.real(np.vdot(v, -1j * (a @ v))) for a in ad_h])
            pos_vecs.append(v)
            pos_roots.append(alpha)
    pos_roots = np.array(pos_roots)
    npos = len(datum.positive_roots)
    if len(pos_roots) != npos:
        raise InvariantError(f"found {len(pos_roots)} positive roots, expected {npos}")

    # basic normalisation: long roots have square length 2
    c = max(np.dot(r, r) for r in pos_roots) / 2
    pos_roots = pos_roots / np.sqrt(c)

    def is_sum(r):
        for a in pos_roots:
            for b in pos_roots:
                if np.allclose(a + b, r, atol=1e-6):
                    return True
        return False

    simple = [i for i, r in enumerate(pos_roots) if not is_sum(r)]
    if len(simple) != l:
        raise InvariantError("could not isolate simple roots")
    sr = pos_roots[simple]
    a_num = np.array([[2 * sr[i] @ sr[j] / (sr[i] @ sr[i]) for j in range(l)] for i in range(l)])
    target = np.array(datum.cartan_matrix, dtype=float)
    for perm in itertools.permutations(range(l)):
        if np.allclose(a_num[np.ix_(perm, perm)], target, atol=1e-6):
            break
    else:
        raise InvariantError("numerical Cartan matrix does not match the exact one")
    simple_h = sr[list(perm)]
    coroot_h = np.array([2 * s / (s @ s) for s in simple_h])
    omega_h = np.linalg.inv(coroot_h).T  # rows: omega_i, <omega_i, alpha_j^vee> = delta_ij

    exact_index = {r: i for i, r in enumerate(datum.positive_roots)}
    order = [None] * npos
    for k, r in enumerate(pos_roots):
        om = coroot_h @ r
        key = tuple(int(round(x)) for x in om)
        if not np.allclose(om, key, atol=1e-6) or key not in exact_index:
            raise InvariantError(f"numerical root {om} not in the exact root system")
        order[exact_index[key]] = k

    rows = list(cartan)
    for k in order:
        v = pos_vecs[k] / np.linalg.norm(pos_vecs[k])
        rows.append(np.sqrt(2) * v.real)
        rows.append(-np.sqrt(2) * v.imag)
    p = np.array(rows)
    if not np.allclose(p @ p.T, np.eye(d), atol=1e-9):
        raise InvariantError("frame is not orthonormal")
    frame_mats = np.einsum("ak,kij->aij", p, base) / np.sqrt(c)
    comm = np.einsum("aij,bjk->abik", frame_mats, frame_mats)
    comm = comm - comm.transpose(1, 0, 2, 3)
    f = -c * np.einsum("abij,cji->abc", comm, frame_mats).real
    f[np.abs(f) < 1e-14] = 0.0

    labels = [f"h{j + 1}" for j in range(l)]
    for i in range(npos):
        tag = "".join(str(x) for x in datum.positive_roots_simple[i])
        labels += [f"X{tag}", f"Y{tag}"]
    return OrthonormalFrame(
        datum=datum,
        basis_labels=tuple(labels),
        matrices=frame_mats,
        f=f,
        roots_h=pos_roots[order],
        simple_h=simple_h,
        coroot_h=coroot_h,
        omega_h=omega_h,
    )


def build_frame(spec) -> OrthonormalFrame:
    """Orthonormal frame for an :class:`AlgebraSpec`, name, or :class:`RootDatum`."""
    if isinstance(spec, RootDatum):
        spec = spec.spec
    elif isinstance(spec, str):
        spec = AlgebraSpec.parse(spec)
    return _build_frame(spec)


def frame_residuals(frame: OrthonormalFrame) -> dict:
    """Worst-case residual of each structure-constant identity, keyed by name."""
    f = frame.f
    anti = max(
        np.max(np.abs(f + f.transpose(1, 0, 2))),
        np.max(np.abs(f + f.transpose(0, 2, 1))),
    )
    # sum_e f_abe f_ecd + cyclic(a,b,c)
    jac = (
        np.einsum("abe,ecd->abcd", f, f)
        + np.einsum("bce,ead->abcd", f, f)
        + np.einsum("cae,ebd->abcd", f, f)
    )
    cas = np.einsum("bca,adc->bd", f, f)
    h = frame.datum.h_dual
    return {
        "antisymmetry": float(anti),
        "jacobi": float(np.max(np.abs(jac))),
        "casimir": float(np.max(np.abs(cas - 2 * h * np.eye(frame.dim)))),
    }
