"""Exact root data for simple Lie algebras of rank <= 4.

Everything here is exact: weights and roots are written in the basis of
fundamental weights (so integral weights have integer coordinates) and
inner products use the rational Gram matrix of the basic form, normalised
so that long roots have square length 2.

Conventions
-----------
* ``cartan_matrix[i][j] = <alpha_i^vee, alpha_j>`` (Bourbaki labelling).
* The coordinates of a vector ``mu`` are ``mu_i = <mu, alpha_i^vee>``; the
  simple root ``alpha_j`` therefore has coordinates ``column j`` of the
  Cartan matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import sympy

from .errors import ConfigurationError, DomainError

SERIES = ("A", "B", "C", "D", "G")
MAX_RANK = 4

Number = Union[int, Fraction]


@dataclass(frozen=True)
class AlgebraSpec:
    """A simple Lie algebra named by Cartan series and rank."""

    series: str
    rank: int

    def __post_init__(self):
        s = str(self.series).upper()
        object.__setattr__(self, "series", s)
        if s not in SERIES:
            raise ConfigurationError(f"unknown series {self.series!r}; expected one of {SERIES}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ConfigurationError(f"rank must be a positive integer, got {self.rank!r}")
        if self.rank > MAX_RANK:
            raise ConfigurationError(f"rank {self.rank} exceeds the cap of {MAX_RANK}")
        if s == "D" and self.rank < 3:
            raise ConfigurationError("series D requires rank >= 3")
        if s == "G" and self.rank != 2:
            raise ConfigurationError("series G requires rank 2")

    @classmethod
    def parse(cls, name: str) -> "AlgebraSpec":
        name = name.strip()
        if len(name) < 2 or not name[1:].isdigit():
            raise ConfigurationError(f"cannot parse algebra name {name!r} (expected e.g. 'A2')")
        return cls(name[0], int(name[1:]))

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Weight:
    """Integral weight, coordinates on the fundamental weights."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.coords, other)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coords, other)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def __repr__(self):
        return f"Weight{self.coords}"

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    @classmethod
    def fundamental(cls, rank: int, i: int) -> "Weight":
        """The i-th fundamental weight, 1-based as in Bourbaki."""
        return cls(tuple(1 if j == i - 1 else 0 for j in range(rank)))


def _cartan_matrix(spec: AlgebraSpec) -> list[list[int]]:
    n = spec.rank
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    s = spec.series
    if s == "B" and n >= 2:
        a[n - 1][n - 2] = -2
    elif s == "C" and n >= 2:
        a[n - 2][n - 1] = -2
    elif s == "D":
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif s == "G":
        a = [[2, -3], [-1, 2]]
    return a


def _half_lengths(spec: AlgebraSpec) -> list[Fraction]:
    """Half square-lengths of the simple roots (long roots -> 1)."""
    n = spec.rank
    one, half = Fraction(1), Fraction(1, 2)
    if spec.series == "B" and n >= 2:
        return [one] * (n - 1) + [half]
    if spec.series == "C" and n >= 2:
        return [half] * (n - 1) + [one]
    if spec.series == "G":
        return [Fraction(1, 3), one]
    return [one] * n


@dataclass(frozen=True, eq=False)
class RootDatum:
    """Root datum of a simple Lie algebra in fundamental-weight coordinates."""

    spec: AlgebraSpec
    cartan_matrix: tuple
    half_lengths: tuple
    gram: tuple
    simple_roots: tuple
    simple_coroots: tuple
    fundamental_weights: tuple
    positive_roots: tuple
    positive_roots_simple: tuple
    rho: tuple
    theta: tuple
    h_dual: int
    comarks: tuple = field(default=())

    def __eq__(self, other):
        return isinstance(other, RootDatum) and other.spec == self.spec

    def __hash__(self):
        return hash(("RootDatum", self.spec))

    def __repr__(self):
        return f"RootDatum({self.spec.name}, h_dual={self.h_dual})"

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    def root_height(self, index: int) -> int:
        return sum(self.positive_roots_simple[index])

    def pairing_theta(self, mu: Sequence[Number]) -> Number:
        """<mu, theta>; equals sum of comarks times coordinates."""
        return sum(c * m for c, m in zip(self.comarks, mu))


@lru_cache(maxsize=None)
def _build(spec: AlgebraSpec) -> RootDatum:
    if spec.series in ("B", "C") and spec.rank == 1:
        # B1 = C1 = A1 under the basic normalisation
        base = _build(AlgebraSpec("A", 1))
        return RootDatum(**{**base.__dict__, "spec": spec})
    n = spec.rank
    a = _cartan_matrix(spec)
    d = _half_lengths(spec)
    # G = diag(d) A^{-1}, the Gram matrix on fundamental weights
    a_inv = sympy.Matrix(a).inv()
    gram = tuple(
        tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) * d[i] for x in a_inv.row(i))
        for i in range(n)
    )
    simple_roots = tuple(tuple(a[k][j] for k in range(n)) for j in range(n))
    simple_coroots = tuple(tuple(Fraction(c) / d[j] for c in simple_roots[j]) for j in range(n))
    fundamental = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))

    # positive roots in simple-root coordinates, grown by root strings
    levels = [[tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]]
    found = set(levels[0])
    while levels[-1]:
        nxt = []
        for beta in levels[-1]:
            for i in range(n):
                pair = sum(a[i][j] * beta[j] for j in range(n))  # <beta, alpha_i^vee>
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                if p - pair > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        levels.append(nxt)
    pos_simple = [r for lev in levels for r in lev]
    pos_simple.sort(key=lambda r: (sum(r), tuple(-x for x in r)))
    pos = tuple(tuple(sum(a[k][j] * r[j] for j in range(n)) for k in range(n)) for r in pos_simple)
    theta_idx = max(range(len(pos)), key=lambda i: sum(pos_simple[i]))
    theta = pos[theta_idx]
    rho = (1,) * n
    rho_theta = sum(rho[i] * gram[i][j] * theta[j] for i in range(n) for j in range(n))
    if rho_theta.denominator != 1:
        raise AssertionError("<rho, theta> should be an integer")
    comarks = tuple(sum(gram[i][j] * theta[j] for j in range(n)) for i in range(n))
    return RootDatum(
        spec=spec,
        cartan_matrix=tuple(tuple(r) for r in a),
        half_lengths=tuple(d),
        gram=gram,
        simple_roots=simple_roots,
        simple_coroots=simple_coroots,
        fundamental_weights=fundamental,
        positive_roots=pos,
        positive_roots_simple=tuple(pos_simple),
        rho=rho,
        theta=theta,
        h_dual=int(rho_theta) + 1,
        comarks=tuple(int(c) for c in comarks),
    )


def build_root_datum(spec: Union[AlgebraSpec, str]) -> RootDatum:
    """Root datum for ``spec`` (an :class:`AlgebraSpec` or a name like ``"G2"``)."""
    if isinstance(spec, str):
        spec = AlgebraSpec.parse(spec)
    if not isinstance(spec, AlgebraSpec):
        raise ConfigurationError(f"expected AlgebraSpec, got {type(spec).__name__}")
    return _build(spec)


def _vec(datum: RootDatum, mu) -> tuple:
    v = tuple(mu)
    if len(v) != datum.rank:
        raise DomainError(f"vector of length {len(v)} does not live in the rank-{datum.rank} weight space")
    return v


def ip(datum: RootDatum, mu, nu) -> Fraction:
    """Basic inner product of two vectors given in fundamental-weight coordinates."""
    mu = _vec(datum, mu)
    nu = _vec(datum, nu)
    g = datum.gram
    n = datum.rank
    return Fraction(sum(mu[i] * g[i][j] * nu[j] for i in range(n) for j in range(n)))


def norm2(datum: RootDatum, mu) -> Fraction:
    return ip(datum, mu, mu)


# --------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    """Element of the finite Weyl group acting on fundamental-weight coordinates.

    ``matrix`` acts on column vectors of coordinates; it is orthogonal for the
    Gram matrix of the basic form.
    """

    matrix: tuple
    length: int
    word: tuple

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 else 1

    def apply(self, mu) -> tuple:
        return tuple(sum(row[j] * mu[j] for j in range(len(mu))) for row in self.matrix)


def simple_reflection_matrix(datum: RootDatum, i: int) -> tuple:
    n = datum.rank
    col = datum.simple_roots[i]
    return tuple(
        tuple((1 if r == c else 0) - (col[r] if c == i else 0) for c in range(n)) for r in range(n)
    )


def _matmul(x, y):
    n = len(x)
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def _weyl_group(datum: RootDatum) -> tuple:
    n = datum.rank
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    gens = [simple_reflection_matrix(datum, i) for i in range(n)]
    seen = {ident: WeylElement(ident, 0, ())}
    queue = deque([ident])
    while queue:
        m = queue.popleft()
        el = seen[m]
        for i, s in enumerate(gens):
            p = _matmul(s, m)
            if p not in seen:
                seen[p] = WeylElement(p, el.length + 1, (i,) + el.word)
                queue.append(p)
    return tuple(seen.values())


def weyl_elements(datum: RootDatum) -> list[WeylElement]:
    """All elements of the Weyl group, identity first, sorted by length (BFS order)."""
    return list(_weyl_group(datum))


def longest_element(datum: RootDatum) -> WeylElement:
    return max(_weyl_group(datum), key=lambda w: w.length)


def reflect(datum: RootDatum, mu, i: int) -> tuple:
    """Simple reflection s_i applied to ``mu``."""
    c = mu[i]
    col = datum.simple_roots[i]
    return tuple(m - c * a for m, a in zip(mu, col))


def dominant_reduce(datum: RootDatum, mu) -> tuple[tuple, int, bool]:
    """Return (dominant conjugate, number of reflections used, lies-on-a-wall)."""
    mu = tuple(_vec(datum, mu))
    steps = 0
    while True:
        for i, c in enumerate(mu):
            if c < 0:
                mu = reflect(datum, mu, i)
                steps += 1
                break
        else:
            return mu, steps, any(c == 0 for c in mu)


def dominant_conjugate(datum: RootDatum, mu) -> tuple[tuple, int]:
    """Dominant Weyl conjugate of ``mu`` and the sign of the conjugating element.

    The sign is 0 exactly when ``mu`` lies on a wall (its stabiliser is
    non-trivial), in which case the determinant is not well defined.
    """
    dom, steps, wall = dominant_reduce(datum, mu)
    if wall:
        return dom, 0
    return dom, -1 if steps % 2 else 1


def weyl_orbit(datum: RootDatum, mu) -> list[tuple]:
    mu = tuple(mu)
    seen = {mu}
    queue = deque([mu])
    while queue:
        v = queue.popleft()
        for i in range(datum.rank):
            if v[i] != 0:
                w = reflect(datum, v, i)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return sorted(seen)


# --------------------------------------------------------------------------
# Representations


def _check_dominant(datum: RootDatum, lam) -> tuple:
    lam = tuple(_vec(datum, lam))
    if any(int(c) != c for c in lam) or any(c < 0 for c in lam):
        raise DomainError(f"{lam} is not a dominant integral weight")
    return tuple(int(c) for c in lam)


def irrep_dimension(datum: RootDatum, lam) -> int:
    """Weyl dimension formula, evaluated exactly."""
    lam = _check_dominant(datum, lam)
    shifted = tuple(c + 1 for c in lam)
    num = Fraction(1)
    for alpha in datum.positive_roots:
        num *= ip(datum, shifted, alpha) / ip(datum, datum.rho, alpha)
    assert num.denominator == 1
    return int(num)


def weight_multiplicities(datum: RootDatum, lam) -> dict[Weight, int]:
    """All weights of the irreducible module of highest weight ``lam`` (Freudenthal)."""
    lam = _check_dominant(datum, lam)
    dominant = _dominant_multiplicities(datum, lam)
    out: dict[Weight, int] = {}
    for mu, m in dominant.items():
        for nu in weyl_orbit(datum, mu):
            out[Weight(nu)] = m
    return dict(sorted(out.items(), key=lambda kv: kv[0].coords))


@lru_cache(maxsize=256)
def _dominant_multiplicities(datum: RootDatum, lam: tuple) -> dict:
    rho = datum.rho
    pos = datum.positive_roots

    def shifted_norm(mu):
        v = tuple(m + r for m, r in zip(mu, rho))
        return ip(datum, v, v)

    def depth(mu):
        return ip(datum, tuple(a - b for a, b in zip(lam, mu)), rho)

    # dominant weights below lam are connected by positive-root steps
    dom = {lam}
    queue = deque([lam])
    while queue:
        mu = queue.popleft()
        for alpha in pos:
            nu = tuple(m - a for m, a in zip(mu, alpha))
            if all(c >= 0 for c in nu) and nu not in dom:
                dom.add(nu)
                queue.append(nu)
    order = sorted(dom, key=depth)
    top = shifted_norm(lam)
    mult = {lam: 1}
    for mu in order[1:]:
        total = Fraction(0)
        for alpha in pos:
            j = 1
            while True:
                nu = tuple(m + j * a for m, a in zip(mu, alpha))
                d, _, _ = dominant_reduce(datum, nu)
                m_nu = mult.get(d, 0)
                if not m_nu:
                    break
                total += m_nu * ip(datum, nu, alpha)
                j += 1
        den = top - shifted_norm(mu)
        value = 2 * total / den
        assert value.denominator == 1
        if value:
            mult[mu] = int(value)
    return mult


def conjugate_weight(datum: RootDatum, lam) -> tuple:
    """-w0(lam): highest weight of the dual module."""
    w0 = longest_element(datum)
    return tuple(-c for c in w0.apply(tuple(lam)))


def as_fraction_vector(mu: Iterable) -> tuple:
    return tuple(Fraction(c) for c in mu)
