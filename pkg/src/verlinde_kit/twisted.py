"""Twisted affine data from a diagram automorphism of a simply laced algebra.

Vectors live in the weight space of the base algebra g (fundamental-weight
coordinates of g) and use the basic form of g. The invariant subalgebra
g_ = g^eps has Cartan subalgebra the eps-fixed part of t; its roots are the
reduced restrictions of the roots of g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .cartan import AlgebraSpec, RootDatum, Weight, _cartan_matrix, build_root_datum, ip
from .errors import ConfigurationError, DomainError, InvariantError


@dataclass(frozen=True, eq=False)
class InvariantSubalgebra:
    """Root data of g_ = g^eps, embedded in the weight space of g."""

    type_name: str
    cartan_matrix: tuple
    simple_roots: tuple  # Bourbaki order, ambient coordinates
    positive_roots: tuple
    fundamental_weights: tuple

    @property
    def rank(self) -> int:
        return len(self.simple_roots)


@dataclass(frozen=True, eq=False)
class TwistedAffineDatum:
    base: RootDatum
    r: int
    permutation: tuple
    invariant: InvariantSubalgebra
    theta_under: tuple
    a0: int
    rho_under: tuple

    @property
    def parity_coupled(self) -> bool:
        """True for g = su(2l+1), where the lattice couples level parity and spin."""
        return self.base.spec.series == "A" and self.base.rank % 2 == 0


def _automorphism(spec: AlgebraSpec, r: int) -> tuple:
    n = spec.rank
    if spec.series == "A" and r == 2 and n >= 2:
        return tuple(n - 1 - i for i in range(n))
    if spec.series == "D" and r == 2:
        p = list(range(n))
        p[n - 2], p[n - 1] = p[n - 1], p[n - 2]
        return tuple(p)
    if spec.series == "D" and n == 4 and r == 3:
        return (2, 1, 3, 0)
    raise ConfigurationError(f"no diagram automorphism of order {r} for {spec.name} in scope")


def _restrict(perm: tuple, r: int, v) -> tuple:
    out = [Fraction(0)] * len(v)
    cur = list(v)
    for _ in range(r):
        for i in range(len(v)):
            out[i] += Fraction(cur[i], r)
        nxt = [0] * len(v)
        for i in range(len(v)):
            nxt[perm[i]] = cur[i]
        cur = nxt
    return tuple(out)


def _orbit_size(perm: tuple, r: int, v) -> int:
    seen = {tuple(v)}
    cur = list(v)
    for _ in range(r):
        nxt = [0] * len(v)
        for i in range(len(v)):
            nxt[perm[i]] = cur[i]
        cur = nxt
        seen.add(tuple(cur))
    return len(seen)


# naming preference when Cartan matrices coincide (B2 = C2, B1 = A1)
def _preferred(spec: AlgebraSpec, r: int) -> str:
    if spec.series == "A":
        return "BAG" if spec.rank % 2 == 0 else "CBAG"
    return "GBC" if r == 3 else "BCAG"


def _identify(datum: RootDatum, simple: list, r: int) -> tuple[str, list]:
    n = len(simple)
    num = [[2 * ip(datum, simple[i], simple[j]) / ip(datum, simple[i], simple[i]) for j in range(n)] for i in range(n)]
    order = _preferred(datum.spec, r)
    for series in order:
        try:
            spec = AlgebraSpec(series, n)
        except ConfigurationError:
            continue
        target = _cartan_matrix(spec) if n > 1 else [[2]]
        for perm in itertools.permutations(range(n)):
            if all(num[perm[i]][perm[j]] == target[i][j] for i in range(n) for j in range(n)):
                name = spec.name if n > 1 else "A1"
                return name, [simple[p] for p in perm]
    raise InvariantError("invariant subalgebra has an unrecognised Cartan matrix")


@lru_cache(maxsize=None)
def _build_twisted(spec: AlgebraSpec, r: int) -> TwistedAffineDatum:
    datum = build_root_datum(spec)
    perm = _automorphism(spec, r)
    restricted = {}
    for alpha in datum.positive_roots:
        restricted.setdefault(_restrict(perm, r, alpha), []).append(alpha)
    rset = set(restricted)
    reduced = [b for b in restricted if tuple(x / 2 for x in b) not in rset]
    simple = []
    for i in range(datum.rank):
        b = _restrict(perm, r, datum.simple_roots[i])
        if b not in simple and b in reduced:
            simple.append(b)
        elif b not in simple:
            # half of a restricted root can not be simple here
            raise InvariantError("unexpected non-reduced simple restriction")
    name, simple = _identify(datum, simple, r)
    n = len(simple)
    cm = tuple(
        tuple(int(2 * ip(datum, simple[i], simple[j]) / ip(datum, simple[i], simple[i])) for j in range(n))
        for i in range(n)
    )
    m = sympy.Matrix(n, n, lambda j, k: sympy.Rational(2) * sympy.nsimplify(ip(datum, simple[j], simple[k]))
                     / sympy.nsimplify(ip(datum, simple[k], simple[k])))
    c = m.inv()
    fund = tuple(
        tuple(sum(Fraction(str(c[i, j])) * simple[j][t] for j in range(n)) for t in range(datum.rank))
        for i in range(n)
    )
    positive = tuple(sorted(reduced, key=lambda b: -sum(ip(datum, b, f) for f in fund)))
    rho_under = tuple(sum(b[t] for b in positive) / 2 for t in range(datum.rank))

    # weights of g/g_: restrictions of non-trivial orbits, plus fixed roots whose half restricts
    quotient = []
    for b, alphas in restricted.items():
        if any(_orbit_size(perm, r, a) > 1 for a in alphas):
            quotient.append(b)
        elif tuple(x / 2 for x in b) in rset:
            quotient.append(b)
    theta_under = max(quotient, key=lambda b: ip(datum, b, rho_under))
    a0 = 2 if (spec.series == "A" and spec.rank % 2 == 0) else 1
    tw = TwistedAffineDatum(
        base=datum,
        r=r,
        permutation=perm,
        invariant=InvariantSubalgebra(name, cm, tuple(simple), positive, fund),
        theta_under=theta_under,
        a0=a0,
        rho_under=rho_under,
    )
    _check(tw)
    return tw


def _check(tw: TwistedAffineDatum) -> None:
    d = tw.base
    th = tw.theta_under
    if ip(d, th, th) != Fraction(2 * tw.a0, tw.r):
        raise InvariantError("theta_under has the wrong length")
    short = tuple(x / tw.a0 for x in th)
    lengths = {ip(d, b, b) for b in tw.invariant.positive_roots}
    if short not in tw.invariant.positive_roots or ip(d, short, short) != min(lengths):
        raise InvariantError("theta_under / a0 is not a short root of the invariant subalgebra")
    if ip(d, tw.rho_under, th) + ip(d, th, th) / 2 != Fraction(d.h_dual, tw.r):
        raise InvariantError("twisted shift identity fails")


def build_twisted_datum(base, r: int) -> TwistedAffineDatum:
    """Twisted affine data for ``base`` (simply laced) and automorphism order ``r``."""
    if isinstance(base, str):
        base = AlgebraSpec.parse(base)
    if base.series not in ("A", "D"):
        raise ConfigurationError(f"{base.name} is not simply laced with a diagram automorphism in scope")
    if r not in (2, 3):
        raise ConfigurationError(f"automorphism order must be 2 or 3, got {r}")
    return _build_twisted(base, r)


def shift_identity(tw: TwistedAffineDatum) -> tuple[Fraction, Fraction]:
    """(<rho_|theta_> + theta_^2/2, h_dual / r); equal for every admissible datum."""
    d = tw.base
    lhs = ip(d, tw.rho_under, tw.theta_under) + ip(d, tw.theta_under, tw.theta_under) / 2
    return lhs, Fraction(d.h_dual, tw.r)


def twisted_alcove_records(tw: TwistedAffineDatum, k: int) -> list[dict]:
    """Dominant g_-weights at twisted level k, with the spin-parity bit."""
    if int(k) != k or k < 0:
        raise DomainError(f"level must be a non-negative integer, got {k!r}")
    d = tw.base
    bound = Fraction(k, tw.r)
    pair = [ip(d, f, tw.theta_under) for f in tw.invariant.fundamental_weights]
    ranges = [range(int(bound / p) + 1) for p in pair]
    out = []
    for a in itertools.product(*ranges):
        if sum(x * p for x, p in zip(a, pair)) > bound:
            continue
        parity = a[-1] % 2  # spin node is last in Bourbaki order for B_l
        if tw.parity_coupled and parity != k % 2:
            continue
        out.append({"weight": Weight(a), "pairing": sum(x * p for x, p in zip(a, pair)), "spin_parity": parity})
    out.sort(key=lambda rec: rec["weight"].coords)
    return out


def twisted_alcove_points(tw: TwistedAffineDatum, k: int) -> list[Weight]:
    return [rec["weight"] for rec in twisted_alcove_records(tw, k)]
