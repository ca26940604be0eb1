"""Truncated q-series for the Kac character of a level-k loop group module."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .affine import in_alcove
from .cartan import RootDatum, dominant_conjugate, ip, irrep_dimension, weight_multiplicities
from .errors import DomainError

_ZERO = 1e-12


@dataclass(frozen=True)
class TorusElement:
    """Torus element g given by the values x_i = omega_i(g) mod 1.

    A weight with coordinates lam pairs to sum(lam_i x_i) and acts on g by
    the phase exp(2 pi i lam(g)).
    """

    angles: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(Fraction(a) for a in self.angles))

    @classmethod
    def identity(cls, rank: int) -> "TorusElement":
        return cls((0,) * rank)

    def pair(self, lam) -> Fraction:
        return sum((Fraction(c) * a for c, a in zip(lam, self.angles)), Fraction(0))

    def phase(self, lam) -> complex:
        x = float(self.pair(lam) % 1)
        return complex(math.cos(2 * math.pi * x), math.sin(2 * math.pi * x))

    def weyl_image(self, matrix) -> "TorusElement":
        """The element w(g), where ``matrix`` represents w on weight coordinates."""
        inv = np.rint(np.linalg.inv(np.array(matrix, dtype=float))).astype(int)
        return TorusElement(tuple(sum(int(inv[j][i]) * self.angles[j] for j in range(len(self.angles))) for i in range(len(self.angles))))

    @property
    def is_identity(self) -> bool:
        return all(a % 1 == 0 for a in self.angles)


@dataclass(frozen=True)
class QSeries:
    """Finite q-series sum c_e q^e truncated at ``cutoff`` (exponents > cutoff dropped)."""

    terms: Mapping = field(default_factory=dict)
    cutoff: Fraction = Fraction(0)
    base_exponent: Fraction = Fraction(0)

    def __post_init__(self):
        cut = Fraction(self.cutoff)
        clean = {Fraction(e): complex(c) for e, c in self.terms.items() if Fraction(e) <= cut and abs(c) > _ZERO}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "cutoff", cut)
        object.__setattr__(self, "base_exponent", Fraction(self.base_exponent))

    @classmethod
    def one(cls, cutoff) -> "QSeries":
        return cls({Fraction(0): 1}, cutoff)

    def coefficient(self, e) -> complex:
        return self.terms.get(Fraction(e), 0j)

    def coefficients(self) -> list[complex]:
        """Coefficients of q^0 .. q^floor(cutoff) (integer exponents only)."""
        return [self.coefficient(n) for n in range(int(math.floor(self.cutoff)) + 1)]

    def __add__(self, other: "QSeries") -> "QSeries":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return QSeries(out, min(self.cutoff, other.cutoff), self.base_exponent)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.terms.items()}, self.cutoff, self.base_exponent)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        cut = min(self.cutoff, other.cutoff)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e <= cut:
                    out[e] = out.get(e, 0) + c1 * c2
        return QSeries(out, cut, self.base_exponent + other.base_exponent)

    def __truediv__(self, other: "QSeries") -> "QSeries":
        if not other.terms:
            raise ZeroDivisionError("division by the zero series")
        e0, c0 = next(iter(other.terms.items()))
        cut = min(self.cutoff, other.cutoff) - e0
        rem = dict(self.terms)
        out: dict = {}
        while True:
            live = [e for e, c in rem.items() if abs(c) > _ZERO and e - e0 <= cut]
            if not live:
                break
            e = min(live)
            coef = rem.pop(e) / c0
            out[e - e0] = coef
            for f, d in other.terms.items():
                if f == e0:
                    continue
                g = e - e0 + f
                if g - e0 <= cut:
                    rem[g] = rem.get(g, 0) - coef * d
        return QSeries(out, cut, self.base_exponent - other.base_exponent)

    def max_distance(self, other: "QSeries") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.coefficient(e) - other.coefficient(e)) for e in keys), default=0.0)

    def to_json(self) -> dict:
        return {
            "base_exponent": [self.base_exponent.numerator, self.base_exponent.denominator],
            "cutoff": [self.cutoff.numerator, self.cutoff.denominator],
            "terms": [[e.numerator, e.denominator, c.real, c.imag] for e, c in self.terms.items()],
        }


def _series_factor(n: int, phase: complex, cutoff) -> QSeries:
    return QSeries({0: 1, n: -phase}, cutoff)


def kac_denominator(datum: RootDatum, g: TorusElement, N) -> QSeries:
    """prod_{n=1..N} det(1 - q^n ad(g)), truncated at q^N."""
    N = Fraction(N)
    out = QSeries.one(N)
    phases = [1.0 + 0j] * datum.rank
    for alpha in datum.positive_roots:
        ph = g.phase(alpha)
        phases += [ph, ph.conjugate()]
    for n in range(1, int(math.floor(N)) + 1):
        for ph in phases:
            out = out * _series_factor(n, ph, N)
    return out


def _check_level(datum: RootDatum, k: int, lam) -> tuple:
    lam = tuple(lam)
    if int(k) != k or k < 0:
        raise DomainError(f"level must be a non-negative integer, got {k!r}")
    if not in_alcove(datum, k, lam):
        raise DomainError(f"{lam} is outside the level-{k} alcove of {datum.spec.name}")
    return tuple(int(c) for c in lam)


def _coroot_box(datum: RootDatum, k_dual: int, shifted, N) -> range:
    """Coefficient bound for coroot-lattice translates with rebased exponent <= N."""
    cor = np.array([[float(x) for x in c] for c in datum.simple_coroots])
    gram = np.array([[float(x) for x in r] for r in datum.gram])
    lat = cor @ gram @ cor.T
    lo = float(np.min(np.linalg.eigvalsh(lat)))
    hi = float(np.max(np.linalg.eigvalsh(lat)))
    a = math.sqrt(float(ip(datum, shifted, shifted)))
    # exponent >= k_dual lo |c|^2 / 2 - a sqrt(hi) |c|
    b = a * math.sqrt(hi)
    bound = (b + math.sqrt(b * b + 2 * k_dual * lo * float(N))) / (k_dual * lo)
    return range(-int(bound) - 1, int(bound) + 2)


def numerator_terms(datum: RootDatum, k: int, lam, N) -> list[tuple[int, Fraction, tuple]]:
    """(sign, rebased exponent, mu) for the dominant affine transforms mu of lam + rho."""
    lam = _check_level(datum, k, lam)
    k_dual = k + datum.h_dual
    shifted = tuple(c + 1 for c in lam)
    base = ip(datum, shifted, shifted)
    cor = datum.simple_coroots
    out = []
    box = _coroot_box(datum, k_dual, shifted, N)
    for coeffs in itertools.product(box, repeat=datum.rank):
        v = tuple(shifted[t] + k_dual * sum(c * cor[i][t] for i, c in enumerate(coeffs)) for t in range(datum.rank))
        mu, sign = dominant_conjugate(datum, v)
        e = (ip(datum, mu, mu) - base) / (2 * k_dual)
        if e > N:
            continue
        if sign == 0:
            raise AssertionError("regular weight mapped onto a wall")
        out.append((sign, e, tuple(int(c) for c in mu)))
    out.sort(key=lambda t: (t[1], t[2]))
    return out


def _trace_lowest(datum: RootDatum, hw: tuple, g: TorusElement) -> complex:
    """Tr(g | module with lowest weight -hw)."""
    if g.is_identity:
        return complex(irrep_dimension(datum, hw))
    return complex(sum(m * g.phase(tuple(-c for c in nu)) for nu, m in weight_multiplicities(datum, hw).items()))


def kac_numerator(datum: RootDatum, k: int, lam, g: TorusElement, N) -> QSeries:
    """Alternating sum over dominant affine Weyl transforms, rebased to start at q^0."""
    N = Fraction(N)
    lam = _check_level(datum, k, lam)
    k_dual = k + datum.h_dual
    shifted = tuple(c + 1 for c in lam)
    terms: dict = {}
    for sign, e, mu in numerator_terms(datum, k, lam, N):
        tr = _trace_lowest(datum, tuple(c - 1 for c in mu), g)
        terms[e] = terms.get(e, 0) + sign * tr
    base = ip(datum, shifted, shifted) / (2 * k_dual)
    return QSeries(terms, N, base)


def character(datum: RootDatum, k: int, lam, g: TorusElement, N) -> QSeries:
    """Tr(q^E g | H_lam) up to q^N; at g = 1 the coefficients are graded dimensions."""
    num = kac_numerator(datum, k, lam, g, N)
    den = kac_denominator(datum, g, N)
    out = num / den
    return QSeries(out.terms, Fraction(N), num.base_exponent)
