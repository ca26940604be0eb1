"""Affine Weyl group at a level: alcoves and signed reduction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .cartan import RootDatum, Weight, reflect
from .errors import DomainError


@dataclass(frozen=True)
class AffineWeight:
    """Affine weight: a finite weight at a given level, shifted by an energy (multiple of delta)."""

    level: int
    finite: Weight
    energy: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.finite, Weight):
            object.__setattr__(self, "finite", Weight(tuple(self.finite)))
        object.__setattr__(self, "energy", Fraction(self.energy))
        object.__setattr__(self, "level", int(self.level))


@dataclass(frozen=True)
class AlcoveReduction:
    """Result of reducing a rho-shifted vector into the closed k_dual alcove."""

    weight: tuple
    sign: int
    length_parity: int


@lru_cache(maxsize=None)
def kernel_data(datum: RootDatum) -> tuple:
    """Integer arrays consumed by the compiled kernels."""
    roots = np.array(datum.simple_roots, dtype=np.int64)
    comarks = np.array(datum.comarks, dtype=np.int64)
    theta = np.array(datum.theta, dtype=np.int64)
    return roots, comarks, theta


def _reduce_exact(datum: RootDatum, k_dual: int, mu: tuple) -> tuple:
    steps = 0
    while True:
        moved = True
        while moved:
            moved = False
            for i, c in enumerate(mu):
                if c < 0:
                    mu = reflect(datum, mu, i)
                    steps += 1
                    moved = True
                    break
        p = datum.pairing_theta(mu)
        if p <= k_dual:
            break
        mu = tuple(m - (p - k_dual) * t for m, t in zip(mu, datum.theta))
        steps += 1
    wall = any(c == 0 for c in mu) or datum.pairing_theta(mu) == k_dual
    return mu, steps, wall


def reduce_to_alcove(datum: RootDatum, k_dual: int, mu) -> AlcoveReduction:
    """Reduce a rho-shifted vector into the level-``k_dual`` alcove.

    The sign is the determinant of the affine Weyl element used, or 0 when
    the vector is fixed by an affine reflection.
    """
    if int(k_dual) != k_dual or k_dual < 1:
        raise DomainError(f"k_dual must be a positive integer, got {k_dual!r}")
    mu = tuple(mu)
    if len(mu) != datum.rank:
        raise DomainError(f"vector of length {len(mu)} for a rank-{datum.rank} algebra")
    if all(Fraction(c).denominator == 1 for c in mu):
        red, steps, wall = _kernels.reduce_weight(*kernel_data(datum), int(k_dual), [int(c) for c in mu])
        red = tuple(int(c) for c in red)
    else:
        red, steps, wall = _reduce_exact(datum, int(k_dual), tuple(Fraction(c) for c in mu))
    parity = steps % 2
    sign = 0 if wall else (-1 if parity else 1)
    return AlcoveReduction(weight=red, sign=sign, length_parity=parity)


def alcove_points(datum: RootDatum, k: int) -> list[Weight]:
    """Dominant weights with <lam, theta> <= k, in lexicographic order."""
    if int(k) != k or k < 0:
        raise DomainError(f"level must be a non-negative integer, got {k!r}")
    ranges = [range(k // c + 1) for c in datum.comarks]
    pts = [
        Weight(p)
        for p in itertools.product(*ranges)
        if sum(c * x for c, x in zip(datum.comarks, p)) <= k
    ]
    return sorted(pts)


def in_alcove(datum: RootDatum, k: int, lam) -> bool:
    lam = tuple(lam)
    return (
        len(lam) == datum.rank
        and all(int(c) == c and c >= 0 for c in lam)
        and datum.pairing_theta(lam) <= k
    )


def interior_points(datum: RootDatum, k_dual: int) -> list[tuple]:
    """Integral points strictly inside the k_dual-scaled alcove."""
    ranges = [range(1, k_dual // c + 1) for c in datum.comarks]
    return [
        p for p in itertools.product(*ranges) if sum(c * x for c, x in zip(datum.comarks, p)) < k_dual
    ]


def count_regular_orbits(datum: RootDatum, k_dual: int) -> int:
    """Number of free affine Weyl orbits on the weight lattice at level k_dual."""
    if int(k_dual) != k_dual or k_dual < 1:
        raise DomainError(f"k_dual must be a positive integer, got {k_dual!r}")
    return len(interior_points(datum, int(k_dual)))


def affine_reflections(datum: RootDatum, k_dual: int) -> list:
    """The l + 1 simple affine reflections acting on rho-shifted vectors."""
    refl = [lambda mu, i=i: reflect(datum, mu, i) for i in range(datum.rank)]

    def s0(mu):
        p = datum.pairing_theta(mu)
        return tuple(m - (p - k_dual) * t for m, t in zip(mu, datum.theta))

    return refl + [s0]
