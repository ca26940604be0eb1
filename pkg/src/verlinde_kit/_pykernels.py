"""Pure-Python integer kernels (reference implementation and fallback).

``roots`` is an (l, l) integer array whose row i is the simple root alpha_i
in fundamental-weight coordinates; ``comarks`` gives <omega_i, theta> and
``theta`` the highest root. A level ``k_dual <= 0`` selects the finite Weyl
group only.
"""

import numpy as np


def reduce_weight(roots, comarks, theta, k_dual, mu):
    """Reduce an integer vector into the dominant chamber (or level-k_dual alcove).

    Returns (reduced list, number of reflections, on_wall flag).
    """
    mu = [int(x) for x in mu]
    roots = [[int(x) for x in r] for r in roots]
    comarks = [int(x) for x in comarks]
    theta = [int(x) for x in theta]
    n = len(mu)
    steps = 0
    while True:
        moved = True
        while moved:
            moved = False
            for i in range(n):
                c = mu[i]
                if c < 0:
                    r = roots[i]
                    for j in range(n):
                        mu[j] -= c * r[j]
                    steps += 1
                    moved = True
                    break
        if k_dual <= 0:
            break
        p = sum(comarks[i] * mu[i] for i in range(n))
        if p <= k_dual:
            break
        shift = p - k_dual
        for j in range(n):
            mu[j] -= shift * theta[j]
        steps += 1
    wall = any(c == 0 for c in mu)
    if k_dual > 0 and sum(comarks[i] * mu[i] for i in range(n)) == k_dual:
        wall = True
    return mu, steps, wall


def klimyk_accumulate(roots, comarks, theta, k_dual, shifted, weights, mults):
    """Signed sum over weights nu of reduce(shifted + nu).

    Returns a dict mapping reduced vectors (tuples, still rho-shifted) to
    integer totals; wall-fixed terms are dropped.
    """
    out = {}
    shifted = [int(x) for x in shifted]
    for nu, m in zip(np.asarray(weights).tolist(), np.asarray(mults).tolist()):
        v = [a + b for a, b in zip(shifted, nu)]
        red, steps, wall = reduce_weight(roots, comarks, theta, k_dual, v)
        if wall:
            continue
        key = tuple(red)
        out[key] = out.get(key, 0) + (-m if steps % 2 else m)
    return out
