"""Planar rotation operator on homogeneous slices, and its exact inverse.

A homogeneous planar polynomial of degree n is the coefficient list
p[i] of x^i y^(n-i), i = 0..n.  The rotation derivative
Rot = -y d/dx + x d/dy acts as

    (Rot p)[i] = -(i+1) p[i+1] + (n-i+1) p[i-1].

Entries of p may be rationals or numpy object vectors (one component per
parameter-jet monomial); only +, - and scalar * are used.
"""
from __future__ import annotations

from functools import lru_cache
from math import prod

from .exact.rational import Q

NORMALIZATIONS = ("kernel", "xpow", "ypow")


def rotation_apply(p: list, n: int, mu=0) -> list:
    """(Rot - mu) p."""
    out = []
    for i in range(n + 1):
        v = p[i] * (-mu) if mu else p[i] * 0
        if i + 1 <= n:
            v = v - p[i + 1] * (i + 1)
        if i >= 1:
            v = v + p[i - 1] * (n - i + 1)
        out.append(v)
    return out


@lru_cache(maxsize=None)
def _thomas_pivots(n: int, mu) -> tuple:
    # diagonal -mu, super -(i+1), sub (n-i+1); pivots never vanish for mu != 0
    denoms = []
    cprime = []
    for i in range(n + 1):
        d = -mu
        if i:
            d = d - Q(n - i + 1) * cprime[i - 1]
        denoms.append(d)
        cprime.append(Q(-(i + 1)) / d if i < n else Q(0))
    return tuple(denoms), tuple(cprime)


def _solve_shifted(r: list, n: int, mu) -> list:
    denoms, cprime = _thomas_pivots(n, Q(mu))
    dprime = []
    for i in range(n + 1):
        v = r[i]
        if i:
            v = v - dprime[i - 1] * (n - i + 1)
        dprime.append(v * (1 / denoms[i]))
    p = [None] * (n + 1)
    p[n] = dprime[n]
    for i in range(n - 1, -1, -1):
        p[i] = dprime[i] - p[i + 1] * cprime[i]
    return p


@lru_cache(maxsize=None)
def circle_weights(n: int) -> tuple:
    """Mean of x^i y^(n-i) over the unit circle, for i = 0..n."""
    out = []
    for i in range(n + 1):
        k = n - i
        if i % 2 or k % 2:
            out.append(Q(0))
        else:
            num = prod(range(i - 1, 0, -2)) * prod(range(k - 1, 0, -2))
            out.append(Q(num, prod(range(n, 0, -2))))
    return tuple(out)


def circle_average(p: list, n: int):
    w = circle_weights(n)
    total = None
    for i in range(0, n + 1, 2):
        if w[i]:
            term = p[i] * w[i]
            total = term if total is None else total + term
    return total if total is not None else p[0] * 0


@lru_cache(maxsize=None)
def radial_power(m: int) -> tuple:
    """Coefficients of (x^2+y^2)^m in the degree-2m slice."""
    from math import comb
    out = [Q(0)] * (2 * m + 1)
    for a in range(m + 1):
        out[2 * a] = Q(comb(m, a))
    return tuple(out)


def rotation_solve(r: list, n: int, mu=0, normalization: str = "kernel") -> list:
    """Solve (Rot - mu) p = r.

    For mu = 0 and even n the operator has a one-dimensional kernel spanned by
    (x^2+y^2)^(n/2); ``r`` must then have zero circle average, and the kernel
    freedom is fixed by ``normalization``:

    * ``kernel``: p has zero circle average (no (x^2+y^2)^(n/2) component);
    * ``xpow``: coefficient of x^n is zero;
    * ``ypow``: coefficient of y^n is zero.
    """
    if mu:
        return _solve_shifted(r, n, mu)
    zero = r[0] * 0
    p = [zero] * (n + 1)
    # even-indexed equations fix the odd-indexed unknowns
    prev = zero
    for i in range(0, n, 2):
        if i + 1 > n:
            break
        p[i + 1] = (prev * (n - i + 1) - r[i]) * Q(1, i + 1)
        prev = p[i + 1]
    if n % 2:
        # odd-indexed equations, run from the top: p[n-1] = r[n]
        nxt = zero
        for i in range(n, 0, -2):
            p[i - 1] = (r[i] + nxt * (i + 1)) * Q(1, n - i + 1)
            nxt = p[i - 1]
        return p
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if normalization == "ypow":
        # p[0] = 0, forward through odd equations
        prev = zero
        for i in range(1, n, 2):
            p[i + 1] = (prev * (n - i + 1) - r[i]) * Q(1, i + 1)
            prev = p[i + 1]
        return p
    # p[n] = 0, backward through odd equations
    nxt = zero
    for i in range(n - 1, 0, -2):
        p[i - 1] = (r[i] + nxt * (i + 1)) * Q(1, n - i + 1)
        nxt = p[i - 1]
    if normalization == "kernel":
        c = circle_average(p, n)
        rad = radial_power(n // 2)
        for i in range(0, n + 1, 2):
            p[i] = p[i] - c * rad[i]
    return p
