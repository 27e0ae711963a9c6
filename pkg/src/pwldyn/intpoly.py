"""Integer polynomials and exact largest-root isolation.

Polynomials are coefficient lists in ascending degree.  The Perron root of a
covering matrix is located by bisection on exact sign evaluations, never by
floating-point root finding, so results are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Poly = list[int]


def trim(p: Sequence[int]) -> Poly:
    q = list(p)
    while q and q[-1] == 0:
        q.pop()
    return q


def degree(p: Sequence[int]) -> int:
    q = trim(p)
    return len(q) - 1 if q else -1


def add(p: Sequence[int], q: Sequence[int]) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def neg(p: Sequence[int]) -> Poly:
    return [-c for c in p]


def mul(p: Sequence[int], q: Sequence[int]) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def evaluate(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def derivative(p: Sequence[int]) -> Poly:
    return trim([i * c for i, c in enumerate(p)][1:])


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g or 1


def primitive(p: Sequence[int]) -> Poly:
    q = trim(p)
    if not q:
        return []
    g = content(q)
    q = [c // g for c in q]
    if q[-1] < 0:
        q = [-c for c in q]
    return q


def pseudo_rem(p: Poly, q: Poly) -> Poly:
    """Pseudo-remainder of p by q (both integer, q nonzero)."""
    p = trim(p)
    q = trim(q)
    dq = len(q) - 1
    lc = q[-1]
    r = list(p)
    while len(r) - 1 >= dq and r:
        shift = len(r) - 1 - dq
        coef = r[-1]
        r = [lc * c for c in r]
        for i, c in enumerate(q):
            r[shift + i] -= coef * c
        r = trim(r)
    return r


def poly_gcd(p: Poly, q: Poly) -> Poly:
    a, b = primitive(p), primitive(q)
    while b:
        a, b = b, primitive(pseudo_rem(a, b))
    return a


def square_free(p: Poly) -> Poly:
    p = primitive(p)
    if degree(p) < 1:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) < 1:
        return p
    # exact division p // g over the rationals, result integer after primitive
    quot = _exact_div(p, g)
    return primitive(quot)


def _exact_div(p: Poly, d: Poly) -> Poly:
    num = [Fraction(c) for c in p]
    out = [Fraction(0)] * (len(p) - len(d) + 1)
    while len(num) >= len(d) and any(num):
        shift = len(num) - len(d)
        coef = num[-1] / d[-1]
        out[shift] = coef
        for i, c in enumerate(d):
            num[shift + i] -= coef * c
        while num and num[-1] == 0:
            num.pop()
    denlcm = 1
    for c in out:
        denlcm = denlcm * c.denominator // gcd(denlcm, c.denominator)
    return trim([int(c * denlcm) for c in out])


def cauchy_bound(p: Poly) -> Fraction:
    """All real roots lie in [-B, B]."""
    p = trim(p)
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=0)
    return Fraction(m, lead) + 1


def _sturm_chain(p: Poly) -> list[list[Fraction]]:
    chain = [[Fraction(c) for c in p]]
    d = [Fraction(c) for c in derivative(p)]
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        rem = _frac_rem(chain[-2], chain[-1])
        rem = [-c for c in rem]
        if not rem:
            break
        chain.append(rem)
    return chain


def _frac_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    while len(r) >= len(b) and any(r):
        shift = len(r) - len(b)
        coef = r[-1] / b[-1]
        for i, c in enumerate(b):
            r[shift + i] -= coef * c
        while r and r[-1] == 0:
            r.pop()
    return r


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for q in chain:
        acc = Fraction(0)
        for c in reversed(q):
            acc = acc * x + c
        if acc != 0:
            signs.append(1 if acc > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def largest_real_root(p: Poly, tol: Fraction = Fraction(1, 10**12)):
    """Enclosing interval of width <= tol for the largest real root >= 0.

    Returns (lo, hi) rationals, or None when p has no real root >= 0.
    Root counts come from a Sturm chain of the square-free part, so the top
    root cannot be skipped even when roots cluster.
    """
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial")
    k = 0
    while p and p[0] == 0:  # lambda^k factor: root at 0
        p = p[1:]
        k += 1
    if degree(p) < 1:
        return (Fraction(0), Fraction(0)) if k else None
    sf = square_free(p)
    chain = _sturm_chain(sf)
    bound = cauchy_bound(sf)

    def roots_in(a: Fraction, b: Fraction) -> int:
        # number of roots in (a, b]
        return _sign_changes(chain, a) - _sign_changes(chain, b)

    lo, hi = Fraction(0), bound
    if roots_in(lo, hi) == 0 and evaluate(sf, Fraction(0)) != 0:
        return (Fraction(0), Fraction(0)) if k else None
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if roots_in(mid, hi) > 0:
            lo = mid
        elif evaluate(sf, mid) == 0:
            return (mid, mid)
        else:
            hi = mid
    return (lo, hi)


def format_poly(p: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            coef = "" if c == 1 else ("-" if c == -1 else str(c))
            terms.append(f"{coef}x^{i}" if i > 1 else f"{coef}x")
    return " + ".join(reversed(terms)) or "0"
