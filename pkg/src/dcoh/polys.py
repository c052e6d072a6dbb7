"""Dense univariate polynomial arithmetic over exact rationals.

A polynomial a_0 + a_1 t + ... + a_n t^n is represented as the tuple
(a_0, a_1, ..., a_n) of Fractions with a_n != 0; the zero polynomial is
the empty tuple.  All operations return normalized tuples, so equality
of polynomials is tuple equality.

This module also provides the number-theoretic helpers the difference
solvers need: exact square roots, resultants, integer root isolation and
Lagrange interpolation.
"""

from __future__ import annotations

import math
from fractions import Fraction

ZERO: tuple = ()
ONE = (Fraction(1),)
T = (Fraction(0), Fraction(1))


def poly(coeffs) -> tuple:
    """Normalize a coefficient sequence into canonical tuple form."""
    cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def deg(p) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(p) - 1


def lc(p) -> Fraction:
    if not p:
        raise ValueError("zero polynomial has no leading coefficient")
    return p[-1]


def constant(c) -> tuple:
    c = c if isinstance(c, Fraction) else Fraction(c)
    return (c,) if c != 0 else ()


def padd(a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    cs = list(a)
    for i, c in enumerate(b):
        cs[i] += c
    return poly(cs)


def pneg(a) -> tuple:
    return tuple(-c for c in a)


def psub(a, b) -> tuple:
    return padd(a, pneg(b))


def pmul(a, b) -> tuple:
    if not a or not b:
        return ZERO
    cs = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj != 0:
                cs[i + j] += ai * bj
    return poly(cs)


def pscale(a, c) -> tuple:
    c = c if isinstance(c, Fraction) else Fraction(c)
    if c == 0:
        return ZERO
    return tuple(x * c for x in a)


def ppow(a, n: int) -> tuple:
    if n < 0:
        raise ValueError("negative power of a polynomial")
    r = ONE
    b = a
    while n:
        if n & 1:
            r = pmul(r, b)
        b = pmul(b, b)
        n >>= 1
    return r


def pdivmod(a, b) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] * inv
        if c != 0:
            q[i] = c
            for j, bj in enumerate(b):
                r[i + j] -= c * bj
    return poly(q), poly(r)


def pdiv_exact(a, b) -> tuple:
    q, r = pdivmod(a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def monic(p) -> tuple:
    if not p:
        return ZERO
    return pscale(p, 1 / p[-1])


def pgcd(a, b) -> tuple:
    """Monic gcd."""
    while b:
        a, b = b, pdivmod(a, b)[1]
    return monic(a)


def plcm(a, b) -> tuple:
    if not a or not b:
        return ZERO
    g = pgcd(a, b)
    return monic(pmul(pdiv_exact(a, g), b))


def derivative(p) -> tuple:
    return poly([i * c for i, c in enumerate(p)][1:])


def peval(p, x: Fraction) -> Fraction:
    r = Fraction(0)
    for c in reversed(p):
        r = r * x + c
    return r


def compose_linear(p, a, b) -> tuple:
    """p(a*t + b) by Horner on the argument polynomial."""
    arg = poly([b, a])
    r = ZERO
    for c in reversed(p):
        r = padd(pmul(r, arg), constant(c))
    return r


def compose_square(p) -> tuple:
    """p(t^2): spread coefficients to even degrees."""
    if not p:
        return ZERO
    cs = [Fraction(0)] * (2 * len(p) - 1)
    for i, c in enumerate(p):
        cs[2 * i] = c
    return poly(cs)


def shift(p, h=1) -> tuple:
    """p(t + h)."""
    return compose_linear(p, Fraction(1), Fraction(h))


def frac_sqrt(x: Fraction):
    """Exact square root of a rational, or None."""
    if x < 0:
        return None
    if x == 0:
        return Fraction(0)
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn != x.numerator or rd * rd != x.denominator:
        return None
    return Fraction(rn, rd)


def poly_sqrt(p):
    """Exact polynomial square root, or None.  Characteristic zero only.

    Determines candidate coefficients top-down from (h^2 = p) and then
    verifies the square exactly, so no squarefree factorization is needed.
    """
    if not p:
        return ZERO
    n = deg(p)
    if n % 2:
        return None
    top = frac_sqrt(p[-1])
    if top is None or top == 0:
        return None
    m = n // 2
    h = [Fraction(0)] * (m + 1)
    h[m] = top
    for k in range(m - 1, -1, -1):
        # coefficient of t^(m+k) in h^2 must match p
        s = Fraction(0)
        for i in range(k + 1, m):
            j = m + k - i
            if k < j < m:
                s += h[i] * h[j]
        pk = p[m + k] if m + k < len(p) else Fraction(0)
        h[k] = (pk - s) / (2 * top)
    cand = poly(h)
    if pmul(cand, cand) != poly(p):
        return None
    return cand


def resultant(a, b) -> Fraction:
    """Res_t(a, b) with the convention Res(a,b) = lc(a)^deg(b) * prod b(roots of a)."""
    a = poly(a)
    b = poly(b)
    if not a or not b:
        return Fraction(0)
    if deg(a) == 0:
        return a[0] ** deg(b)
    if deg(b) == 0:
        return b[0] ** deg(a)
    r = pdivmod(a, b)[1]
    sign = -1 if (deg(a) * deg(b)) % 2 else 1
    if not r:
        return Fraction(0)
    return sign * lc(b) ** (deg(a) - deg(r)) * resultant(b, r)


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def integer_roots(p) -> list:
    """Sorted integer roots of a rational-coefficient polynomial."""
    p = poly(p)
    if not p:
        raise ValueError("zero polynomial has every root")
    den = math.lcm(*[c.denominator for c in p])
    ics = [int(c * den) for c in p]
    roots = []
    # strip powers of t
    v = 0
    while ics[v] == 0:
        v += 1
    if v:
        roots.append(0)
        ics = ics[v:]
    if len(ics) > 1:
        for d in _divisors(ics[0]):
            for r in (d, -d):
                if peval(p, Fraction(r)) == 0 and r not in roots:
                    roots.append(r)
    return sorted(roots)


def cauchy_root_bound(p) -> Fraction:
    """Bound B with every complex root z of p satisfying |z| <= B."""
    p = poly(p)
    if deg(p) <= 0:
        return Fraction(0)
    m = max(abs(c) for c in p[:-1])
    return 1 + m / abs(p[-1])


def lagrange_interpolate(xs, ys) -> tuple:
    assert len(xs) == len(ys)
    total = ZERO
    for i, xi in enumerate(xs):
        num = ONE
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if i == j:
                continue
            num = pmul(num, poly([-Fraction(xj), Fraction(1)]))
            den *= Fraction(xi) - Fraction(xj)
        total = padd(total, pscale(num, Fraction(ys[i]) / den))
    return total


def poly_str(p, var: str = "t") -> str:
    if not p:
        return "0"
    parts = []
    for i in range(deg(p), -1, -1):
        c = p[i]
        if c == 0:
            continue
        if i == 0:
            term = str(c)
        else:
            tv = var if i == 1 else f"{var}^{i}"
            if c == 1:
                term = tv
            elif c == -1:
                term = f"-{tv}"
            else:
                term = f"{c}*{tv}"
        parts.append(term)
    s = parts[0]
    for term in parts[1:]:
        s += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return s
