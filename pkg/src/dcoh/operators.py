"""Monic linear difference operators and the decision procedures for L(b) = a.

An operator L = sigma^n + l_{n-1} sigma^(n-1) + ... + l_0 applies to any
element carrying a sigma action.  The solvers decide L(b) = a exactly:

  * over a finite field, L is an F_p-linear map on a finite-dimensional
    F_p-space and the equation is plain linear algebra;
  * over QQ (sigma = id), L is multiplication by the scalar 1 + sum l_i;
  * over QQ(t) with the shift, rational solutions are found by an
    Abramov-style procedure: a universal denominator from the dispersion
    of the trailing/leading coefficients, then a bounded-degree
    polynomial ansatz solved by exact linear algebra.

The module also solves the first-order multiplicative analogue
sigma^d(x) = a * x over the same fields (Gosper-Petkovsek style over the
shift field); higher-order multiplicative equations are out of scope.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, outcome, polys
from .fields import (FieldElement, FiniteField, RationalField,
                     RationalFunctionField, make_field)
from .outcome import Outcome
from .polys import ONE, ZERO, deg, pdiv_exact, pgcd, plcm, pmul, poly


class OperatorError(ValueError):
    pass


class DifferenceOperator:
    """L = sigma^n + l_{n-1} sigma^(n-1) + ... + l_0 with l_i in k."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(field.element(c) for c in coeffs)
        if len(self.coeffs) < 1:
            raise OperatorError("operator order must be at least 1")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def parse(cls, field, text: str) -> "DifferenceOperator":
        from . import exprs

        class _Dom(exprs.Domain):
            def from_int(self, n):
                return {0: field.element(n)}

            def name(self, name):
                if name == "s":
                    return {1: field.one()}
                return {0: field.named_element(name)}

            def add(self, a, b):
                out = dict(a)
                for k, v in b.items():
                    out[k] = out[k] + v if k in out else v
                return out

            def sub(self, a, b):
                return self.add(a, {k: -v for k, v in b.items()})

            def neg(self, a):
                return {k: -v for k, v in a.items()}

            def mul(self, a, b):
                out = {}
                for i, u in a.items():
                    for j, v in b.items():
                        k = i + j
                        w = u * v
                        out[k] = out[k] + w if k in out else w
                return out

            def div(self, a, b):
                if set(b) - {0}:
                    raise exprs.ExprError("cannot divide by sigma")
                c = b.get(0)
                if c is None or c.is_zero():
                    raise exprs.ExprError("division by zero")
                return {k: v / c for k, v in a.items()}

            def pow(self, a, n):
                if n < 0:
                    raise exprs.ExprError("negative operator power")
                r = {0: field.one()}
                for _ in range(n):
                    r = self.mul(r, a)
                return r

        try:
            d = exprs.parse(text, _Dom())
        except exprs.ExprError as e:
            raise OperatorError(str(e)) from e
        d = {k: v for k, v in d.items() if not v.is_zero()}
        n = max(d, default=0)
        if n < 1:
            raise OperatorError("operator must involve s")
        if d.get(n) != field.one():
            raise OperatorError("operator must be monic in s")
        return cls(field, [d.get(i, field.zero()) for i in range(n)])

    def apply(self, x):
        """L(x) for a field element or an algebra element over k."""
        total = x.sigma(self.order)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                total = total + x.sigma(i) * c
        return total

    def scalar_value(self) -> FieldElement:
        """1 + sum of coefficients: the action on sigma-constants."""
        total = self.field.one()
        for c in self.coeffs:
            total = total + c
        return total

    def __str__(self):
        n = self.order
        parts = ["s" if n == 1 else f"s^{n}"]
        for i in range(n - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            sv = "s" if i == 1 else (f"s^{i}" if i else "")
            cs = str(c)
            if any(ch in cs[1:] for ch in "+-") or "/" in cs:
                cs = f"({cs})"
            parts.append(f"{cs}*{sv}" if sv and cs != "1" else (sv or cs))
        return " + ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"DifferenceOperator({self})"


def op_apply(L: DifferenceOperator, x):
    return L.apply(x)


# --------------------------------------------------------------------------
# finite-field linear algebra


def _gfp(p: int):
    return make_field(f"GF({p}^1);frob^1")


def _ff_matrix(L: DifferenceOperator):
    """The matrix of L as an F_p-linear map in the polynomial basis."""
    k: FiniteField = L.field
    gfp = _gfp(k.p)
    cols = []
    for i in range(k.m):
        e = FieldElement(k, tuple(1 if r == i else 0 for r in range(k.m)))
        cols.append(L.apply(e))
    return [[gfp.element(col.value[r]) for col in cols] for r in range(k.m)], gfp


def _solve_finite(L: DifferenceOperator, a: FieldElement) -> Outcome:
    k: FiniteField = L.field
    mat, gfp = _ff_matrix(L)
    rhs = [gfp.element(c) for c in a.value]
    sol = linalg.solve(mat, rhs, gfp)
    if sol is None:
        return outcome.no("not-in-image", operator=str(L))
    b = FieldElement(k, tuple(c.value[0] for c in sol))
    assert L.apply(b) == a
    return outcome.yes(b)


# --------------------------------------------------------------------------
# Abramov over QQ(t) with the shift


def _clear_denominators(L: DifferenceOperator, a: FieldElement):
    """Common-denominator form: polynomial p_0..p_n and right side q."""
    dens = [a.value[1]] + [c.value[1] for c in L.coeffs]
    lcd = ONE
    for d in dens:
        lcd = plcm(lcd, d)
    ps = []
    for c in L.coeffs:
        num, den = c.value
        ps.append(pmul(num, pdiv_exact(lcd, den)))
    ps.append(lcd)  # monic leading coefficient of sigma^n
    q = pmul(a.value[0], pdiv_exact(lcd, a.value[1]))
    return ps, q


def _dispersion_window(A, B) -> int:
    # any h with gcd(A(t), B(t+h)) nontrivial is a difference of complex
    # roots, so |h| is bounded by the sum of the Cauchy root bounds
    return int(polys.cauchy_root_bound(A) + polys.cauchy_root_bound(B)) + 1


def dispersion_set(A, B) -> list:
    """All h >= 0 with deg gcd(A(t), B(t+h)) > 0.

    The candidates are the nonnegative integer roots of the resultant
    Res_t(A(t), B(t+h)) in h; they live inside the root-bound window, and
    on integers the resultant vanishes exactly when the gcd is
    nontrivial, which is how each candidate is tested.
    """
    if deg(A) <= 0 or deg(B) <= 0:
        return []
    top = _dispersion_window(A, B)
    return [h for h in range(top + 1) if deg(pgcd(A, polys.shift(B, h))) > 0]


def dispersion_set_resultant(A, B) -> list:
    """Cross-check oracle: interpolate Res_t(A(t), B(t+h)) as a polynomial
    in h and read off its integer roots in the window."""
    if deg(A) <= 0 or deg(B) <= 0:
        return []
    n = deg(A) * deg(B)
    xs = list(range(n + 1))
    ys = [polys.resultant(A, polys.shift(B, h)) for h in xs]
    res_poly = polys.lagrange_interpolate(xs, ys)
    if not res_poly:
        raise OperatorError("resultant interpolation degenerated")
    top = _dispersion_window(A, B)
    return [h for h in range(top + 1) if polys.peval(res_poly, Fraction(h)) == 0]


def universal_denominator(ps) -> tuple:
    """Abramov's universal denominator for sum p_i(t) y(t+i) = q(t)."""
    n = len(ps) - 1
    A = polys.shift(ps[n], -n)
    B = ps[0]
    u = ONE
    for h in sorted(dispersion_set(A, B), reverse=True):
        g = pgcd(A, polys.shift(B, h))
        if deg(g) <= 0:
            continue
        A = pdiv_exact(A, g)
        B = pdiv_exact(B, polys.shift(g, -h))
        for i in range(h + 1):
            u = pmul(u, polys.shift(g, -i))
    return u


def _binom_poly(v: int) -> tuple:
    """C(d, v) as a polynomial in d."""
    out = ONE
    for i in range(v):
        out = pmul(out, poly([Fraction(-i), Fraction(1)]))
    return tuple(c / Fraction(math.factorial(v)) for c in out)


def degree_bound(ps, qdeg: int):
    """Largest possible degree of a polynomial solution, or -1 if none.

    Walks down the leading coefficients of t -> sum p_i(t) z(t+i): at the
    first level j where the indicial polynomial xi_j(d) is nonzero, the
    candidates are deg(q) - b + j and the nonnegative integer roots of xi_j.
    """
    b = max(deg(p) for p in ps)
    n = len(ps) - 1
    for j in range(b + n + 2):
        xi = ZERO
        for i, p in enumerate(ps):
            for v in range(j + 1):
                idx = b - (j - v)
                if 0 <= idx < len(p) and p[idx] != 0:
                    xi = polys.padd(xi, polys.pscale(_binom_poly(v),
                                                     p[idx] * Fraction(i) ** v))
        if xi:
            cands = [d for d in polys.integer_roots(xi) if d >= 0] if deg(xi) > 0 else []
            if qdeg - b + j >= 0:
                cands.append(qdeg - b + j)
            return max(cands, default=-1)
    raise OperatorError("degree bound cascade failed to terminate")


def polynomial_solutions(ps, q, bound: int):
    """A particular solution with degree <= bound, or None."""
    if bound < 0:
        return None if q else ZERO
    QQ = make_field("QQ")
    b = max(deg(p) for p in ps)
    nrows = b + bound + 1
    cols = []
    for d in range(bound + 1):
        img = ZERO
        for i, p in enumerate(ps):
            img = polys.padd(img, pmul(p, polys.shift(poly([0] * d + [1]), i)))
        cols.append(img)
    mat = [[QQ.element(col[r] if r < len(col) else 0) for col in cols]
           for r in range(nrows)]
    rhs = [QQ.element(q[r] if r < len(q) else 0) for r in range(nrows)]
    if deg(q) >= nrows:
        return None
    sol = linalg.solve(mat, rhs, QQ)
    if sol is None:
        return None
    return poly([c.value for c in sol])


def _solve_shift(L: DifferenceOperator, a: FieldElement) -> Outcome:
    k: RationalFunctionField = L.field
    ps, q = _clear_denominators(L, a)
    u = universal_denominator(ps)
    n = len(ps) - 1
    big = ONE
    for i in range(n + 1):
        big = plcm(big, polys.shift(u, i))
    Ps = [pmul(ps[i], pdiv_exact(big, polys.shift(u, i))) for i in range(n + 1)]
    Q = pmul(q, big)
    bound = degree_bound(Ps, deg(Q))
    z = polynomial_solutions(Ps, Q, bound)
    if z is None:
        return outcome.no(
            "no-rational-solution",
            universal_denominator=polys.poly_str(u),
            degree_bound=bound,
        )
    b = k.ratfun(z, u)
    assert L.apply(b) == a, "Abramov solution failed verification"
    return outcome.yes(b, universal_denominator=polys.poly_str(u), degree_bound=bound)


def _bounded_search(L: DifferenceOperator, a: FieldElement, max_deg: int) -> Outcome:
    """Budgeted ansatz for field instances without a full decision procedure.

    Tries numerators of degree <= max_deg over a short list of candidate
    denominators; the equation is linear in the numerator coefficients.
    """
    k = L.field
    dens = [ONE, a.value[1], pmul(a.value[1], k._sigma_poly(a.value[1]))]
    QQ = make_field("QQ")
    tried = set()
    for den in dens:
        if tuple(den) in tried:
            continue
        tried.add(tuple(den))
        cols = [L.apply(k.ratfun(poly([0] * d + [1]), den)) for d in range(max_deg + 1)]
        common = a.value[1]
        for col in cols:
            common = plcm(common, col.value[1])
        numified = [pmul(col.value[0], pdiv_exact(common, col.value[1])) for col in cols]
        target = pmul(a.value[0], pdiv_exact(common, a.value[1]))
        rows = max([deg(n) for n in numified] + [deg(target)]) + 1
        mat = [[QQ.element(n[r] if r < len(n) else 0) for n in numified]
               for r in range(rows)]
        rhs = [QQ.element(target[r] if r < len(target) else 0) for r in range(rows)]
        sol = linalg.solve(mat, rhs, QQ)
        if sol is not None:
            b = k.ratfun(poly([c.value for c in sol]), den)
            if L.apply(b) == a:
                return outcome.yes(b)
    return outcome.undecided("budgeted-search-exhausted", max_degree=max_deg)


def solve_additive_full(L: DifferenceOperator, a: FieldElement) -> Outcome:
    """Decide L(b) = a with a witness or a nonexistence certificate."""
    a = L.field.element(a)
    if a.is_zero():
        return outcome.yes(L.field.zero())
    k = L.field
    if isinstance(k, FiniteField):
        return _solve_finite(L, a)
    if isinstance(k, RationalField):
        c = L.scalar_value()
        if c.is_zero():
            return outcome.no("operator-vanishes-on-constants")
        return outcome.yes(a / c)
    if isinstance(k, RationalFunctionField):
        if k.mode == "shift":
            return _solve_shift(L, a)
        return _bounded_search(L, a, max_deg=4)
    raise OperatorError(f"unsupported field {k.descriptor}")


def solve_additive(L: DifferenceOperator, a: FieldElement):
    """b with L(b) = a, or None when none exists; raises when undecidable."""
    res = solve_additive_full(L, a)
    if res.status == outcome.UNDECIDED:
        raise OperatorError(f"undecided: {res.certificate}")
    return res.witness if res else None


def additive_kernel_basis(L: DifferenceOperator):
    """Basis of {b in k : L(b) = 0} over the sigma-constants (decidable fields)."""
    k = L.field
    if isinstance(k, FiniteField):
        mat, gfp = _ff_matrix(L)
        ker = linalg.kernel_basis(mat, gfp, ncols=k.m)
        return [FieldElement(k, tuple(c.value[0] for c in vec)) for vec in ker]
    if isinstance(k, RationalField):
        return [] if not L.scalar_value().is_zero() else [k.one()]
    if isinstance(k, RationalFunctionField) and k.mode == "shift":
        ps, _ = _clear_denominators(L, k.zero())
        u = universal_denominator(ps)
        n = len(ps) - 1
        big = ONE
        for i in range(n + 1):
            big = plcm(big, polys.shift(u, i))
        Ps = [pmul(ps[i], pdiv_exact(big, polys.shift(u, i))) for i in range(n + 1)]
        bound = degree_bound(Ps, -10 ** 9)
        if bound < 0:
            return []
        QQ = make_field("QQ")
        b = max(deg(p) for p in Ps)
        cols = []
        for d in range(bound + 1):
            img = ZERO
            for i, p in enumerate(Ps):
                img = polys.padd(img, pmul(p, polys.shift(poly([0] * d + [1]), i)))
            cols.append(img)
        mat = [[QQ.element(col[r] if r < len(col) else 0) for col in cols]
               for r in range(b + bound + 1)]
        ker = linalg.kernel_basis(mat, QQ, ncols=bound + 1)
        out = []
        for vec in ker:
            z = poly([c.value for c in vec])
            elt = k.ratfun(z, u)
            assert L.apply(elt).is_zero()
            out.append(elt)
        return out
    raise OperatorError(f"kernel computation unsupported over {k.descriptor}")


# --------------------------------------------------------------------------
# H^1 = k / L(k)


@dataclass
class AdditiveH1:
    kind: str                      # "finite" | "scalar" | "oracle"
    operator: DifferenceOperator
    size: int | None = None
    representatives: list | None = None

    def equivalent(self, a, a2) -> Outcome:
        """a ~ a2 iff a2 - a lies in L(k)."""
        return solve_additive_full(self.operator, a2 - a)


def classify_additive_h1(L: DifferenceOperator) -> AdditiveH1:
    k = L.field
    if isinstance(k, FiniteField):
        mat, gfp = _ff_matrix(L)
        # rows of the transpose are the images L(e_c); their echelon pivots
        # mark the coordinates covered by the image
        transpose = [[mat[r][c] for r in range(k.m)] for c in range(k.m)]
        _, piv = linalg.row_echelon(transpose, gfp)
        rank = len(piv)
        pivot_rows = sorted({c for _, c in piv})
        free_rows = [r for r in range(k.m) if r not in pivot_rows]
        reps = []
        for coords in itertools.product(range(k.p), repeat=len(free_rows)):
            vec = [0] * k.m
            for r, c in zip(free_rows, coords):
                vec[r] = c
            reps.append(FieldElement(k, tuple(vec)))
        assert len(reps) == k.p ** (k.m - rank)
        return AdditiveH1("finite", L, size=k.p ** (k.m - rank),
                          representatives=sorted(reps, key=lambda x: x.value))
    if isinstance(k, RationalField):
        c = L.scalar_value()
        if not c.is_zero():
            return AdditiveH1("scalar", L, size=1, representatives=[k.zero()])
        return AdditiveH1("scalar", L, size=None, representatives=None)
    if isinstance(k, RationalFunctionField) and k.mode == "shift":
        return AdditiveH1("oracle", L)
    raise OperatorError(f"classification unsupported over {k.descriptor}")


# --------------------------------------------------------------------------
# first-order multiplicative equations sigma^d(x) = a * x


def solve_sigma_quotient(a: FieldElement, d: int = 1) -> Outcome:
    """x in k^x with sigma^d(x) / x = a, or a certificate that none exists."""
    k = a.field
    if a.is_zero():
        return outcome.no("target-not-a-unit")
    if isinstance(k, FiniteField):
        for x in k.units():
            if x.sigma(d) == a * x:
                return outcome.yes(x)
        return outcome.no("exhausted-finite-field")
    if isinstance(k, RationalField):
        if a.is_one():
            return outcome.yes(k.one())
        return outcome.no("sigma-is-identity")
    if isinstance(k, RationalFunctionField) and k.mode == "shift":
        return _solve_sigma_quotient_shift(a, d)
    return outcome.undecided("multiplicative-solver-unsupported", field=k.descriptor)


def _solve_sigma_quotient_shift(a: FieldElement, d: int) -> Outcome:
    k = a.field
    num, den = a.value
    if num[-1] != 1:
        return outcome.no("leading-coefficient-obstruction",
                          leading=str(num[-1]))
    p, q = num, den
    f = k.one()

    def find_shift(p, q):
        if deg(p) <= 0 or deg(q) <= 0:
            return None, None
        bound = polys.cauchy_root_bound(p) + polys.cauchy_root_bound(q)
        top = int(bound / d) + 1
        for j in range(-top, top + 1):
            if j == 0:
                continue
            g = pgcd(p, polys.shift(q, j * d))
            if deg(g) > 0:
                return j, g
        return None, None

    while True:
        j, g = find_shift(p, q)
        if j is None:
            break
        p = pdiv_exact(p, g)
        q = pdiv_exact(q, polys.shift(g, -j * d))
        if j >= 1:
            w = ONE
            for i in range(1, j + 1):
                w = pmul(w, polys.shift(g, -i * d))
            f = f * k.ratfun(w)
        else:
            w = ONE
            for i in range(0, -j):
                w = pmul(w, polys.shift(g, i * d))
            f = f / k.ratfun(w)
    if p == ONE and q == ONE:
        assert f.sigma(d) == a * f
        return outcome.yes(f)
    return outcome.no("multiplicative-obstruction",
                      reduced_numerator=polys.poly_str(p),
                      reduced_denominator=polys.poly_str(q))
