"""Computable sigma-algebras over a sigma-field, in three kinds.

  * finite-dimensional algebras given by structure constants, a unit
    vector, and a sigma-semilinear matrix (TableAlgebra / TensorAlgebra);
  * Laurent monomial algebras k[u_1^{\\pm1},...,u_r^{\\pm1}] whose sigma
    sends each generator to a unit constant times a monomial;
  * free polynomial algebras k[y_1,...,y_r] whose sigma sends each
    generator to an affine-linear combination.

Every algebra is nonzero, hence faithfully flat over the base field.
Elements are sparse maps from basis indices (or exponent vectors) to
field elements with no stored zeros, so equality is dict equality.

On top of the raw algebras the module builds tensor squares and cubes
with their Amitsur face maps, the exactness audit of the complex
0 -> k -> A -> A(x)A -> A(x)A(x)A, and finite-dimensional faithfully
flat descent: the invariants B0 = {b : phi(b(x)1) = 1(x)b} of a descent
datum, together with the check that B0 (x) A -> B is an isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from .fields import FieldElement, SigmaField


class AlgebraError(ValueError):
    pass


class NonUnitError(AlgebraError):
    pass


# --------------------------------------------------------------------------
# elements


class AlgElement:
    __slots__ = ("algebra", "data")

    def __init__(self, algebra, data: dict):
        self.algebra = algebra
        self.data = {k: v for k, v in data.items() if not v.is_zero()}

    def _coerce(self, other):
        if isinstance(other, AlgElement):
            if other.algebra != self.algebra:
                raise AlgebraError("algebra mismatch")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.algebra.from_scalar(self.algebra.field.element(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.data)
        for k, v in other.data.items():
            cur = out.get(k)
            out[k] = v if cur is None else cur + v
        return AlgElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.algebra, {k: -v for k, v in self.data.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FieldElement) or isinstance(other, int):
            c = self.algebra.field.element(other)
            return AlgElement(self.algebra, {k: v * c for k, v in self.data.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgElement(self.algebra, self.algebra._mul_data(self.data, other.data))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        base = self
        if n < 0:
            base = self.inverse()
            n = -n
        r = self.algebra.one()
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def sigma(self, power: int = 1) -> "AlgElement":
        d = self.data
        for _ in range(power):
            d = self.algebra._sigma_data(d)
        return AlgElement(self.algebra, d)

    def maybe_inverse(self):
        d = self.algebra._invert_data(self.data)
        return None if d is None else AlgElement(self.algebra, d)

    def inverse(self) -> "AlgElement":
        inv = self.maybe_inverse()
        if inv is None:
            raise NonUnitError(f"element is not a unit: {self}")
        return inv

    def is_unit(self) -> bool:
        return self.maybe_inverse() is not None

    def is_zero(self) -> bool:
        return not self.data

    def scalar_part(self):
        """c with self = c * 1, or None."""
        unit = self.algebra.unit_data()
        if not self.data:
            return self.algebra.field.zero()
        k0, u0 = next(iter(unit.items()))
        c = self.data.get(k0)
        if c is None:
            return None
        c = c / u0
        if self == self.algebra.from_scalar(c):
            return c
        return None

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.from_scalar(self.algebra.field.element(other))
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.algebra == other.algebra and self.data == other.data

    def __hash__(self):
        return hash((self.algebra.cache_key(), frozenset(self.data.items())))

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for k in sorted(self.data):
            c = self.data[k]
            label = self.algebra.index_label(k)
            cs = str(c)
            if label == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(label)
            else:
                if any(ch in cs[1:] for ch in "+-") or "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self.algebra.kind}: {self}>"


# --------------------------------------------------------------------------
# algebra base


class SigmaAlgebra:
    kind = "abstract"
    field: SigmaField

    def element(self, data: dict) -> AlgElement:
        return AlgElement(self, data)

    def zero(self) -> AlgElement:
        return AlgElement(self, {})

    def one(self) -> AlgElement:
        return AlgElement(self, dict(self.unit_data()))

    def from_scalar(self, c) -> AlgElement:
        c = self.field.element(c)
        return AlgElement(self, {k: v * c for k, v in self.unit_data().items()})

    def unit_data(self) -> dict:
        raise NotImplementedError

    def cache_key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, SigmaAlgebra) and self.cache_key() == other.cache_key()

    def __hash__(self):
        return hash(self.cache_key())

    def index_label(self, k) -> str:
        raise NotImplementedError


class FinDimAlgebra(SigmaAlgebra):
    """Common interface: a finite basis, structure constants, sigma matrix."""

    @property
    def dim(self) -> int:
        return len(self.index_list())

    def index_list(self) -> list:
        raise NotImplementedError

    def basis_mult(self, i, j) -> dict:
        raise NotImplementedError

    def basis_sigma(self, i) -> dict:
        raise NotImplementedError

    def basis_element(self, i) -> AlgElement:
        return AlgElement(self, {i: self.field.one()})

    def _mul_data(self, d1, d2):
        out = {}
        for i, c1 in d1.items():
            for j, c2 in d2.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                for r, s in self.basis_mult(i, j).items():
                    v = c * s
                    cur = out.get(r)
                    out[r] = v if cur is None else cur + v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _sigma_data(self, d):
        out = {}
        for i, c in d.items():
            cs = c.sigma()
            if cs.is_zero():
                continue
            for r, s in self.basis_sigma(i).items():
                v = cs * s
                cur = out.get(r)
                out[r] = v if cur is None else cur + v
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _invert_data(self, d):
        if not d:
            return None
        idx = self.index_list()
        x = AlgElement(self, d)
        cols = [x * self.basis_element(i) for i in idx]
        matrix = [[col.data.get(r, self.field.zero()) for col in cols] for r in idx]
        unit = self.unit_data()
        rhs = [unit.get(r, self.field.zero()) for r in idx]
        sol = linalg.solve(matrix, rhs, self.field)
        if sol is None:
            return None
        return {i: c for i, c in zip(idx, sol) if not c.is_zero()}

    def to_vector(self, x: AlgElement) -> list:
        zero = self.field.zero()
        return [x.data.get(i, zero) for i in self.index_list()]

    def from_vector(self, vec) -> AlgElement:
        return AlgElement(self, {i: c for i, c in zip(self.index_list(), vec)})

    def enumerate_elements(self):
        """All elements, finite base field only, in a fixed order."""
        if not self.field.finite:
            raise AlgebraError("enumeration needs a finite base field")
        idx = self.index_list()
        for coords in itertools.product(*[list(self.field.elements()) for _ in idx]):
            yield AlgElement(self, {i: c for i, c in zip(idx, coords)})

    def enumerate_units(self):
        for x in self.enumerate_elements():
            if x.is_unit():
                yield x


class TableAlgebra(FinDimAlgebra):
    kind = "findim"

    def __init__(self, field, labels, mult, unit, sigma, check: bool = True):
        """mult[i][j], sigma[i]: dense coefficient vectors; unit: dense vector."""
        self.field = field
        self.labels = tuple(labels)
        m = len(self.labels)
        if m == 0:
            raise AlgebraError("zero algebra (empty basis)")
        if len(mult) != m or any(len(row) != m for row in mult) or len(sigma) != m:
            raise AlgebraError("inconsistent table dimensions")
        conv = lambda vec: tuple(field.element(c) for c in vec)
        self._mult = [[conv(mult[i][j]) for j in range(m)] for i in range(m)]
        self._unit = conv(unit)
        self._sigma = [conv(sigma[i]) for i in range(m)]
        if any(len(v) != m for row in self._mult for v in row) or len(self._unit) != m \
                or any(len(v) != m for v in self._sigma):
            raise AlgebraError("inconsistent table dimensions")
        self._key = ("table", field.descriptor, self.labels,
                     tuple(tuple(v) for row in self._mult for v in row),
                     tuple(self._unit), tuple(tuple(v) for v in self._sigma))
        if check:
            self.validate()

    def cache_key(self):
        return self._key

    def index_list(self):
        return list(range(len(self.labels)))

    def index_label(self, k):
        return self.labels[k]

    def basis_mult(self, i, j):
        return {r: c for r, c in enumerate(self._mult[i][j]) if not c.is_zero()}

    def basis_sigma(self, i):
        return {r: c for r, c in enumerate(self._sigma[i]) if not c.is_zero()}

    def unit_data(self):
        return {r: c for r, c in enumerate(self._unit) if not c.is_zero()}

    def validate(self):
        m = len(self.labels)
        if all(c.is_zero() for c in self._unit):
            raise AlgebraError("zero algebra: unit is zero")
        e = [self.basis_element(i) for i in range(m)]
        one = self.one()
        for i in range(m):
            if one * e[i] != e[i]:
                raise AlgebraError(f"unit fails on basis element {self.labels[i]}")
            for j in range(i, m):
                if self._mult[i][j] != self._mult[j][i]:
                    raise AlgebraError(f"multiplication not commutative at ({i},{j})")
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if (e[i] * e[j]) * e[k] != e[i] * (e[j] * e[k]):
                        raise AlgebraError(f"multiplication not associative at ({i},{j},{k})")
        # sigma must be multiplicative and unit-preserving; semilinearity on
        # coefficients holds by construction
        if one.sigma() != one:
            raise AlgebraError("sigma does not fix 1")
        for i in range(m):
            for j in range(i, m):
                if (e[i] * e[j]).sigma() != e[i].sigma() * e[j].sigma():
                    raise AlgebraError(f"sigma not multiplicative at ({i},{j})")


class TensorAlgebra(FinDimAlgebra):
    """Tensor product of finite-dimensional algebras; basis = index tuples."""

    kind = "findim"

    def __init__(self, factors):
        if not factors:
            raise AlgebraError("empty tensor product")
        fields = {f.field for f in factors}
        if len(fields) != 1:
            raise AlgebraError("tensor factors over different fields")
        self.field = factors[0].field
        self.factors = tuple(factors)
        self._indices = list(itertools.product(*[f.index_list() for f in factors]))
        self._unit = None
        self._mult_cache = {}
        self._sigma_cache = {}

    def cache_key(self):
        return ("tensor",) + tuple(f.cache_key() for f in self.factors)

    def index_list(self):
        return self._indices

    def index_label(self, k):
        return "#".join(f.index_label(i) for f, i in zip(self.factors, k))

    def unit_data(self):
        if self._unit is None:
            out = {(): self.field.one()}
            for f in self.factors:
                nxt = {}
                for key, c in out.items():
                    for i, u in f.unit_data().items():
                        nxt[key + (i,)] = c * u
                out = nxt
            self._unit = {k: v for k, v in out.items() if not v.is_zero()}
        return self._unit

    def basis_mult(self, i, j):
        got = self._mult_cache.get((i, j))
        if got is None:
            out = {(): self.field.one()}
            for f, a, b in zip(self.factors, i, j):
                nxt = {}
                part = f.basis_mult(a, b)
                for key, c in out.items():
                    for r, s in part.items():
                        v = c * s
                        if not v.is_zero():
                            nxt[key + (r,)] = v
                out = nxt
            got = out
            self._mult_cache[(i, j)] = got
        return got

    def basis_sigma(self, i):
        got = self._sigma_cache.get(i)
        if got is None:
            out = {(): self.field.one()}
            for f, a in zip(self.factors, i):
                nxt = {}
                part = f.basis_sigma(a)
                for key, c in out.items():
                    for r, s in part.items():
                        v = c * s
                        if not v.is_zero():
                            nxt[key + (r,)] = v
                out = nxt
            got = out
            self._sigma_cache[i] = got
        return got

    def pure_tensor(self, *parts) -> AlgElement:
        if len(parts) != len(self.factors):
            raise AlgebraError("tensor arity mismatch")
        out = {(): self.field.one()}
        for x in parts:
            nxt = {}
            for key, c in out.items():
                for i, v in x.data.items():
                    w = c * v
                    if not w.is_zero():
                        nxt[key + (i,)] = w
            out = nxt
        return AlgElement(self, out)


class LaurentAlgebra(SigmaAlgebra):
    """k[u_1^{\\pm1},...,u_r^{\\pm1}] with sigma(u_i) = c_i * u^(v_i)."""

    kind = "laurent"

    def __init__(self, field, ngens: int, sigma_images):
        self.field = field
        self.ngens = ngens
        imgs = []
        for c, v in sigma_images:
            c = field.element(c)
            v = tuple(v)
            if c.is_zero():
                raise AlgebraError("sigma image of a Laurent generator must be a unit")
            if len(v) != ngens:
                raise AlgebraError("sigma image exponent arity mismatch")
            imgs.append((c, v))
        if len(imgs) != ngens:
            raise AlgebraError("need one sigma image per generator")
        self.sigma_images = tuple(imgs)

    def cache_key(self):
        return ("laurent", self.field.descriptor, self.ngens, self.sigma_images)

    def index_label(self, k):
        parts = []
        for i, e in enumerate(k):
            if e:
                name = f"u{i + 1}" if self.ngens > 1 else "u"
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def unit_data(self):
        return {(0,) * self.ngens: self.field.one()}

    def gen(self, i: int) -> AlgElement:
        v = [0] * self.ngens
        v[i] = 1
        return AlgElement(self, {tuple(v): self.field.one()})

    def _mul_data(self, d1, d2):
        out = {}
        for w1, c1 in d1.items():
            for w2, c2 in d2.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                key = tuple(a + b for a, b in zip(w1, w2))
                cur = out.get(key)
                out[key] = c if cur is None else cur + c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _sigma_data(self, d):
        out = {}
        for w, c in d.items():
            coef = c.sigma()
            exp = [0] * self.ngens
            for i, e in enumerate(w):
                if e == 0:
                    continue
                ci, vi = self.sigma_images[i]
                coef = coef * ci ** e
                for j, vj in enumerate(vi):
                    exp[j] += e * vj
            if coef.is_zero():
                continue
            key = tuple(exp)
            cur = out.get(key)
            out[key] = coef if cur is None else cur + coef
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _invert_data(self, d):
        if len(d) != 1:
            return None
        (w, c), = d.items()
        return {tuple(-e for e in w): c.inv()}


class FreePolyAlgebra(SigmaAlgebra):
    """k[y_1,...,y_r] with sigma(y_i) affine-linear over k."""

    kind = "freepoly"

    def __init__(self, field, ngens: int, sigma_images):
        self.field = field
        self.ngens = ngens
        imgs = []
        for const, coeffs in sigma_images:
            const = field.element(const)
            coeffs = tuple(field.element(c) for c in coeffs)
            if len(coeffs) != ngens:
                raise AlgebraError("sigma image arity mismatch")
            imgs.append((const, coeffs))
        if len(imgs) != ngens:
            raise AlgebraError("need one sigma image per generator")
        self.sigma_images = tuple(imgs)

    def cache_key(self):
        return ("freepoly", self.field.descriptor, self.ngens, self.sigma_images)

    def index_label(self, k):
        parts = []
        for i, e in enumerate(k):
            if e:
                name = f"y{i + 1}" if self.ngens > 1 else "y"
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def unit_data(self):
        return {(0,) * self.ngens: self.field.one()}

    def gen(self, i: int) -> AlgElement:
        v = [0] * self.ngens
        v[i] = 1
        return AlgElement(self, {tuple(v): self.field.one()})

    def _mul_data(self, d1, d2):
        out = {}
        for w1, c1 in d1.items():
            for w2, c2 in d2.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                key = tuple(a + b for a, b in zip(w1, w2))
                cur = out.get(key)
                out[key] = c if cur is None else cur + c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _sigma_gen(self, i) -> AlgElement:
        const, coeffs = self.sigma_images[i]
        data = {}
        if not const.is_zero():
            data[(0,) * self.ngens] = const
        for j, c in enumerate(coeffs):
            if not c.is_zero():
                v = [0] * self.ngens
                v[j] = 1
                data[tuple(v)] = c
        return AlgElement(self, data)

    def _sigma_data(self, d):
        total = self.zero()
        for w, c in d.items():
            term = self.from_scalar(c.sigma())
            for i, e in enumerate(w):
                if e:
                    term = term * self._sigma_gen(i) ** e
            total = total + term
        return total.data

    def _invert_data(self, d):
        if len(d) != 1:
            return None
        (w, c), = d.items()
        if any(e != 0 for e in w):
            return None
        return {w: c.inv()}


# --------------------------------------------------------------------------
# tensor squares, cubes, face maps


def tensor_square(A: SigmaAlgebra) -> SigmaAlgebra:
    if isinstance(A, FinDimAlgebra):
        return TensorAlgebra([A, A])
    if isinstance(A, LaurentAlgebra):
        r = A.ngens
        imgs = []
        for block in range(2):
            for c, v in A.sigma_images:
                pad = (0,) * (block * r) + v + (0,) * ((1 - block) * r)
                imgs.append((c, pad))
        return LaurentAlgebra(A.field, 2 * r, imgs)
    if isinstance(A, FreePolyAlgebra):
        r = A.ngens
        imgs = []
        for block in range(2):
            for const, coeffs in A.sigma_images:
                zero = A.field.zero()
                pad = (zero,) * (block * r) + coeffs + (zero,) * ((1 - block) * r)
                imgs.append((const, pad))
        return FreePolyAlgebra(A.field, 2 * r, imgs)
    raise AlgebraError(f"unsupported algebra kind {A.kind}")


def tensor_cube(A: SigmaAlgebra) -> SigmaAlgebra:
    if isinstance(A, FinDimAlgebra):
        return TensorAlgebra([A, A, A])
    if isinstance(A, LaurentAlgebra):
        r = A.ngens
        imgs = []
        for block in range(3):
            for c, v in A.sigma_images:
                pad = (0,) * (block * r) + v + (0,) * ((2 - block) * r)
                imgs.append((c, pad))
        return LaurentAlgebra(A.field, 3 * r, imgs)
    if isinstance(A, FreePolyAlgebra):
        r = A.ngens
        imgs = []
        for block in range(3):
            for const, coeffs in A.sigma_images:
                zero = A.field.zero()
                pad = (zero,) * (block * r) + coeffs + (zero,) * ((2 - block) * r)
                imgs.append((const, pad))
        return FreePolyAlgebra(A.field, 3 * r, imgs)
    raise AlgebraError(f"unsupported algebra kind {A.kind}")


class TensorContext:
    """A, A(x)A, A(x)A(x)A and the Amitsur face maps between them.

    Conventions: d1(a) = 1(x)a, d2(a) = a(x)1, dd1(a(x)b) = 1(x)a(x)b,
    dd2(a(x)b) = a(x)1(x)b, dd3(a(x)b) = a(x)b(x)1.
    """

    def __init__(self, A: SigmaAlgebra):
        self.A = A
        self.AA = tensor_square(A)
        self.AAA = tensor_cube(A)
        self._findim = isinstance(A, FinDimAlgebra)

    def pair(self, x: AlgElement, y: AlgElement) -> AlgElement:
        if self._findim:
            return self.AA.pure_tensor(x, y)
        out = {}
        for w1, c1 in x.data.items():
            for w2, c2 in y.data.items():
                c = c1 * c2
                if not c.is_zero():
                    out[w1 + w2] = c
        return AlgElement(self.AA, out)

    def triple(self, x, y, z) -> AlgElement:
        if self._findim:
            return self.AAA.pure_tensor(x, y, z)
        out = {}
        for w1, c1 in x.data.items():
            for w2, c2 in y.data.items():
                c12 = c1 * c2
                for w3, c3 in z.data.items():
                    c = c12 * c3
                    if not c.is_zero():
                        out[w1 + w2 + w3] = c
        return AlgElement(self.AAA, out)

    def d1(self, x: AlgElement) -> AlgElement:
        return self.pair(self.A.one(), x)

    def d2(self, x: AlgElement) -> AlgElement:
        return self.pair(x, self.A.one())

    def _insert(self, z: AlgElement, pos: int) -> AlgElement:
        """Insert a tensor-1 into slot pos of an AA element."""
        if self._findim:
            unit = self.A.unit_data()
            out = {}
            for (i, j), c in z.data.items():
                for r, u in unit.items():
                    v = c * u
                    if v.is_zero():
                        continue
                    key = ((r, i, j), (i, r, j), (i, j, r))[pos]
                    cur = out.get(key)
                    out[key] = v if cur is None else cur + v
            return AlgElement(self.AAA, out)
        r = getattr(self.A, "ngens")
        zero = (0,) * r
        out = {}
        for w, c in z.data.items():
            w1, w2 = w[:r], w[r:]
            key = (zero + w1 + w2, w1 + zero + w2, w1 + w2 + zero)[pos]
            out[key] = c
        return AlgElement(self.AAA, out)

    def dd1(self, z: AlgElement) -> AlgElement:
        return self._insert(z, 0)

    def dd2(self, z: AlgElement) -> AlgElement:
        return self._insert(z, 1)

    def dd3(self, z: AlgElement) -> AlgElement:
        return self._insert(z, 2)

    def simplicial_check(self, samples) -> bool:
        """dd3.d2 = dd2.d2, dd2.d1 = dd1.d1, dd3.d1 = dd1.d2 on the samples."""
        for x in samples:
            if self.dd3(self.d2(x)) != self.dd2(self.d2(x)):
                return False
            if self.dd2(self.d1(x)) != self.dd1(self.d1(x)):
                return False
            if self.dd3(self.d1(x)) != self.dd1(self.d2(x)):
                return False
        return True


# --------------------------------------------------------------------------
# constructors


def make_findim(field, labels, mult, unit, sigma) -> TableAlgebra:
    """Validated finite-dimensional algebra from raw tables."""
    return TableAlgebra(field, labels, mult, unit, sigma, check=True)


def make_mu_algebra(a: FieldElement, b: FieldElement) -> TableAlgebra:
    """k[y]/(y^2 - a) with sigma(y) = b*y; requires sigma(a) = a*b^2."""
    field = a.field
    b = field.element(b)
    if a.is_zero() or b.is_zero():
        raise AlgebraError("mu-algebra parameters must be units")
    if a.sigma() != a * b * b:
        raise AlgebraError("constraint sigma(a) = a*b^2 violated")
    zero, one = field.zero(), field.one()
    mult = [[[one, zero], [zero, one]],
            [[zero, one], [a, zero]]]
    sigma = [[one, zero], [zero, b]]
    return TableAlgebra(field, ("1", "y"), mult, [one, zero], sigma)


def make_split_algebra(field, m: int, perm=None) -> TableAlgebra:
    """k^m with sigma permuting the idempotent coordinates."""
    if perm is None:
        perm = list(range(m))
    if sorted(perm) != list(range(m)):
        raise AlgebraError("sigma permutation must be a bijection")
    zero, one = field.zero(), field.one()
    ident = lambda i: [one if r == i else zero for r in range(m)]
    mult = [[ident(i) if i == j else [zero] * m for j in range(m)] for i in range(m)]
    sigma = [ident(perm[i]) for i in range(m)]
    return TableAlgebra(field, tuple(f"e{i + 1}" for i in range(m)),
                        mult, [one] * m, sigma)


def make_cyclic_group_algebra(field, n: int, j: int = 1) -> TableAlgebra:
    """Group algebra k[Z/n] with sigma(g) = g^j (j may be 0: sigma collapses g)."""
    zero, one = field.zero(), field.one()
    vec = lambda r: [one if s == r else zero for s in range(n)]
    mult = [[vec((i + k) % n) for k in range(n)] for i in range(n)]
    sigma = [vec(i * j % n) for i in range(n)]
    return TableAlgebra(field, tuple(f"g{i}" for i in range(n)),
                        mult, vec(0), sigma)


def make_truncated_algebra(field, n: int, c) -> TableAlgebra:
    """k[y]/(y^n) with sigma(y) = c*y."""
    c = field.element(c)
    zero, one = field.zero(), field.one()
    vec = lambda r: [one if s == r else zero for s in range(n)]
    mult = [[vec(i + k) if i + k < n else [zero] * n for k in range(n)] for i in range(n)]
    sigma = [[c ** i if s == i else zero for s in range(n)] for i in range(n)]
    return TableAlgebra(field, tuple("1" if i == 0 else f"y^{i}" if i > 1 else "y"
                                     for i in range(n)),
                        mult, vec(0), sigma)


def direct_sum(A: TableAlgebra, B: TableAlgebra) -> TableAlgebra:
    if A.field != B.field:
        raise AlgebraError("direct sum over different fields")
    field = A.field
    zero = field.zero()
    ma, mb = len(A.labels), len(B.labels)
    m = ma + mb

    def embed(vec, offset):
        out = [zero] * m
        for i, c in enumerate(vec):
            out[offset + i] = c
        return out

    mult = [[[zero] * m for _ in range(m)] for _ in range(m)]
    for i in range(ma):
        for j in range(ma):
            mult[i][j] = embed(A._mult[i][j], 0)
    for i in range(mb):
        for j in range(mb):
            mult[ma + i][ma + j] = embed(B._mult[i][j], ma)
    unit = embed(A._unit, 0)
    for i, c in enumerate(B._unit):
        unit[ma + i] = c
    sigma = [embed(A._sigma[i], 0) for i in range(ma)] + \
            [embed(B._sigma[i], ma) for i in range(mb)]
    labels = tuple(f"l.{s}" for s in A.labels) + tuple(f"r.{s}" for s in B.labels)
    return TableAlgebra(field, labels, mult, unit, sigma)


def change_basis(A: FinDimAlgebra, P) -> TableAlgebra:
    """Rewrite A in the basis f_j = sum_i P[i][j] e_i; P invertible over k."""
    field = A.field
    idx = A.index_list()
    m = len(idx)
    P = [[field.element(c) for c in row] for row in P]
    Pinv = linalg.invert_matrix(P, field)
    if Pinv is None:
        raise AlgebraError("basis change matrix is singular")
    fs = [AlgElement(A, {idx[i]: P[i][j] for i in range(m) if not P[i][j].is_zero()})
          for j in range(m)]

    def to_new(x: AlgElement):
        vec = A.to_vector(x)
        return [sum((Pinv[r][i] * vec[i] for i in range(m)), field.zero()) for r in range(m)]

    mult = [[to_new(fs[i] * fs[j]) for j in range(m)] for i in range(m)]
    sigma = [to_new(fs[i].sigma()) for i in range(m)]
    unit = to_new(A.one())
    return TableAlgebra(field, tuple(f"f{i + 1}" for i in range(m)), mult, unit, sigma)


def scalar_algebra(field) -> TableAlgebra:
    """k itself as the one-dimensional k-sigma-algebra."""
    return TableAlgebra(field, ("1",), [[[field.one()]]], [field.one()],
                        [[field.one()]])


# --------------------------------------------------------------------------
# Amitsur exactness audit


@dataclass
class AmitsurReport:
    algebra_dim: int
    dim_ker_first: int
    first_kernel: list
    unit_spans_first_kernel: bool
    dim_ker_second: int
    dim_image_first: int
    composite_is_zero: bool
    exact: bool
    second_kernel: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.exact and self.unit_spans_first_kernel
                and self.composite_is_zero and self.dim_ker_first == 1)


def amitsur_audit(A: FinDimAlgebra) -> AmitsurReport:
    """Exact verification of 0 -> k -> A -> A(x)A -> A(x)A(x)A.

    Checks ker(d2 - d1) = k*1 and ker(dd3 - dd2 + dd1) = im(d2 - d1) by
    exact linear algebra over the base field.
    """
    if not isinstance(A, FinDimAlgebra):
        raise AlgebraError("amitsur_audit needs a finite-dimensional algebra")
    field = A.field
    tc = TensorContext(A)
    idxA = A.index_list()
    idxAA = tc.AA.index_list()
    idxAAA = tc.AAA.index_list()
    zero = field.zero()

    first_images = [tc.d2(A.basis_element(i)) - tc.d1(A.basis_element(i)) for i in idxA]
    m1 = [[img.data.get(r, zero) for img in first_images] for r in idxAA]
    ker1_vecs = linalg.kernel_basis(m1, field, ncols=len(idxA))
    ker1 = [A.from_vector(v) for v in ker1_vecs]
    unit_ok = len(ker1_vecs) == 1 and linalg.in_span(
        [A.to_vector(k) for k in ker1], A.to_vector(A.one()), field) is not None

    def second_map(z: AlgElement) -> AlgElement:
        return tc.dd3(z) - tc.dd2(z) + tc.dd1(z)

    second_images = {}
    for key in idxAA:
        second_images[key] = second_map(AlgElement(tc.AA, {key: field.one()}))
    m2 = [[second_images[c].data.get(r, zero) for c in idxAA] for r in idxAAA]
    ker2_vecs = linalg.kernel_basis(m2, field, ncols=len(idxAA))

    composite_zero = all(second_map(img).is_zero() for img in first_images)
    dim_im1 = len(idxA) - len(ker1_vecs)
    exact = composite_zero and len(ker2_vecs) == dim_im1

    return AmitsurReport(
        algebra_dim=len(idxA),
        dim_ker_first=len(ker1_vecs),
        first_kernel=ker1,
        unit_spans_first_kernel=unit_ok,
        dim_ker_second=len(ker2_vecs),
        dim_image_first=dim_im1,
        composite_is_zero=composite_zero,
        exact=exact,
        second_kernel=[tc.AA.from_vector(v) for v in ker2_vecs],
    )


# --------------------------------------------------------------------------
# algebra morphisms


class AlgebraMorphism:
    """k-sigma-algebra morphism given on a basis or on generators."""

    def __init__(self, source, target, images, check: bool = True):
        self.source = source
        self.target = target
        if isinstance(source, FinDimAlgebra):
            idx = source.index_list()
            if len(images) != len(idx):
                raise AlgebraError("need one image per basis element")
            self.images = {k: img for k, img in zip(idx, images)}
        else:
            if len(images) != source.ngens:
                raise AlgebraError("need one image per generator")
            self.images = list(images)
        if check:
            self.validate()

    @classmethod
    def identity(cls, A):
        if isinstance(A, FinDimAlgebra):
            return cls(A, A, [A.basis_element(i) for i in A.index_list()], check=False)
        return cls(A, A, [A.gen(i) for i in range(A.ngens)], check=False)

    def apply(self, x: AlgElement) -> AlgElement:
        if x.algebra != self.source:
            raise AlgebraError("element not from the morphism's source")
        if isinstance(self.source, FinDimAlgebra):
            total = self.target.zero()
            for k, c in x.data.items():
                total = total + self.images[k] * c
            return total
        total = self.target.zero()
        for w, c in x.data.items():
            term = self.target.from_scalar(c)
            for i, e in enumerate(w):
                if e:
                    term = term * self.images[i] ** e
            total = total + term
        return total

    def validate(self):
        if self.source.field != self.target.field:
            raise AlgebraError("morphism must preserve the base field")
        if isinstance(self.source, FinDimAlgebra):
            idx = self.source.index_list()
            if self.apply(self.source.one()) != self.target.one():
                raise AlgebraError("morphism does not preserve 1")
            es = {i: self.source.basis_element(i) for i in idx}
            for i in idx:
                if self.apply(es[i].sigma()) != self.images[i].sigma():
                    raise AlgebraError("morphism does not commute with sigma")
                for j in idx:
                    if self.apply(es[i] * es[j]) != self.images[i] * self.images[j]:
                        raise AlgebraError("morphism is not multiplicative")
        else:
            if isinstance(self.source, LaurentAlgebra):
                for img in self.images:
                    if not img.is_unit():
                        raise AlgebraError("Laurent generator must map to a unit")
            for i in range(self.source.ngens):
                if self.apply(self.source.gen(i).sigma()) != self.images[i].sigma():
                    raise AlgebraError("morphism does not commute with sigma")

    def square_apply(self, ctx_src: TensorContext, ctx_tgt: TensorContext,
                     x: AlgElement) -> AlgElement:
        """Induced map A(x)A -> B(x)B on a tensor-square element."""
        if isinstance(self.source, FinDimAlgebra):
            total = ctx_tgt.AA.zero()
            for (i, j), c in x.data.items():
                total = total + ctx_tgt.pair(self.images[i], self.images[j]) * c
            return total
        r = self.source.ngens
        total = ctx_tgt.AA.zero()
        for w, c in x.data.items():
            left = self.source.element({w[:r]: self.source.field.one()})
            right = self.source.element({w[r:]: self.source.field.one()})
            total = total + ctx_tgt.pair(self.apply(left), self.apply(right)) * c
        return total


# --------------------------------------------------------------------------
# finite-dimensional faithfully flat descent


class DescentDatum:
    """phi: B(x)A -> A(x)B over the A(x)A-context, with cocycle condition.

    B is a finite-dimensional k-algebra carrying an A-algebra structure
    through iota; phi is stored column-sparse on the tensor basis.
    """

    def __init__(self, A: FinDimAlgebra, B: FinDimAlgebra, iota: AlgebraMorphism,
                 phi_images: dict, check: bool = True):
        self.A = A
        self.B = B
        self.iota = iota
        self.BA = TensorAlgebra([B, A])
        self.AB = TensorAlgebra([A, B])
        self.phi_images = {
            k: (v if isinstance(v, AlgElement) else AlgElement(self.AB, v))
            for k, v in phi_images.items()
        }
        if check:
            self.validate()

    def apply(self, x: AlgElement) -> AlgElement:
        total = self.AB.zero()
        for k, c in x.data.items():
            total = total + self.phi_images[k] * c
        return total

    def _mod_action_ba(self, i, j, x: AlgElement) -> AlgElement:
        # (e_i (x) e_j) . (b (x) a) = (iota(e_i) b) (x) (e_j a)
        fac = self.BA.pure_tensor(self.iota.apply(self.A.basis_element(i)),
                                  self.A.basis_element(j))
        return fac * x

    def _mod_action_ab(self, i, j, x: AlgElement) -> AlgElement:
        fac = self.AB.pure_tensor(self.A.basis_element(i),
                                  self.iota.apply(self.A.basis_element(j)))
        return fac * x

    def validate(self):
        self.iota.validate()
        idx_ba = self.BA.index_list()
        if set(self.phi_images) != set(idx_ba):
            raise AlgebraError("phi must be defined on the whole tensor basis")
        if self.apply(self.BA.one()) != self.AB.one():
            raise AlgebraError("phi does not preserve 1")
        basis = {k: self.BA.basis_element(k) for k in idx_ba}
        for k1 in idx_ba:
            for k2 in idx_ba:
                if self.apply(basis[k1] * basis[k2]) != self.phi_images[k1] * self.phi_images[k2]:
                    raise AlgebraError("phi is not a ring morphism")
        for k in idx_ba:
            if self.apply(basis[k].sigma()) != self.phi_images[k].sigma():
                raise AlgebraError("phi does not commute with sigma")
        for i in self.A.index_list():
            for j in self.A.index_list():
                for k in idx_ba:
                    lhs = self.apply(self._mod_action_ba(i, j, basis[k]))
                    rhs = self._mod_action_ab(i, j, self.phi_images[k])
                    if lhs != rhs:
                        raise AlgebraError("phi is not A(x)A-linear")
        zero = self.A.field.zero()
        idx_ab = self.AB.index_list()
        mat = [[self.phi_images[c].data.get(r, zero) for c in idx_ba] for r in idx_ab]
        if linalg.rank(mat, self.A.field) != len(idx_ba):
            raise AlgebraError("phi is not bijective")
        self._check_cocycle()

    def _check_cocycle(self):
        BAA = TensorAlgebra([self.B, self.A, self.A])
        ABA = TensorAlgebra([self.A, self.B, self.A])
        AAB = TensorAlgebra([self.A, self.A, self.B])

        def phi12(x):
            # B(x)A(x)A -> A(x)B(x)A
            total = ABA.zero()
            for (b, a1, a2), c in x.data.items():
                img = self.phi_images[(b, a1)]
                for (r, s), v in img.data.items():
                    total = total + ABA.element({(r, s, a2): v * c})
            return total

        def phi23(x):
            # A(x)B(x)A -> A(x)A(x)B
            total = AAB.zero()
            for (a0, b, a2), c in x.data.items():
                img = self.phi_images[(b, a2)]
                for (r, s), v in img.data.items():
                    total = total + AAB.element({(a0, r, s): v * c})
            return total

        def phi13(x):
            # B(x)A(x)A -> A(x)A(x)B, untouched middle slot
            total = AAB.zero()
            for (b, a1, a2), c in x.data.items():
                img = self.phi_images[(b, a2)]
                for (r, s), v in img.data.items():
                    total = total + AAB.element({(r, a1, s): v * c})
            return total

        for key in BAA.index_list():
            e = BAA.basis_element(key)
            if phi13(e) != phi23(phi12(e)):
                raise AlgebraError("descent cocycle condition phi13 = phi12 . phi23 fails")


def canonical_descent_datum(C0: FinDimAlgebra, A: FinDimAlgebra) -> DescentDatum:
    """The canonical datum on B = C0 (x) A, whose invariants are C0 (x) 1."""
    B = TensorAlgebra([C0, A])
    iota = AlgebraMorphism(
        A, B, [B.pure_tensor(C0.one(), A.basis_element(j)) for j in A.index_list()],
        check=False)
    AB = TensorAlgebra([A, B])
    phi_images = {}
    one = A.field.one()
    for (c, a) in B.index_list():
        for a2 in A.index_list():
            phi_images[((c, a), a2)] = AlgElement(AB, {(a, (c, a2)): one})
    return DescentDatum(A, B, iota, phi_images, check=False)


def mu_twisted_datum(A: FinDimAlgebra, chi: AlgElement) -> DescentDatum:
    """Descent datum on A (x) k[g]/(g^2-1) twisted by a mu2 cocycle chi.

    chi lives in (A(x)A)^x with chi^2 = 1 and sigma(chi) = chi; the datum
    is the coordinate-ring form of 'multiply the torsor by chi'.
    """
    field = A.field
    zero, one = field.zero(), field.one()
    G2 = TableAlgebra(field, ("1", "g"),
                      [[[one, zero], [zero, one]], [[zero, one], [one, zero]]],
                      [one, zero], [[one, zero], [zero, one]])
    B = TensorAlgebra([A, G2])
    iota = AlgebraMorphism(
        A, B, [B.pure_tensor(A.basis_element(i), G2.one()) for i in A.index_list()],
        check=False)
    AB = TensorAlgebra([A, B])
    phi_images = {}
    for ((i, eps), j) in TensorAlgebra([B, A]).index_list():
        src = AlgElement(chi.algebra, {(i, j): one})
        if eps == 1:
            src = src * chi
        img = {}
        for (r, s), v in src.data.items():
            img[(r, (s, eps))] = v
        phi_images[((i, eps), j)] = AlgElement(AB, img)
    return DescentDatum(A, B, iota, phi_images, check=False)


@dataclass
class DescentResult:
    invariants: TableAlgebra
    basis_in_B: list
    base_change_is_isomorphism: bool


def descend_invariants(datum: DescentDatum) -> DescentResult:
    """B0 = {b in B : phi(b(x)1) = 1(x)b} as a validated k-sigma-algebra.

    Verifies closure under multiplication and sigma, and that the
    canonical map B0 (x) A -> B is an isomorphism.
    """
    datum.validate()
    A, B = datum.A, datum.B
    field = A.field
    zero = field.zero()
    idxB = B.index_list()
    idxAB = datum.AB.index_list()

    cols = []
    for i in idxB:
        b = B.basis_element(i)
        img = datum.apply(datum.BA.pure_tensor(b, A.one())) \
            - datum.AB.pure_tensor(A.one(), b)
        cols.append(img)
    mat = [[col.data.get(r, zero) for col in cols] for r in idxAB]
    ker = linalg.kernel_basis(mat, field, ncols=len(idxB))
    basis = [B.from_vector(v) for v in ker]
    vecs = [B.to_vector(x) for x in basis]

    def coords_of(x: AlgElement):
        sol = linalg.in_span(vecs, B.to_vector(x), field)
        if sol is None:
            raise AlgebraError("descended invariants are not closed")
        return sol

    unit_coords = coords_of(B.one())
    n0 = len(basis)
    mult = [[None] * n0 for _ in range(n0)]
    for i in range(n0):
        for j in range(i, n0):
            c = coords_of(basis[i] * basis[j])
            mult[i][j] = c
            mult[j][i] = c
    sigma = [coords_of(x.sigma()) for x in basis]
    B0 = TableAlgebra(field, tuple(f"b{i}" for i in range(n0)), mult, unit_coords, sigma)

    # canonical map B0 (x) A -> B given by b0 (x) a -> b0 * iota(a)
    image_cols = []
    for i in range(n0):
        for j in A.index_list():
            image_cols.append(basis[i] * datum.iota.apply(A.basis_element(j)))
    mat2 = [[col.data.get(r, zero) for col in image_cols] for r in idxB]
    iso = (n0 * A.dim == B.dim) and linalg.rank(mat2, field) == B.dim
    return DescentResult(invariants=B0, basis_in_B=basis, base_change_is_isomorphism=iso)
