"""Batch command-line front door: every decision procedure, JSON-lines out.

Each invocation prints one JSON object per query with the shape

    {"cmd": ..., "args": {...}, "ok": bool, "result": ...,
     "witness": ..., "certificate": ..., "undecided": bool}

and exits 0 on success, 2 on a parse error, 3 when a query came back
undecided (budget exhaustion or an out-of-scope instance).  Re-running
a command is bit-identical.  Positive answers carry witnesses in base
field terms wherever the mathematics allows it, and `dcoh verify`
re-checks those witnesses using only field arithmetic, sigma, and
operator application -- a deliberately small trusted core.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import exprs, outcome
from .algebras import (AlgebraError, FreePolyAlgebra, LaurentAlgebra,
                       TensorContext, amitsur_audit, canonical_descent_datum,
                       descend_invariants, make_mu_algebra, make_split_algebra,
                       mu_twisted_datum, scalar_algebra)
from .fields import FieldElement, FieldError, make_field, sigma_apply
from .groups import (AdditiveKernel, DiagonalMult, FrobeniusTwist, GroupError,
                     MatrixGroup, mu2sigma_group)
from .cocycles import (Cocycle, CocycleError, additive_invariant, equivalent,
                       is_cocycle, mu_invariant)
from .operators import DifferenceOperator, OperatorError
from .sigma_poly import MultiplicativeFunction, SigmaPolyError, parse_multiplicative
from .torsors import (AdditiveTorsor, DiagonalTorsor, FrobeniusTwistTorsor,
                      MuTorsor, TorsorError, TwistedForm, classify_h1,
                      connecting_delta, exactness_audit, isomorphic, normalize,
                      torsor_points)


class CliError(ValueError):
    pass


# --------------------------------------------------------------------------
# descriptor parsing


def parse_algebra(field, desc: str):
    if desc.startswith("mu:"):
        parts = desc[3:].split(",")
        if len(parts) != 2:
            raise CliError("mu algebra descriptor needs two parameters")
        return make_mu_algebra(field.element(parts[0]), field.element(parts[1]))
    if desc.startswith("split:"):
        rest = desc[len("split:"):]
        if ";" in rest:
            mtxt, ptxt = rest.split(";", 1)
            if not ptxt.startswith("perm="):
                raise CliError("split options: perm=<i0,i1,...>")
            perm = [int(x) for x in ptxt[len("perm="):].split(",")]
        else:
            mtxt, perm = rest, None
        return make_split_algebra(field, int(mtxt), perm)
    if desc.startswith("laurent:"):
        return _parse_laurent(field, desc[len("laurent:"):])
    if desc.startswith("freepoly:"):
        return _parse_freepoly(field, desc[len("freepoly:"):])
    raise CliError(f"unknown algebra descriptor {desc!r}")


class _MonomialDomain(exprs.Domain):
    """Values (coefficient, exponent vector) for Laurent sigma images."""

    def __init__(self, field, ngens):
        self.field = field
        self.ngens = ngens

    def from_int(self, n):
        return (self.field.element(n), (0,) * self.ngens)

    def name(self, name):
        if name == "u" and self.ngens == 1:
            return (self.field.one(), (1,))
        if name.startswith("u"):
            try:
                i = int(name[1:])
            except ValueError:
                i = None
            if i is not None and 1 <= i <= self.ngens:
                v = [0] * self.ngens
                v[i - 1] = 1
                return (self.field.one(), tuple(v))
        return (self.field.named_element(name), (0,) * self.ngens)

    def mul(self, a, b):
        return (a[0] * b[0], tuple(x + y for x, y in zip(a[1], b[1])))

    def div(self, a, b):
        return (a[0] / b[0], tuple(x - y for x, y in zip(a[1], b[1])))

    def neg(self, a):
        return (-a[0], a[1])

    def pow(self, a, n):
        return (a[0] ** n, tuple(x * n for x in a[1]))

    def add(self, a, b):
        raise exprs.ExprError("Laurent sigma images must be monomials")

    sub = add


def _parse_laurent(field, rest: str) -> LaurentAlgebra:
    parts = rest.split(";")
    r = int(parts[0])
    images = [None] * r
    pat = re.compile(r"sigma\(u(\d*)\)=(.*)")
    for item in parts[1:]:
        m = pat.fullmatch(item.strip())
        if not m:
            raise CliError(f"bad laurent clause {item!r}")
        idx = int(m.group(1)) if m.group(1) else 1
        images[idx - 1] = exprs.parse(m.group(2), _MonomialDomain(field, r))
    if any(img is None for img in images):
        raise CliError("missing sigma image for a Laurent generator")
    return LaurentAlgebra(field, r, images)


class _AffineDomain(exprs.Domain):
    """Values (constant, coefficient vector) for FreePoly sigma images."""

    def __init__(self, field, ngens):
        self.field = field
        self.ngens = ngens
        self.zero = field.zero()

    def from_int(self, n):
        return (self.field.element(n), (self.zero,) * self.ngens)

    def name(self, name):
        if name == "y" and self.ngens == 1:
            return (self.zero, (self.field.one(),))
        if name.startswith("y"):
            try:
                i = int(name[1:])
            except ValueError:
                i = None
            if i is not None and 1 <= i <= self.ngens:
                v = [self.zero] * self.ngens
                v[i - 1] = self.field.one()
                return (self.zero, tuple(v))
        return (self.field.named_element(name), (self.zero,) * self.ngens)

    def add(self, a, b):
        return (a[0] + b[0], tuple(x + y for x, y in zip(a[1], b[1])))

    def sub(self, a, b):
        return (a[0] - b[0], tuple(x - y for x, y in zip(a[1], b[1])))

    def neg(self, a):
        return (-a[0], tuple(-x for x in a[1]))

    def _is_const(self, a):
        return all(x.is_zero() for x in a[1])

    def mul(self, a, b):
        if self._is_const(a):
            c = a[0]
            return (c * b[0], tuple(c * x for x in b[1]))
        if self._is_const(b):
            return self.mul(b, a)
        raise exprs.ExprError("sigma images must be affine-linear")

    def div(self, a, b):
        if not self._is_const(b):
            raise exprs.ExprError("can only divide by a constant")
        c = b[0].inv()
        return (a[0] * c, tuple(x * c for x in a[1]))

    def pow(self, a, n):
        if n == 1:
            return a
        if self._is_const(a):
            return (a[0] ** n, a[1])
        raise exprs.ExprError("sigma images must be affine-linear")


def _parse_freepoly(field, rest: str) -> FreePolyAlgebra:
    parts = rest.split(";")
    r = int(parts[0])
    images = [None] * r
    pat = re.compile(r"sigma\(y(\d*)\)=(.*)")
    for item in parts[1:]:
        m = pat.fullmatch(item.strip())
        if not m:
            raise CliError(f"bad freepoly clause {item!r}")
        idx = int(m.group(1)) if m.group(1) else 1
        images[idx - 1] = exprs.parse(m.group(2), _AffineDomain(field, r))
    if any(img is None for img in images):
        raise CliError("missing sigma image for a generator")
    return FreePolyAlgebra(field, r, images)


_TWIST_RE = re.compile(r"(GL|SL)(\d+)")


def parse_group(field, desc: str):
    if desc == "mu2sigma":
        return mu2sigma_group(field)
    if desc.startswith("addker:"):
        return AdditiveKernel(DifferenceOperator.parse(field, desc[len("addker:"):]))
    if desc.startswith("diag:"):
        parts = desc[len("diag:"):].split(";")
        n = int(parts[0])
        fs = [parse_multiplicative(txt, n) for txt in parts[1].split(",")]
        return DiagonalMult(field, n, fs)
    if desc.startswith("twist:"):
        base, n, d, psi, _ = _parse_twist_parts(desc[len("twist:"):], want_a=False)
        return FrobeniusTwist(field, base, n, d, psi)
    raise CliError(f"unknown group descriptor {desc!r}")


def _parse_twist_parts(rest: str, want_a: bool):
    parts = rest.split(";")
    m = _TWIST_RE.fullmatch(parts[0])
    if not m:
        raise CliError("twist base must look like GL1 or SL2")
    base, n = m.group(1), int(m.group(2))
    d = None
    psi = None
    a_txt = None
    for item in parts[1:]:
        if item.startswith("d="):
            d = int(item[2:])
        elif item.startswith("psi="):
            psi = item[4:]
        elif item.startswith("a="):
            a_txt = item[2:]
        else:
            raise CliError(f"unknown twist option {item!r}")
    if d is None or psi is None:
        raise CliError("twist descriptor needs d= and psi=")
    if want_a and a_txt is None:
        raise CliError("twist torsor descriptor needs a=")
    return base, n, d, psi, a_txt


def parse_matrix(field, text: str):
    text = text.strip()
    if not text.startswith("["):
        return ((field.element(text),),)
    if not (text.startswith("[[") and text.endswith("]]")):
        raise CliError("matrix literal must look like [[...],[...]]")
    rows = text[2:-2].split("],[")
    return tuple(tuple(field.element(e) for e in row.split(",")) for row in rows)


def parse_torsor(field, desc: str):
    if desc.startswith("mu:"):
        a_txt, b_txt = desc[3:].split(",")
        return MuTorsor(field.element(a_txt), field.element(b_txt))
    if desc.startswith("add:"):
        op_txt, a_txt = desc[len("add:"):].split(";")
        return AdditiveTorsor(DifferenceOperator.parse(field, op_txt),
                              field.element(a_txt))
    if desc.startswith("diag:"):
        parts = desc[len("diag:"):].split(";")
        n = int(parts[0])
        fs = [parse_multiplicative(txt, n) for txt in parts[1].split(",")]
        avec = [field.element(txt) for txt in parts[2].split(",")]
        return DiagonalTorsor(fs, avec)
    if desc.startswith("twist:"):
        base, n, d, psi, a_txt = _parse_twist_parts(desc[len("twist:"):], want_a=True)
        return FrobeniusTwistTorsor(field, base, n, d, psi, parse_matrix(field, a_txt))
    raise CliError(f"unknown torsor descriptor {desc!r}")


class _TensorDomain(exprs.Domain):
    """Literal cocycle values over A(x)A: '#' is the tensor separator."""

    def __init__(self, tc: TensorContext, env: dict):
        self.tc = tc
        self.env = env
        self.field = tc.A.field

    def _lift(self, v, level):
        # level: 0 scalar, 1 A, 2 AA; a bare A-element lifts as v (x) 1
        cur = self._level(v)
        while cur < level:
            if cur == 0:
                v = self.tc.A.from_scalar(v)
            else:
                v = self.tc.pair(v, self.tc.A.one())
            cur += 1
        return v

    def _level(self, v):
        if isinstance(v, FieldElement):
            return 0
        return 1 if v.algebra == self.tc.A else 2

    def from_int(self, n):
        return self.field.element(n)

    def name(self, name):
        if name in self.env:
            return self.env[name]
        try:
            return self.field.named_element(name)
        except FieldError:
            pass
        A = self.tc.A
        labels = getattr(A, "labels", None)
        if labels and name in labels:
            return A.basis_element(labels.index(name))
        ngens = getattr(A, "ngens", None)
        if ngens is not None:
            stem = "u" if isinstance(A, LaurentAlgebra) else "y"
            if name == stem and ngens == 1:
                return A.gen(0)
            if name.startswith(stem):
                try:
                    i = int(name[len(stem):])
                except ValueError:
                    i = None
                if i is not None and 1 <= i <= ngens:
                    return A.gen(i - 1)
        raise exprs.ExprError(f"unknown name {name!r}")

    def _binop(self, a, b, op):
        lvl = max(self._level(a), self._level(b))
        a, b = self._lift(a, lvl), self._lift(b, lvl)
        return op(a, b)

    def add(self, a, b):
        return self._binop(a, b, lambda x, y: x + y)

    def sub(self, a, b):
        return self._binop(a, b, lambda x, y: x - y)

    def mul(self, a, b):
        return self._binop(a, b, lambda x, y: x * y)

    def div(self, a, b):
        if self._level(b) != 0:
            raise exprs.ExprError("can only divide by base field elements")
        return self.mul(a, b.inv())

    def neg(self, a):
        return -a

    def pow(self, a, n):
        return a ** n

    def tensor(self, a, b):
        if self._level(a) > 1 or self._level(b) > 1:
            raise exprs.ExprError("tensor separator takes two A-elements")
        return self.tc.pair(self._lift(a, 1), self._lift(b, 1))


def parse_tensor_literal(tc: TensorContext, text: str, env: dict):
    value = exprs.parse(text, _TensorDomain(tc, env))
    dom = _TensorDomain(tc, env)
    return dom._lift(value, 2)


def algebra_env(field, desc: str, algebra) -> dict:
    env = {}
    if desc.startswith("mu:"):
        a_txt, b_txt = desc[3:].split(",")
        env["a"] = field.element(a_txt)
        env["b"] = field.element(b_txt)
    return env


# --------------------------------------------------------------------------
# serialization


def ser(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, FieldElement):
        return str(v)
    if isinstance(v, tuple) or isinstance(v, list):
        return [ser(x) for x in v]
    if isinstance(v, dict):
        return {str(k): ser(x) for k, x in v.items()}
    return str(v)


def witness_json(w):
    if w is None:
        return None
    if isinstance(w, FieldElement):
        return {"type": "scalar", "value": str(w)}
    if isinstance(w, tuple) and w and isinstance(w[0], tuple):
        return {"type": "matrix", "value": [[str(e) for e in row] for row in w]}
    if isinstance(w, tuple):
        return {"type": "tuple", "value": [str(e) for e in w]}
    return {"type": "algebra-element", "value": str(w)}


def outcome_json(res: outcome.Outcome) -> dict:
    return {
        "result": res.status == outcome.YES,
        "witness": witness_json(res.witness),
        "certificate": res.certificate,
        "undecided": res.status == outcome.UNDECIDED,
        "detail": ser(res.detail) if res.detail else None,
    }


# --------------------------------------------------------------------------
# subcommands


def _emit(args, payload: dict, base: dict) -> int:
    line = {"cmd": base["cmd"], "args": base["args"], "ok": True,
            "result": None, "witness": None, "certificate": None,
            "undecided": False}
    line.update(payload)
    print(json.dumps(line, sort_keys=True))
    return 3 if line.get("undecided") else 0


def cmd_field_eval(args, base):
    field = make_field(args.field)
    val = field.element(args.expr)
    return _emit(args, {"result": str(val),
                        "witness": {"type": "scalar", "value": str(val)}}, base)


def cmd_cocycle_check(args, base):
    field = make_field(args.field)
    A = parse_algebra(field, args.algebra)
    G = parse_group(field, args.group)
    tc = TensorContext(A)
    env = algebra_env(field, args.algebra, A)
    value = parse_tensor_literal(tc, args.chi, env)
    res = is_cocycle(G, tc, value)
    payload = outcome_json(res)
    # attach the family invariant as the checkable witness where available
    try:
        if res and isinstance(G, MatrixGroup) and G.name == "mu2sigma":
            a, b = mu_invariant(Cocycle(G, tc, value))
            payload["witness"] = {"type": "mu-invariant", "a": str(a), "b": str(b)}
        if res and isinstance(G, AdditiveKernel) and G.L is not None:
            a = additive_invariant(Cocycle(G, tc, value))
            payload["witness"] = {"type": "additive-invariant", "a": str(a)}
    except CocycleError:
        pass
    return _emit(args, payload, base)


def cmd_cocycle_equiv(args, base):
    field = make_field(args.field)
    A = parse_algebra(field, args.algebra)
    G = parse_group(field, args.group)
    tc = TensorContext(A)
    env = algebra_env(field, args.algebra, A)
    v1 = parse_tensor_literal(tc, args.chi, env)
    v2 = parse_tensor_literal(tc, args.chi2, env)
    c1 = Cocycle(G, tc, v1)
    c2 = Cocycle(G, tc, v2)
    for c in (c1, c2):
        chk = is_cocycle(G, tc, c.value)
        if not chk:
            raise CliError(f"--chi value is not a cocycle: {chk.certificate}")
    res = equivalent(c1, c2, budget=args.budget)
    payload = outcome_json(res)
    # ship the family invariants so `verify` can re-check the witness with
    # field arithmetic alone
    try:
        if isinstance(G, MatrixGroup) and G.name == "mu2sigma":
            p1, p2 = mu_invariant(c1), mu_invariant(c2)
            payload["detail"] = {"family": "mu",
                                 "lhs_invariant": [str(p1[0]), str(p1[1])],
                                 "rhs_invariant": [str(p2[0]), str(p2[1])]}
        elif isinstance(G, AdditiveKernel) and G.L is not None:
            payload["detail"] = {"family": "add", "operator": str(G.L),
                                 "lhs_invariant": str(additive_invariant(c1)),
                                 "rhs_invariant": str(additive_invariant(c2))}
    except CocycleError:
        pass
    return _emit(args, payload, base)


def cmd_classify(args, base):
    field = make_field(args.field)
    G = parse_group(field, args.group)
    rep = classify_h1(G, budget=args.budget)
    result = {"kind": rep.kind, "classes": rep.count,
              "representatives": ser(rep.describe_reps()), "note": rep.note}
    return _emit(args, {"result": result}, base)


def cmd_iso(args, base):
    field = make_field(args.field)
    if args.family == "mu":
        a1, b1 = (field.element(t) for t in args.lhs.split(","))
        a2, b2 = (field.element(t) for t in args.rhs.split(","))
        X, Y = MuTorsor(a1, b1), MuTorsor(a2, b2)
    elif args.family == "add":
        L = DifferenceOperator.parse(field, args.op)
        X = AdditiveTorsor(L, field.element(args.lhs))
        Y = AdditiveTorsor(L, field.element(args.rhs))
    elif args.family == "diag":
        if args.diag_arity is None or not args.functions:
            raise CliError("diag isomorphism needs --diag-arity and --functions")
        n = args.diag_arity
        fs = [parse_multiplicative(t, n) for t in args.functions.split(",")]
        X = DiagonalTorsor(fs, [field.element(t) for t in args.lhs.split(",")])
        Y = DiagonalTorsor(fs, [field.element(t) for t in args.rhs.split(",")])
    elif args.family == "twist":
        base_, n, d, psi, _ = _parse_twist_parts(args.twist, want_a=False)
        X = FrobeniusTwistTorsor(field, base_, n, d, psi, parse_matrix(field, args.lhs))
        Y = FrobeniusTwistTorsor(field, base_, n, d, psi, parse_matrix(field, args.rhs))
    else:
        raise CliError(f"unknown family {args.family!r}")
    res = isomorphic(X, Y, budget=args.budget)
    return _emit(args, outcome_json(res), base)


def cmd_torsor_points(args, base):
    field = make_field(args.field)
    X = parse_torsor(field, args.torsor)
    R = parse_algebra(field, args.algebra) if args.algebra else None
    res = torsor_points(X, R, budget=args.budget)
    return _emit(args, outcome_json(res), base)


def cmd_normalize(args, base):
    field = make_field(args.field)
    A = parse_algebra(field, args.algebra)
    G = parse_group(field, args.group)
    tc = TensorContext(A)
    env = algebra_env(field, args.algebra, A)
    value = parse_tensor_literal(tc, args.chi, env)
    chk = is_cocycle(G, tc, value)
    if not chk:
        raise CliError(f"--chi value is not a cocycle: {chk.certificate}")
    from .torsors import torsor_from_cocycle
    nf = normalize(torsor_from_cocycle(Cocycle(G, tc, value)))
    if isinstance(nf, MuTorsor):
        result = {"family": "mu", "a": str(nf.a), "b": str(nf.b)}
    elif isinstance(nf, AdditiveTorsor):
        result = {"family": "add", "a": str(nf.a), "operator": str(nf.L)}
    elif isinstance(nf, DiagonalTorsor):
        result = {"family": "diag", "a": [str(c) for c in nf.avec]}
    else:
        result = {"family": "twist", "a": ser(nf.a)}
    return _emit(args, {"result": result}, base)


def cmd_delta(args, base):
    field = make_field(args.field)
    x = field.element(args.x)
    res = connecting_delta(field, args.d, x)
    payload = outcome_json(res.trivial)
    payload["result"] = {"trivial": bool(res.trivial),
                         "cocycle": str(res.cocycle.value[0][0])}
    payload["undecided"] = False
    return _emit(args, payload, base)


def cmd_audit_amitsur(args, base):
    field = make_field(args.field)
    A = parse_algebra(field, args.algebra)
    rep = amitsur_audit(A)
    result = {
        "ok": rep.ok, "dim": rep.algebra_dim,
        "dim_ker_first": rep.dim_ker_first,
        "dim_ker_second": rep.dim_ker_second,
        "dim_image_first": rep.dim_image_first,
        "first_kernel": [str(x) for x in rep.first_kernel],
    }
    return _emit(args, {"result": result}, base)


def cmd_audit_exactness(args, base):
    field = make_field(args.field)
    rep = exactness_audit(field, args.d, budget=args.budget)
    result = {
        "ok": rep.ok, "kernel_points": rep.n_points,
        "image_size": rep.image_size,
        "delta_trivial_count": rep.delta_trivial_count,
        "kernel_matches": rep.kernel_matches,
        "delta_matches_lifting": rep.delta_matches_lifting,
        "torsors_all_trivial": rep.torsors_all_trivial,
    }
    return _emit(args, {"result": result}, base)


def cmd_descend(args, base):
    field = make_field(args.field)
    A = parse_algebra(field, args.algebra)
    if args.chi:
        tc = TensorContext(A)
        env = algebra_env(field, args.algebra, A)
        chi = parse_tensor_literal(tc, args.chi, env)
        datum = mu_twisted_datum(A, chi)
    elif args.c0:
        C0 = parse_algebra(field, args.c0)
        datum = canonical_descent_datum(C0, A)
    else:
        raise CliError("descend needs --c0 (canonical datum) or --chi (mu twist)")
    res = descend_invariants(datum)
    result = {
        "dimension": res.invariants.dim,
        "base_change_is_isomorphism": res.base_change_is_isomorphism,
        "labels": list(res.invariants.labels),
    }
    return _emit(args, {"result": result}, base)


# --------------------------------------------------------------------------
# verify: re-check witnesses with field arithmetic only


def _verify_matrix_relation(field, base_, n, d, psi, a1, a2, c):
    def matmul(x, y):
        return [[sum((x[i][t] * y[t][j] for t in range(1, n)), x[i][0] * y[0][j])
                 for j in range(n)] for i in range(n)]

    def matsig(x, power):
        return [[sigma_apply(e, power) for e in row] for row in x]

    if psi == "trivial":
        psi_c = [[field.one() if i == j else field.zero() for j in range(n)]
                 for i in range(n)]
    elif psi == "id":
        psi_c = c
    else:
        from .groups import mat_inverse, mat_transpose
        psi_c = [list(r) for r in mat_inverse(mat_transpose(tuple(map(tuple, c))))]
    from .groups import mat_inverse as _mi
    psi_c_inv = _mi(tuple(map(tuple, psi_c)))
    lhs = matmul(matmul([list(r) for r in psi_c_inv], a1), matsig(c, d))
    return all(lhs[i][j] == a2[i][j] for i in range(n) for j in range(n))


def _mult_eval_field(f: MultiplicativeFunction, point):
    field = point[0].field
    total = field.one()
    for j, alpha in enumerate(f.exps):
        layer = field.one()
        for i, e in enumerate(alpha):
            if e:
                layer = layer * point[i] ** e
        total = total * sigma_apply(layer, j)
    return total


def cmd_verify(args, base):
    line = json.loads(args.line) if args.line else json.loads(sys.stdin.read())
    cmd = line.get("cmd")
    qargs = line.get("args", {})
    field = make_field(qargs["field"])
    w = line.get("witness")
    ok = None
    reason = None
    if not line.get("result") and not w:
        ok = True
        reason = "negative-or-empty-answer; nothing to verify"
    elif cmd == "field-eval":
        ok = str(field.element(qargs["expr"])) == line["result"]
    elif cmd == "iso" and qargs.get("family") == "mu" and w and w.get("type") == "scalar":
        lam = field.element(w["value"])
        a1, b1 = (field.element(t) for t in qargs["lhs"].split(","))
        a2, b2 = (field.element(t) for t in qargs["rhs"].split(","))
        ok = (a2 == lam * lam * a1) and (b2 == sigma_apply(lam) / lam * b1)
    elif cmd == "iso" and qargs.get("family") == "add" and w and w.get("type") == "scalar":
        L = DifferenceOperator.parse(field, qargs["op"])
        c = field.element(w["value"])
        ok = L.apply(c) == field.element(qargs["rhs"]) - field.element(qargs["lhs"])
    elif cmd == "iso" and qargs.get("family") == "diag" and w and w.get("type") == "tuple":
        n = int(qargs["diag_arity"])
        fs = [parse_multiplicative(t, n) for t in qargs["functions"].split(",")]
        lam = tuple(field.element(t) for t in w["value"])
        lhs = [field.element(t) for t in qargs["lhs"].split(",")]
        rhs = [field.element(t) for t in qargs["rhs"].split(",")]
        ok = all(r == l * _mult_eval_field(f, lam) for l, r, f in zip(lhs, rhs, fs))
    elif cmd == "iso" and qargs.get("family") == "twist" and w and w.get("type") == "matrix":
        base_, n, d, psi, _ = _parse_twist_parts(qargs["twist"], want_a=False)
        c = [[field.element(e) for e in row] for row in w["value"]]
        a1 = [[field.element(e) for e in row] for row in parse_matrix_rows(qargs["lhs"])]
        a2 = [[field.element(e) for e in row] for row in parse_matrix_rows(qargs["rhs"])]
        ok = _verify_matrix_relation(field, base_, n, d, psi, a1, a2, c)
    elif cmd == "torsor-points" and w:
        X = qargs["torsor"]
        if X.startswith("mu:") and w.get("type") == "scalar":
            a_txt, b_txt = X[3:].split(",")
            a, b = field.element(a_txt), field.element(b_txt)
            x = field.element(w["value"])
            ok = (x * x == a) and (sigma_apply(x) == b * x)
        elif X.startswith("add:") and w.get("type") == "scalar":
            op_txt, a_txt = X[len("add:"):].split(";")
            L = DifferenceOperator.parse(field, op_txt)
            ok = L.apply(field.element(w["value"])) == field.element(a_txt)
        elif X.startswith("twist:") and w.get("type") == "matrix":
            base_, n, d, psi, a_txt = _parse_twist_parts(X[len("twist:"):], want_a=True)
            a = [[field.element(e) for e in row] for row in parse_matrix_rows(a_txt)]
            x = [[field.element(e) for e in row] for row in w["value"]]
            ident = [[field.one() if i == j else field.zero() for j in range(n)]
                     for i in range(n)]
            ok = _verify_matrix_relation(field, base_, n, d, psi, ident, a, x) \
                if psi == "trivial" else _twist_point_check(field, n, d, psi, a, x)
        elif X.startswith("diag:") and w.get("type") == "tuple":
            parts = X[len("diag:"):].split(";")
            n = int(parts[0])
            fs = [parse_multiplicative(t, n) for t in parts[1].split(",")]
            avec = [field.element(t) for t in parts[2].split(",")]
            x = tuple(field.element(t) for t in w["value"])
            ok = all(_mult_eval_field(f, x) == a for f, a in zip(fs, avec))
    elif cmd == "delta" and w and w.get("type") == "scalar":
        y = field.element(w["value"])
        x = field.element(qargs["x"])
        ok = sigma_apply(y, int(qargs["d"])) == x
    elif cmd == "classify":
        result = line.get("result") or {}
        if qargs.get("group") == "mu2sigma" and result.get("kind") == "finite-list":
            ok = True
            for rep in result.get("representatives", []):
                a, b = field.element(rep[0]), field.element(rep[1])
                if sigma_apply(a) != a * b * b:
                    ok = False
        else:
            ok = None
    elif cmd == "cocycle-equiv" and w and w.get("type") == "scalar":
        detail = line.get("detail") or {}
        if detail.get("family") == "mu":
            # the witness carries lhs invariants onto rhs invariants
            lam = field.element(w["value"])
            a1, b1 = (field.element(t) for t in detail["lhs_invariant"])
            a2, b2 = (field.element(t) for t in detail["rhs_invariant"])
            ok = (a2 == lam * lam * a1) and (b2 == sigma_apply(lam) / lam * b1)
        elif detail.get("family") == "add":
            L = DifferenceOperator.parse(field, detail["operator"])
            c = field.element(w["value"])
            diff = field.element(detail["lhs_invariant"]) \
                - field.element(detail["rhs_invariant"])
            ok = L.apply(c) == diff
        else:
            ok = None
    if ok is None:
        payload = {"result": "unverified", "certificate": "witness-kind-unsupported"}
    else:
        payload = {"result": bool(ok),
                   "certificate": None if ok else "witness-rejected"}
        if reason:
            payload["detail"] = reason
    print(json.dumps({"cmd": "verify", "args": {"target": cmd}, "ok": True,
                      **payload, "witness": None,
                      "undecided": ok is None}, sort_keys=True))
    return 0 if ok else (3 if ok is None else 1)


def _twist_point_check(field, n, d, psi, a, x):
    from .groups import mat_inverse, mat_transpose
    xm = tuple(map(tuple, x))
    if psi == "id":
        psi_x = x
    else:
        psi_x = [list(r) for r in mat_inverse(mat_transpose(xm))]

    def matmul(u, v):
        return [[sum((u[i][t] * v[t][j] for t in range(1, n)), u[i][0] * v[0][j])
                 for j in range(n)] for i in range(n)]

    lhs = [[sigma_apply(e, d) for e in row] for row in x]
    rhs = matmul(psi_x, a)
    return all(lhs[i][j] == rhs[i][j] for i in range(n) for j in range(n))


def parse_matrix_rows(text: str):
    text = text.strip()
    if not text.startswith("["):
        return [[text]]
    rows = text[2:-2].split("],[")
    return [row.split(",") for row in rows]


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dcoh",
                                 description="difference-algebraic cohomology and torsors")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, field=True):
        if field:
            p.add_argument("--field", required=True)
        p.add_argument("--budget", type=int, default=10 ** 6)
        p.add_argument("--json", action="store_true", help="JSON lines (always on)")

    p = sub.add_parser("field-eval")
    common(p)
    p.add_argument("--expr", required=True)

    p = sub.add_parser("cocycle-check")
    common(p)
    p.add_argument("--algebra", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--chi", required=True)

    p = sub.add_parser("cocycle-equiv")
    common(p)
    p.add_argument("--algebra", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--chi2", required=True)

    p = sub.add_parser("classify")
    common(p)
    p.add_argument("--group", required=True)

    p = sub.add_parser("iso")
    common(p)
    p.add_argument("--family", required=True, choices=["mu", "add", "diag", "twist"])
    p.add_argument("--op")
    p.add_argument("--twist")
    p.add_argument("--functions")
    p.add_argument("--diag-arity", type=int, dest="diag_arity")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)

    p = sub.add_parser("torsor-points")
    common(p)
    p.add_argument("--torsor", required=True)
    p.add_argument("--algebra")

    p = sub.add_parser("normalize")
    common(p)
    p.add_argument("--algebra", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--chi", required=True)

    p = sub.add_parser("delta")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", required=True)

    p = sub.add_parser("audit-amitsur")
    common(p)
    p.add_argument("--algebra", required=True)

    p = sub.add_parser("audit-exactness")
    common(p)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("descend")
    common(p)
    p.add_argument("--algebra", required=True, help="the faithfully flat algebra A")
    p.add_argument("--c0", help="descend the canonical datum on C0 (x) A")
    p.add_argument("--chi", help="descend the mu-twist datum for this cocycle")

    p = sub.add_parser("verify")
    p.add_argument("--line", help="a JSON output line; stdin when omitted")
    p.add_argument("--budget", type=int, default=10 ** 6)
    p.add_argument("--json", action="store_true")

    return ap


HANDLERS = {
    "field-eval": cmd_field_eval,
    "cocycle-check": cmd_cocycle_check,
    "cocycle-equiv": cmd_cocycle_equiv,
    "classify": cmd_classify,
    "iso": cmd_iso,
    "torsor-points": cmd_torsor_points,
    "normalize": cmd_normalize,
    "delta": cmd_delta,
    "audit-amitsur": cmd_audit_amitsur,
    "audit-exactness": cmd_audit_exactness,
    "descend": cmd_descend,
    "verify": cmd_verify,
}

PARSE_ERRORS = (CliError, FieldError, AlgebraError, GroupError, CocycleError,
                OperatorError, SigmaPolyError, TorsorError, exprs.ExprError,
                ValueError, ZeroDivisionError)


def main(argv=None) -> int:
    from .groups import BudgetExceeded

    ap = build_parser()
    args = ap.parse_args(argv)
    base = {"cmd": args.cmd,
            "args": {k: v for k, v in sorted(vars(args).items())
                     if k not in ("cmd", "json") and v is not None}}
    try:
        return HANDLERS[args.cmd](args, base)
    except BudgetExceeded as e:
        print(json.dumps({"cmd": args.cmd, "args": base["args"], "ok": True,
                          "result": None, "witness": None,
                          "certificate": f"budget-exhausted: {e}",
                          "undecided": True}, sort_keys=True))
        return 3
    except PARSE_ERRORS as e:
        print(json.dumps({"cmd": args.cmd, "args": base["args"], "ok": False,
                          "result": None, "witness": None,
                          "certificate": f"error: {e}", "undecided": False},
                         sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
