"""Group presentations: membership, the group law, point enumeration."""

import pytest

from dcoh.algebras import make_mu_algebra, scalar_algebra
from dcoh.fields import make_field
from dcoh.groups import (AdditiveKernel, BudgetExceeded, DiagonalMult,
                         FrobeniusTwist, GroupError, MatrixGroup, ProductGroup,
                         contains, enumerate_points, group_identity, group_inv,
                         group_mul, kernel_of_sigma_power, mu2sigma_group,
                         scalar_value)
from dcoh.operators import DifferenceOperator
from dcoh.sigma_poly import SigmaPolynomial, parse_multiplicative


def test_mu2_membership(gf9, QQ):
    G = mu2sigma_group(QQ)
    R = scalar_algebra(QQ)
    assert contains(G, R.one(), R)
    assert contains(G, -R.one(), R)
    assert not contains(G, R.from_scalar(QQ.element(2)), R)

    # over the mu-algebra, y itself is generally not in the group
    a = gf9.element("w")
    A = make_mu_algebra(a, a)
    y = A.basis_element(1)
    G9 = mu2sigma_group(gf9)
    assert not contains(G9, y, A)  # sigma(y) = w*y != y and y^2 = w != 1
    assert contains(G9, A.one(), A)


def test_additive_kernel_membership(gf4):
    L = DifferenceOperator.parse(gf4, "s - 1")
    G = AdditiveKernel(L)
    R = scalar_algebra(gf4)
    assert contains(G, R.one(), R)
    assert not contains(G, R.from_scalar(gf4.element("w")), R)


def test_group_law(gf9):
    G = mu2sigma_group(gf9)
    R = scalar_algebra(gf9)
    pts = enumerate_points(G, R)
    for x in pts:
        assert group_mul(G, x, group_inv(G, x)) == group_identity(G, R)
        for y in pts:
            assert contains(G, group_mul(G, x, y), R)
        assert contains(G, group_inv(G, x), R)

    L = DifferenceOperator.parse(gf9, "s - 1")
    GA = AdditiveKernel(L)
    apts = enumerate_points(GA, R)
    for x in apts:
        assert group_mul(GA, x, group_inv(GA, x)) == R.zero()
        for y in apts:
            assert contains(GA, group_mul(GA, x, y), R)


def test_enumerate_points_examples(gf4):
    g5 = make_field("GF(5);frob^1")
    G = mu2sigma_group(g5)
    R5 = scalar_algebra(g5)
    pts = enumerate_points(G, R5)
    vals = sorted(str(scalar_value(G, p)) for p in pts)
    assert vals == ["1", "4"]

    L = DifferenceOperator.parse(gf4, "s - 1")
    R4 = scalar_algebra(gf4)
    pts4 = enumerate_points(AdditiveKernel(L), R4)
    assert len(pts4) == 2  # the fixed field GF(2)

    one = SigmaPolynomial.constant(gf4, 1, 1)
    y = SigmaPolynomial.variable(gf4, 1, 0)
    trivial = MatrixGroup(gf4, 1, [y - one])
    assert len(enumerate_points(trivial, R4)) == 1


def test_enumeration_is_audited(gf9):
    G = mu2sigma_group(gf9)
    A = make_mu_algebra(gf9.element("w"), gf9.element("w"))
    pts = enumerate_points(G, A)
    for p in pts:
        assert contains(G, p, A)
    # soundness spot check: nothing outside the list satisfies the relations
    count = sum(1 for x in A.enumerate_elements() if contains(G, x, A))
    assert count == len(pts)


def test_diagonal_membership_order_invariant(gf9):
    f1 = parse_multiplicative("y1^2", 2)
    f2 = parse_multiplicative("s(y2)*y2^-1", 2)
    G1 = DiagonalMult(gf9, 2, [f1, f2])
    G2 = DiagonalMult(gf9, 2, [f2, f1])
    R = scalar_algebra(gf9)
    for g1 in [gf9.one(), -gf9.one()]:
        for g2 in gf9.units():
            x = (R.from_scalar(g1), R.from_scalar(g2))
            assert contains(G1, x, R) == contains(G2, x, R)


def test_kernel_of_sigma_power(gf9):
    N = kernel_of_sigma_power(gf9, "GL", 1, 1)
    R = scalar_algebra(gf9)
    assert contains(N, ((R.one(),),), R)
    N2 = kernel_of_sigma_power(gf9, "SL", 2, 2)
    ident = group_identity(N2, R)
    assert contains(N2, ident, R)
    assert N2.psi == "trivial" and N2.d == 2 and N2.base == "SL"


def test_frobenius_twist_membership(gf9):
    R = scalar_algebra(gf9)
    G = FrobeniusTwist(gf9, "GL", 1, 1, "id")
    # sigma(g) = g picks out the fixed field GF(3)
    pts = enumerate_points(G, R)
    assert len(pts) == 2  # units of GF(3)
    Gt = FrobeniusTwist(gf9, "GL", 1, 1, "transposeinv")
    # sigma(g) = g^{-1}: g^3 = g^{-1}, so g^4 = 1
    ptst = enumerate_points(Gt, R)
    assert len(ptst) == 4


def test_product_group(gf9):
    G = mu2sigma_group(gf9)
    P = ProductGroup([G, G])
    R = scalar_algebra(gf9)
    pts = enumerate_points(P, R)
    single = enumerate_points(G, R)
    assert len(pts) == len(single) ** 2
    x = pts[0]
    assert contains(P, x, R)
    assert group_mul(P, x, group_inv(P, x)) == group_identity(P, R)


def test_budget_guard(gf9):
    A = make_mu_algebra(gf9.element("w"), gf9.element("w"))
    G = FrobeniusTwist(gf9, "GL", 2, 1, "trivial")
    with pytest.raises(BudgetExceeded):
        enumerate_points(G, A, budget=10)
