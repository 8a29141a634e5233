from fractions import Fraction

import pytest

from acmlab.ring import (
    ANY_DEGREE,
    NON_HOMOGENEOUS,
    Field,
    ParseError,
    PolyMatrix,
    Ring,
    determinant,
    homogeneous_degree,
    is_skew_symmetric,
    matrix_product,
    parse_polynomial,
    pfaffian,
    poly_ring_ops,
)

Q = Field()


def test_field_parse_and_validation():
    assert Field.parse("q") == Field()
    assert Field.parse("fp:32003").p == 32003
    for bad in ("fp:2", "fp:9", "fp:x", "zz"):
        with pytest.raises(ValueError):
            Field.parse(bad)


def test_rationals_lowest_terms():
    c = Q(Fraction(6, -4))
    assert c == Fraction(-3, 2) and c.denominator == 2


def test_residues_in_range():
    F = Field(7)
    assert F(-1) == 6
    assert F(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 7))


def test_parse_examples():
    p = parse_polynomial("x0*x1 + x2*x3 + x4*x5", 6, Q)
    assert homogeneous_degree(p) == 2 and len(p) == 3
    assert parse_polynomial("0", 3, Q).is_zero()
    assert parse_polynomial("x0^2 - x0^2", 3, Q).is_zero()


def test_parse_rationals_and_parentheses():
    p = parse_polynomial("1/2*(x0 + x1)^2 - 3/4*x2*x0", 3, Q)
    r = Ring(3, Q)
    x = r.gens()
    assert p == (x[0] + x[1]) ** 2 * r.const(Fraction(1, 2)) - x[2] * x[0] * r.const(Fraction(3, 4))


def test_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_polynomial("x0 + * x1", 3, Q)
    assert exc.value.pos is not None
    with pytest.raises(ParseError):
        parse_polynomial("x5", 3, Q)
    with pytest.raises(ParseError, match="zero"):
        parse_polynomial("1/0*x0", 3, Q)


def test_print_parse_roundtrip():
    r = Ring(4, Field(101))
    p = r.parse("3*x0^2*x1 - x3^3 + 50*x1*x2*x3")
    assert r.parse(str(p)) == p


def test_ring_ops():
    r = Ring(6, Q)
    x = r.gens()
    assert poly_ring_ops(x[0] + x[1], x[0] - x[1], "mul") == x[0] ** 2 - x[1] ** 2
    assert (x[0] * r.zero()).is_zero()
    F = x[0] * x[1] + x[2] * x[3] + x[4] * x[5]
    assert poly_ring_ops(F, -(x[0] * x[1]), "add") == x[2] * x[3] + x[4] * x[5]
    with pytest.raises(ValueError):
        poly_ring_ops(x[0], Ring(3, Q).gens()[0], "add")


def test_homogeneous_degree():
    r = Ring(6, Q)
    x = r.gens()
    assert homogeneous_degree(x[0] * x[3] ** 2 + x[1] * x[4] ** 2 + x[2] * x[5] ** 2) == 3
    assert homogeneous_degree(x[0] + x[1] * x[2]) is NON_HOMOGENEOUS
    assert homogeneous_degree(r.zero()) is ANY_DEGREE


def test_matrix_product():
    r = Ring(6, Q)
    x = r.gens()
    F = x[0] * x[1] + x[2] * x[3]
    FI = PolyMatrix.identity(r, 2, F)
    assert matrix_product(FI, PolyMatrix.identity(r, 2)) == FI
    row = PolyMatrix(r, [[x[0], x[2], x[4]]], 3)
    col = PolyMatrix(r, [[x[1]], [x[3]], [x[5]]], 1)
    prod = matrix_product(row, col)
    assert prod.shape == (1, 1) and prod[0, 0] == x[0] * x[1] + x[2] * x[3] + x[4] * x[5]
    with pytest.raises(ValueError):
        matrix_product(row, row)


def test_determinant_and_pfaffian():
    r = Ring(6, Q)
    x = r.gens()
    z = r.zero()
    m = PolyMatrix(r, [[z, x[0], x[1], x[2]], [-x[0], z, x[3], x[4]],
                       [-x[1], -x[3], z, x[5]], [-x[2], -x[4], -x[5], z]], 4)
    assert is_skew_symmetric(m)
    pf = pfaffian(m)
    assert pf == x[0] * x[5] - x[1] * x[4] + x[2] * x[3]
    assert determinant(m) == pf * pf
