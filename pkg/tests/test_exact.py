import cmath
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zonal.errors import DimensionMismatch, NotDivisible, NotSymmetric, ZeroCoordinate, ConstraintViolated
from zonal.exact import (
    EvalPoint,
    Poly,
    elementary,
    evaluate,
    exact_quotient,
    from_elementary_basis,
    pochhammer,
    to_elementary_basis,
    x_vars,
)

X2 = x_vars(2)
X3 = x_vars(3)


@pytest.mark.parametrize(
    "a, k, want",
    [(Fraction(1, 2), 0, 1), (Fraction(1, 2), 2, Fraction(3, 4)), (Fraction(3, 2), 2, Fraction(15, 4))],
)
def test_pochhammer_examples(a, k, want):
    assert pochhammer(a, k) == want


def test_pochhammer_recurrence():
    for a in (Fraction(1, 2), Fraction(3, 2), Fraction(-7, 3), 1, 5):
        for k in range(51):
            assert pochhammer(a, k + 1) == pochhammer(a, k) * (a + k)


def test_pochhammer_matches_gamma_ratio():
    for k in range(15):
        assert float(pochhammer(Fraction(1, 2), k)) == pytest.approx(math.gamma(0.5 + k) / math.gamma(0.5), rel=1e-13)


def test_exact_quotient_examples():
    x1, x2 = Poly.gens(X2)
    assert exact_quotient(x1 ** 2 - x2 ** 2, x1 - x2) == x1 + x2
    assert exact_quotient(x1 * x2 - x2 ** 2, x1 - x2) == x2
    with pytest.raises(NotDivisible):
        exact_quotient(x1, x2)


def test_exact_quotient_laurent():
    x1, x2 = Poly.gens(X2)
    num = (x1 + x2 ** -1) * (x1 - x2) * x1 ** -2
    assert exact_quotient(num, x1 - x2) == (x1 + x2 ** -1) * x1 ** -2
    with pytest.raises(ZeroDivisionError):
        exact_quotient(x1, Poly(X2))


small = st.integers(-4, 4).map(Fraction)


@st.composite
def polys(draw, vars=X3, max_deg=3, max_terms=5):
    n = len(vars)
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_deg)] * n),
            st.fractions(min_value=-5, max_value=5, max_denominator=7),
            max_size=max_terms,
        )
    )
    return Poly(vars, terms)


@given(polys(), polys())
def test_quotient_of_product(p, q):
    if q.is_zero():
        return
    assert exact_quotient(p * q, q) == p


def symmetrize(p):
    import itertools

    out = Poly(p.vars)
    for perm in itertools.permutations(range(p.nvars)):
        out = out + p.permute(perm)
    return out


def test_elementary_examples():
    x1, x2, x3 = Poly.gens(X3)
    z1, z2, z3 = Poly.gens(("z1", "z2", "z3"))
    assert to_elementary_basis(x1 * x2 + x2 * x3 + x3 * x1) == z2
    assert to_elementary_basis(x1 ** 2 + x2 ** 2 + x3 ** 2) == z1 ** 2 - 2 * z2
    with pytest.raises(NotSymmetric):
        to_elementary_basis(x1 + x2 * x3)


def test_unimodular_reduction_drops_top_variable():
    x1, x2, x3 = Poly.gens(X3)
    z1, z2 = Poly.gens(("z1", "z2"))
    p = x1 * x2 * x3 * (x1 + x2 + x3) + 2 * x1 * x2 * x3
    assert to_elementary_basis(p, unimodular=True) == z1 + 2


def test_laurent_symmetric_rewrite():
    x1, x2, x3 = Poly.gens(X3)
    p = x1 ** -1 + x2 ** -1 + x3 ** -1
    z1, z2, z3 = Poly.gens(("z1", "z2", "z3"))
    assert to_elementary_basis(p) == z2 * z3 ** -1
    assert to_elementary_basis(p, unimodular=True) == Poly.var(("z1", "z2"), 1)


@pytest.mark.parametrize("n", [2, 3, 4])
@given(data=st.data())
def test_elementary_round_trip(n, data):
    vars = x_vars(n)
    p = symmetrize(data.draw(polys(vars, max_deg=8 // n + 1, max_terms=3)))
    p = Poly(vars, {e: c for e, c in p.terms.items() if sum(e) <= 8})
    p = symmetrize(p)
    back = from_elementary_basis(to_elementary_basis(p), n)
    assert back == p


def test_elementary_is_elementary():
    assert elementary(3, 2) == Poly(X3, {(1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1})


def test_homogenized_pull_back():
    z1, z2 = Poly.gens(("z1", "z2"))
    q = Fraction(2, 15) * z1 * z2 - Fraction(1, 5)
    x = from_elementary_basis(q, 3, degree=3)
    assert x.is_homogeneous() and x.degree() == 3
    assert to_elementary_basis(x, unimodular=True) == q
    with pytest.raises(ValueError):
        from_elementary_basis(q, 3, degree=4)


def test_evaluate_examples():
    x1, x2 = Poly.gens(X2)
    assert evaluate(x1 + x2, (1, 1)) == 2
    x1_, x2_, x3_ = Poly.gens(X3)
    assert evaluate(x1_ * x2_ * x3_, (2, 0.5, 1)) == 1
    pt = EvalPoint((cmath.exp(1j * math.pi / 3), cmath.exp(-1j * math.pi / 3)), torus=True, unimodular=True)
    assert abs(evaluate((x1 + x2) / 2, pt) - 0.5) < 1e-15


def test_evaluate_errors():
    x1, x2 = Poly.gens(X2)
    with pytest.raises(DimensionMismatch):
        evaluate(x1, (1, 2, 3))
    with pytest.raises(ZeroCoordinate):
        evaluate(x1 ** -1, (0, 1))


@given(polys(), polys(), st.lists(st.complex_numbers(min_magnitude=0.3, max_magnitude=2), min_size=3, max_size=3))
def test_evaluate_is_multiplicative(p, q, pt):
    lhs = evaluate(p * q, pt)
    rhs = evaluate(p, pt) * evaluate(q, pt)
    scale = max(1.0, abs(rhs), sum(abs(float(c)) for c in (p * q).terms.values()) * 2 ** 6)
    assert abs(lhs - rhs) <= 1e-10 * scale


def test_eval_point_constraints():
    with pytest.raises(ConstraintViolated):
        EvalPoint((1.1, 1.0), torus=True)
    with pytest.raises(ConstraintViolated):
        EvalPoint((2.0, 1.0, 1.0), unimodular=True)
    pt = EvalPoint.from_angles([0.3, 0.4, -0.7])
    assert pt.unimodular and abs(pt.product() - 1) < 1e-14


def test_json_round_trip_and_byte_stability():
    x1, x2, x3 = Poly.gens(X3)
    p = Fraction(2, 15) * x1 ** 2 * x2 - x3 ** -1 + Fraction(10 ** 30, 7)
    text = p.dumps()
    assert Poly.from_json(text) == p
    assert Poly.from_json(json.loads(text)).dumps() == text
    obj = json.loads(text)
    assert obj["vars"] == ["x1", "x2", "x3"]
    assert obj["terms"][0] == {"exp": [2, 1, 0], "num": "2", "den": "15"}
    assert {"exp": [0, 0, 0], "num": str(10 ** 30), "den": "7"} in obj["terms"]


def test_ring_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        Poly.var(X2, 0) + Poly.var(X3, 0)


def test_exact_value_at_rational_point():
    x1, x2 = Poly.gens(X2)
    assert ((x1 + x2) ** 2).at([Fraction(1, 2), 1]) == Fraction(9, 4)
