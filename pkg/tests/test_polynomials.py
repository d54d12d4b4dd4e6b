from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from reflab.exactnum import CycMatrix, CycNumber
from reflab.polynomials import MultiPoly, monomials, substitute_linear

coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coef, max_size=5).map(
    lambda d: MultiPoly(3, 3, {e: CycNumber.rational(3, c) for e, c in d.items()})
)
z = CycNumber.zeta(3)


def test_monomial_order():
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert len(monomials(3, 4)) == 15


@settings(max_examples=60, deadline=None)
@given(polys, st.lists(st.sampled_from([0, 1, -2]), min_size=3, max_size=3))
def test_divide_linear_round_trip(f, tail):
    alpha = [z] + [CycNumber.rational(3, t) for t in tail[1:]]
    form = MultiPoly.linear_form(3, alpha)
    assert (f * form).divide_linear(alpha) == f


@settings(max_examples=40, deadline=None)
@given(polys)
def test_substitution_composes(f):
    A = CycMatrix(3, [[1, z, 0], [0, 1, 0], [0, 0, z]])
    B = CycMatrix(3, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    # x -> A x then x -> B x equals x -> (A B) x
    assert substitute_linear(substitute_linear(f, A), B) == substitute_linear(f, A * B)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_product_rule(f, g):
    for i in range(3):
        assert (f * g).derivative(i) == f.derivative(i) * g + f * g.derivative(i)


def test_vector_round_trip():
    f = MultiPoly(2, 1, {(2, 1): CycNumber.rational(1, Fraction(1, 2)), (0, 3): CycNumber.rational(1, 3)})
    assert MultiPoly.from_vector(2, 1, 3, f.to_vector(3)) == f
