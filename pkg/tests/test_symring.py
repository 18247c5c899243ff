from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quongram.symring import (
    DEFAULT_PRIMES,
    ONE_PARAM,
    BoxFactor,
    BoxProduct,
    MissingVariableError,
    ParamMode,
    Poly,
    RatEntry,
    binomial_atoms,
    box_inverse,
    cyclotomic,
    cyclotomic_in,
    modular_points,
    poly_identity_mod,
    q_set,
)

VARS = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]

monomials = st.dictionaries(st.sampled_from(VARS), st.integers(1, 3), max_size=3)
polys = st.lists(st.tuples(monomials, st.integers(-5, 5)), max_size=4).map(
    lambda terms: sum((Poly.monomial(m, c) for m, c in terms), Poly.const(0))
)
points = st.fixed_dictionaries({v: st.integers(-4, 4) for v in VARS})


def q(i, j):
    return Poly.var(i, j)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)


@given(polys, polys)
def test_exact_division_round_trip(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a
    assert b.divides(a * b)


@given(polys, polys, st.sampled_from(DEFAULT_PRIMES), points)
def test_eval_mod_matches_integer_evaluation(a, b, p, x):
    prod = a * b
    assert prod.eval_mod(x, p) == prod.evaluate(x) % p


@given(polys)
def test_json_round_trip_and_conjugation(a):
    assert Poly.from_json(a.to_json()) == a
    assert a.conjugate().conjugate() == a


def test_exact_division_rejects_nondivisor():
    assert (q(1, 2) + 1).exact_div(q(1, 2) - 1) is None
    assert not (q(1, 2) - 1).divides(q(1, 2) ** 2 + 1)


def test_text_rendering_is_canonical():
    a = 1 - q(1, 2) * q(2, 1)
    assert a.to_text() == (-(q(2, 1) * q(1, 2)) + 1).to_text()
    assert Poly.q(2).to_text() == "q^2"


def test_specialization_modes():
    a = q(1, 2) * q(2, 1) * q(1, 3)
    assert a.specialize(ParamMode.ONE) == Poly.q(3)
    assert a.specialize(ParamMode.REAL) == Poly.monomial({(1, 2): 2, (1, 3): 1})
    assert a.specialize(ParamMode.MULTI) == a


def test_missing_variable_is_reported():
    with pytest.raises(MissingVariableError):
        q(1, 2).evaluate({(2, 1): 3})


def test_q_set_is_product_over_ordered_pairs():
    assert q_set([1, 2, 3]) == q(1, 2) * q(2, 1) * q(1, 3) * q(3, 1) * q(2, 3) * q(3, 2)
    # a repeated label contributes q[i,i] once per ordered pair of positions
    assert q_set([1, 1, 3]) == q(1, 1) ** 2 * q(1, 3) ** 2 * q(3, 1) ** 2


@pytest.mark.parametrize("d", range(1, 31))
def test_cyclotomic_products(d):
    x = Poly.q(1)
    prod = Poly.const(1)
    for e in range(1, d + 1):
        if d % e == 0:
            prod = prod * cyclotomic_in(e, x)
    assert prod == Poly.q(d) - 1


def test_known_cyclotomics():
    assert cyclotomic(6) == (1, -1, 1)
    assert cyclotomic(12) == (1, 0, -1, 0, 1)


def test_binomial_atoms_factor_the_box():
    m = Poly.q(12)
    atoms = binomial_atoms(m)
    prod = Poly.const(-1)
    for _, a in atoms:
        prod = prod * a
    assert prod == 1 - m
    assert [d for d, _ in atoms] == [1, 2, 3, 4, 6, 12]


def test_box_factor_identity_and_specialization():
    box = BoxFactor([2, 1, 3])
    assert box.support == (1, 2, 3)
    assert box.expand() == 1 - q_set([1, 2, 3])
    one = box.specialize(ParamMode.ONE)
    assert one == BoxFactor([4, 5, 6], ParamMode.ONE)
    assert one.expand() == 1 - Poly.q(6)
    with pytest.raises(ValueError):
        BoxFactor([1])


def test_box_product_lattice_operations():
    a = BoxProduct.of([1, 2], [1, 2], [2, 3])
    b = BoxProduct.of([1, 2], [1, 3])
    assert a.lcm(b) == BoxProduct.of([1, 2], [1, 2], [2, 3], [1, 3])
    assert BoxProduct.of([1, 2]).issubset(a)
    assert a.minus(BoxProduct.of([1, 2])) == BoxProduct.of([1, 2], [2, 3])
    with pytest.raises(ValueError):
        a.minus(b)
    assert (a * b).expand() == a.expand() * b.expand()


def test_rat_entry_arithmetic_and_reduction():
    half = box_inverse([1, 2])
    assert half * (1 - q(1, 2) * q(2, 1)) == 1
    assert (half * (1 - q(1, 2) * q(2, 1))).reduce().is_polynomial()
    s = half + box_inverse([2, 3])
    assert s.den == BoxProduct.of([1, 2], [2, 3])
    assert s - box_inverse([2, 3]) == half
    assert RatEntry.from_json(s.to_json()) == s


@given(points.filter(lambda x: x[(1, 2)] * x[(2, 1)] != 1 and x[(2, 3)] * x[(3, 2)] != 1))
def test_rat_entry_evaluation_matches_fractions(x):
    e = box_inverse([1, 2]) * q(1, 3) - box_inverse([2, 3])
    a = Fraction(1, 1 - x[(1, 2)] * x[(2, 1)])
    b = Fraction(1, 1 - x[(2, 3)] * x[(3, 2)])
    assert e.evaluate(x) == a * x[(1, 3)] - b


def test_modular_points_are_reproducible():
    first = list(modular_points(VARS, trials=3))
    again = list(modular_points(VARS, trials=3))
    assert first == again
    assert len(first) == 3 * len(DEFAULT_PRIMES)
    assert all(p > 2 ** 30 for p, _ in first)


def test_randomized_identity_detects_difference():
    a = (q(1, 2) + q(2, 1)) ** 3
    assert poly_identity_mod(a, a.exact_div(q(1, 2) + q(2, 1)) * (q(1, 2) + q(2, 1)))
    assert not poly_identity_mod(a, a + q(1, 2) * q(2, 3))


def test_one_parameter_key_is_reserved():
    assert Poly.q(1).variables() == {ONE_PARAM}
    assert Poly.q(0) == 1
