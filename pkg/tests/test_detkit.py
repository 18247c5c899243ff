from fractions import Fraction
from itertools import permutations
from math import prod

import numpy as np
import pytest
from hypothesis import given, strategies as st

from goldens import DET_123
from quongram import detkit
from quongram.apps import POSITIVITY_GRID
from quongram.fock import Weight, gram
from quongram.symring import ONE_PARAM, ParamMode, Poly

PRIME = 2147483647

int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))


def leibniz(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        sign = (-1) ** sum(p[i] > p[j] for i in range(n) for j in range(i + 1, n))
        total += sign * prod(rows[i][p[i]] for i in range(n))
    return total


@given(int_matrices)
def test_elimination_oracles_agree_with_leibniz(rows):
    ref = leibniz(rows)
    assert detkit.fraction_det([[Fraction(x) for x in r] for r in rows]) == ref
    assert detkit.det_mod(rows, PRIME) == ref % PRIME
    polys = [[Poly.const(x) for x in r] for r in rows]
    assert detkit.minor_expansion(polys) == ref
    assert detkit.det_symbolic(polys, "bareiss") == ref


@given(st.lists(st.lists(st.integers(0, PRIME - 1), min_size=4, max_size=4), min_size=4, max_size=4))
def test_modular_inverse_and_product(rows):
    if detkit.det_mod(rows, PRIME) == 0:
        return
    inv = detkit.inverse_mod(rows, PRIME)
    assert (detkit.matmul_mod(rows, inv, PRIME) == np.eye(4, dtype=np.int64)).all()


def test_golden_determinant():
    closed = detkit.det_closed(Weight.generic(3))
    assert closed.expand() == DET_123
    assert detkit.det_symbolic(gram(Weight.generic(3))) == DET_123


def test_one_parameter_n3():
    one = detkit.det_closed(Weight.generic(3), ParamMode.ONE)
    assert one.to_text() == "(1-q^2)^6 (1-q^6)"
    assert one == detkit.det_zagier(3)
    assert one.expand() == (1 - Poly.q(2)) ** 6 * (1 - Poly.q(6))


@pytest.mark.parametrize("n", range(2, 8))
def test_closed_form_specializes_to_one_parameter_form(n):
    assert detkit.det_closed(Weight.generic(n), ParamMode.ONE) == detkit.det_zagier(n)


@pytest.mark.parametrize("text", ["12", "123", "13", "135", "246"])
def test_closed_form_symbolic(text):
    w = Weight.parse(text)
    assert detkit.det_symbolic(gram(w)) == detkit.det_closed(w).expand()


def test_minors_agree_with_bareiss():
    for text in ["12", "123", "1133"]:
        m = gram(Weight.parse(text))
        assert detkit.det_symbolic(m, "minors") == detkit.det_symbolic(m, "bareiss")


@pytest.mark.parametrize("n", [4, 5])
def test_closed_form_modular(n):
    assert detkit.det_closed_matches_mod(Weight.generic(n))


def test_modular_oracle_rejects_wrong_candidate():
    w = Weight.generic(3)
    wrong = detkit.FactoredDet.of(list(detkit.det_closed(w).factors)[1:])
    assert detkit.det_bruteforce(gram(w), "modular", detkit.det_closed(w))
    assert not detkit.det_bruteforce(gram(w), "modular", wrong)
    with pytest.raises(ValueError):
        detkit.det_bruteforce(gram(w), "modular")


@pytest.mark.parametrize("kind,a,b", [("a", 1, 2), ("a", 1, 3), ("a", 2, 3), ("b", 1, 1), ("b", 1, 2), ("b", 2, 2)])
def test_block_determinants(kind, a, b):
    w = Weight.generic(3)
    dense = detkit.block_matrix(w, kind, a, b).materialize(w)
    assert detkit.det_symbolic(dense) == detkit.det_block(w, kind, a, b).expand()


@pytest.mark.parametrize("kind,a,b", [("a", 1, 4), ("a", 2, 4), ("b", 1, 3), ("b", 2, 3)])
def test_block_determinants_modular(kind, a, b):
    assert detkit.block_matches_mod(Weight.generic(4), kind, a, b, trials=5)


def test_block_argument_checks():
    w = Weight.generic(3)
    with pytest.raises(ValueError):
        detkit.det_block(w, "a", 2, 2)
    with pytest.raises(ValueError):
        detkit.det_block(w, "b", 1, 3)
    with pytest.raises(ValueError):
        detkit.det_block(w, "c", 1, 2)


@pytest.mark.parametrize("text", ["11", "111", "113", "1111", "1112", "1122"])
def test_degenerate_determinant_divides_lift(text):
    assert detkit.degenerate_divides(Weight.parse(text))["divides"]


@pytest.mark.slow
def test_degenerate_determinant_divides_lift_1123():
    assert detkit.degenerate_divides(Weight.parse("1123"))["divides"]


def test_degenerate_closed_form_refused():
    with pytest.raises(ValueError):
        detkit.det_closed(Weight.parse("113"))


@pytest.mark.parametrize("n", range(2, 6))
def test_positive_definite_on_grid(n):
    w = Weight.generic(n)
    for q in POSITIVITY_GRID:
        res = detkit.positive_definite(w, detkit.one_parameter_assignment(w, float(q)))
        assert res["verdict"] == "positive_definite"
        assert res["min_pivot"] > detkit.PD_TOL


def test_positivity_boundary():
    w = Weight.generic(2)
    assert detkit.positive_definite(w, detkit.one_parameter_assignment(w, 1))["verdict"] == "not_positive_definite"
    assert detkit.positive_definite(w, detkit.one_parameter_assignment(w, 1.0))["verdict"] == "indeterminate"
    beyond = detkit.one_parameter_assignment(w, Fraction(11, 10))
    assert detkit.positive_definite(w, beyond)["verdict"] == "not_positive_definite"


def test_positivity_complex_hermitian_point():
    w = Weight.generic(2)
    pt = {(1, 2): 0.3 + 0.4j, (2, 1): 0.3 - 0.4j}
    assert detkit.positive_definite(w, pt)["verdict"] == "positive_definite"
    with pytest.raises(ValueError):
        detkit.positive_definite(w, {(1, 2): 0.3 + 0.4j, (2, 1): 0.3 + 0.4j})


def test_factored_det_serialization_and_evaluation():
    d = detkit.det_zagier(3)
    assert d.to_json()["factors"][0] == {"support": [1, 2], "mode": "one", "exponent": 6}
    q = Fraction(1, 2)
    assert d.evaluate({ONE_PARAM: q}) == (1 - q ** 2) ** 6 * (1 - q ** 6)
