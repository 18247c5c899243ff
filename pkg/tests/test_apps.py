import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quongram import apps
from quongram.combin import all_perms, parse_perm
from quongram.detkit import fraction_det
from quongram.symring import Poly

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)
pairs3 = [(1, 2), (1, 3), (2, 3)]


def run(capsys, *argv):
    code = apps.main(list(argv))
    return code, capsys.readouterr().out


# arrangement form -------------------------------------------------------------

def test_separating_pairs():
    assert apps.separating_pairs(parse_perm("123"), parse_perm("321")) == frozenset(pairs3)
    assert apps.separating_pairs(parse_perm("132"), parse_perm("132")) == frozenset()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_region_form_is_the_symmetric_gram_matrix(n):
    assert apps.arrangement_matches_gram(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_region_determinant(n):
    assert apps.bform_det_check(n, trials=5)


def test_region_determinant_n3_display():
    d = apps.bform_det(3)
    assert [(b.support, e) for b, e in d.factors] == [((1, 2), 2), ((1, 3), 2), ((2, 3), 2), ((1, 2, 3), 1)]


@given(st.tuples(rationals, rationals, rationals))
def test_region_determinant_at_rational_weights(values):
    weights = dict(zip(pairs3, values))
    form = apps.bform(3, weights)
    assert fraction_det(form.matrix.rows) == apps.bform_det(3, weights)


def test_region_weights_must_be_exact_and_complete():
    with pytest.raises(TypeError):
        apps.bform(2, {(1, 2): 0.5})
    with pytest.raises(ValueError):
        apps.bform(3, {(1, 2): Fraction(1, 2)})
    with pytest.raises(ValueError):
        apps.bform(2, {(1, 2): 1, (2, 1): 2})


def test_region_entry_multiplies_separating_weights():
    form = apps.bform(3)
    assert form.symbolic
    assert form.entry(parse_perm("123"), parse_perm("231")) == Poly.var(1, 2) * Poly.var(1, 3)


def test_edge_multiplicity():
    assert [apps.edge_multiplicity(4, k) for k in (2, 3, 4)] == [6, 2, 2]


# contravariant form -----------------------------------------------------------

def test_contravariant_two_letters():
    res = apps.contravariant_det(2, {(1, 2): 1})
    assert res.to_text() == "q^(-1/2) (1-q)"
    assert res.symmetric_text() == "(q^(-1/2)-q^(1/2))"
    u = Fraction(3)
    assert res.value(u) == u ** -1 * (1 - u ** 2) == res.symmetric_value(u)


def test_contravariant_merged_text():
    res = apps.contravariant_det(3, {(k, l): 2 for k, l in pairs3})
    assert res.to_text() == "q^(-9) (1-q^2)^6 (1-q^6)"
    assert len(res.to_json()["factors"]) == 4


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_contravariant_against_gram_n3(bs):
    assert apps.contravariant_check(3, dict(zip(pairs3, bs)))["ok"]


def test_contravariant_against_gram_n4():
    b = {(k, l): (k + 2 * l) % 4 - 1 for k in range(1, 5) for l in range(k + 1, 5)}
    assert apps.contravariant_check(4, b)["ok"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_contravariant_all_two_is_one_parameter(n):
    assert apps.zagier_inverse_check(n)


def test_contravariant_input_validation():
    with pytest.raises(ValueError):
        apps.contravariant_det(2, {(1, 3): 1})
    with pytest.raises(TypeError):
        apps.contravariant_det(2, {(1, 2): 1.5})
    with pytest.raises(ValueError):
        apps.contravariant_det(2, {(1, 2): 1, (2, 1): 2})


# command line -----------------------------------------------------------------

def test_cli_det_one_parameter(capsys):
    assert run(capsys, "det", "--n", "3", "--mode", "one") == (0, "(1-q^2)^6 (1-q^6)\n")


def test_cli_det_modcheck(capsys):
    code, out = run(capsys, "det", "--n", "4", "--modcheck", "2147483647:3")
    assert code == 0 and out.endswith("modcheck: PASS\n")


def test_cli_gram_json(capsys):
    code, out = run(capsys, "gram", "--n", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["basis"] == ["12", "21"]


def test_cli_inverse_degenerate(capsys):
    code, out = run(capsys, "inverse", "--weight", "113")
    assert code == 0 and out.endswith("check A*inverse = I: PASS\n")


@pytest.mark.parametrize("method", ["lambda", "chain", "long", "short"])
def test_cli_inverse_methods_agree(capsys, method):
    code, out = run(capsys, "inverse", "--n", "3", "--method", method, "--modcheck", "2147483629:2")
    assert code == 0
    _, ref = run(capsys, "inverse", "--n", "3", "--method", "lambda", "--modcheck", "2147483629:2")
    assert out == ref


def test_cli_lambda(capsys):
    assert run(capsys, "lambda", "--g", "2413") == (0, "0\n")
    code, out = run(capsys, "lambda", "--g", "123", "--mode", "one")
    assert out == "(1 + q^2) / ((1-q^2) (1-q^6))\n"
    code, out = run(capsys, "lambda", "--g", "2413", "--format", "json")
    assert json.loads(out)["tree_like"] is False


def test_cli_zagier_n8(capsys):
    code, out = run(capsys, "zagier", "--n", "8", "--perms", "43218765")
    assert code == 0
    assert "holds" in out.splitlines()[1]
    assert "offending factor 1 - q^2 + q^4" in out


def test_cli_schroeder(capsys):
    code, out = run(capsys, "schroeder", "--n", "6", "--by-k", "--check")
    assert code == 0
    assert out.splitlines() == ["c_6 = 197", "c_6,1 = 1", "c_6,2 = 14", "c_6,3 = 56", "c_6,4 = 84",
                                "c_6,5 = 42", "check: PASS"]


def test_cli_arrangement(capsys):
    code, out = run(capsys, "arrangement", "--n", "2", "--weights", "12=1/2")
    assert code == 0 and "det = 3/4" in out


def test_cli_contravariant(capsys):
    code, out = run(capsys, "contravariant", "--n", "3", "--b", "12=1,13=-1,23=2", "--check")
    assert code == 0 and out.rstrip().endswith("check: PASS")


def test_cli_verify(capsys):
    code, out = run(capsys, "verify", "--suite", "schroeder", "--n", "4")
    assert code == 0 and out.rstrip().endswith("checks passed")


@pytest.mark.parametrize("argv", [
    ["gram", "--n", "0"],
    ["gram"],
    ["det", "--n", "3", "--modcheck", "12:3"],
    ["det", "--n", "3", "--modcheck", "nonsense"],
    ["arrangement", "--n", "2", "--weights", "12=0.5"],
    ["lambda", "--g", "1224"],
    ["lambda", "--g", "123", "--n", "4"],
    ["zagier", "--n", "3", "--mode", "real"],
    ["contravariant", "--n", "2", "--b", "13=1"],
    ["bogus"],
])
def test_cli_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        apps.main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_is_byte_stable():
    argv = [sys.executable, "-m", "quongram", "inverse", "--n", "3", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["weight"] == "1+2+3"


def test_all_permutations_helper_order():
    assert all_perms(3)[0] == (1, 2, 3) and all_perms(3)[-1] == (3, 2, 1)
