import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyverlinde import make
from cyverlinde.dsl import (
    ARITY,
    ArityError,
    Compose,
    Gen,
    LexError,
    ParseError,
    Tensor,
    check_equal,
    evaluate,
    genus_word,
    genus_word_report,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    parse,
    proposition_suite,
    structurally_equal,
    typecheck,
)
from cyverlinde.dsl.evaluate import EXCHANGE_IDENTITIES, FROBENIUS_IDENTITIES, UNIT_IDENTITIES
from conftest import MODULAR

PHI = (1 + math.sqrt(5)) / 2


def same(a, b):
    return structurally_equal(a, b)


# -- syntax -------------------------------------------------------------------
def test_parse_examples():
    assert same(parse("Y1 . (Psi # Psi)"), Compose(Gen("Y1"), Tensor(Gen("Psi"), Gen("Psi"))))
    assert same(parse("ci1 . Y1 . (i1 # Id)"),
                Compose(Gen("ci1"), Compose(Gen("Y1"), Tensor(Gen("i1"), Gen("Id")))))
    assert same(parse("  Psi.Psi "), parse("Psi . Psi"))


def test_tensor_binds_tighter_than_compose():
    assert same(parse("Y1 . Psi # Psi"), parse("Y1 . (Psi # Psi)"))


def test_parse_error_at_end_of_input():
    with pytest.raises(ParseError) as err:
        parse("Y1 .")
    assert err.value.pos == 4
    assert "end of input" in str(err.value)


@pytest.mark.parametrize("text,pos", [("(Y1", 3), ("Y1 )", 3), ("", 0), ("# Psi", 0), ("Psi Psi", 4)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.pos == pos


@pytest.mark.parametrize("text,pos", [("Psi . psi", 6), ("Y1 & Y2", 3), ("Y3", 0)])
def test_lex_errors(text, pos):
    with pytest.raises(LexError) as err:
        parse(text)
    assert err.value.pos == pos


def test_typecheck_examples():
    assert typecheck(parse("Psi")) == (1, 1)
    assert typecheck(parse("ci1 . Y1 . (i1 # Id)")) == (1, 0)
    with pytest.raises(ArityError) as err:
        typecheck(parse("Y1 . Psi"))
    assert err.value.pos == 3


def exprs():
    leaves = st.sampled_from(sorted(ARITY)).map(Gen)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(st.builds(Compose, sub, sub), st.builds(Tensor, sub, sub)),
        max_leaves=8,
    )


@settings(max_examples=200, deadline=None)
@given(exprs())
def test_print_parse_roundtrip(expr):
    assert same(parse(str(expr)), expr)


# -- evaluation ---------------------------------------------------------------
def test_evaluate_examples(fib):
    assert np.allclose(evaluate("Id", fib).matrix, np.eye(2))
    assert np.allclose(evaluate("Y2", fib).apply(["tau", "tau"]), [1, 1])
    assert np.allclose(evaluate("Psi . Psi", fib).matrix, (2 + PHI) * np.eye(2))


def test_evaluate_shapes(ising):
    m = evaluate("coY1 . Y2 . (i1 # Id)", ising)
    assert m.signature == (1, 2)
    assert m.matrix.shape == (9, 3)
    assert evaluate("ci2 . i2", ising).matrix.shape == (1, 1)


def test_swap_ordering(ising):
    # leftmost tensor factor is the slow index
    P = evaluate("P", ising).matrix
    e = np.eye(3)
    assert np.allclose(P @ np.kron(e[0], e[1]), np.kron(e[1], e[0]))


def test_apply_arity(fib):
    with pytest.raises(ArityError):
        evaluate("Y1", fib).apply(["tau"])


def test_evaluate_propagates_arity_error(fib):
    with pytest.raises(ArityError):
        evaluate("Y1 . Psi", fib)


def small_words():
    one = st.sampled_from(["Psi", "PsiBar", "K", "Id", "Y1 . coY2", "Y2 . coY1"])
    return st.lists(one, min_size=1, max_size=4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["fibonacci", "ising", "cyclic(3,1)", "rep_z2"]), small_words(), small_words())
def test_evaluate_is_functorial(name, left, right):
    cat = make(name)
    f, g = " . ".join(left), " . ".join(right)
    mf, mg = evaluate(f, cat).matrix, evaluate(g, cat).matrix
    assert np.allclose(evaluate(f"({f}) . ({g})", cat).matrix, mf @ mg)
    assert np.allclose(evaluate(f"({f}) # ({g})", cat).matrix, np.kron(mf, mg))


def test_check_equal_examples(fib, ising):
    assert check_equal("Y1 . (PsiBar # PsiBar)", "PsiBar . Y2", fib).passed
    assert check_equal("Y2 . (Psi # Psi)", "Psi . Y1 . (K # Id)", fib).passed
    assert check_equal("(Id # Y2) . (coY2 # Id)", "coY2 . Y2", ising).passed
    assert not check_equal("Y1", "Y2", fib).passed
    with pytest.raises(ArityError):
        check_equal("Y1", "Psi", fib)


def test_identity_catalogue_sizes():
    assert len(EXCHANGE_IDENTITIES) == 12
    assert len(FROBENIUS_IDENTITIES) == 8
    assert len(UNIT_IDENTITIES) == 8


@pytest.mark.parametrize("name", MODULAR)
def test_proposition_suite_modular(name, cats):
    suite = proposition_suite(cats[name])
    assert suite.passed, [n for n, r in suite.results if not r.passed]
    assert suite.max_residual < 1e-9


def test_counit_discrepancy(fib):
    assert check_equal("ci1 . Psi", "ci2", fib, scale=fib.D).passed


def test_premodular_suite_only_misses_counit(cats):
    suite = proposition_suite(cats["rep_z2"])
    failing = [n for n, r in suite.results if not r.passed]
    assert failing == ["counit_discrepancy"]


# -- genus words --------------------------------------------------------------
def test_genus_word_examples():
    assert str(genus_word(0, 2, "fusion")) == "ci2 . Y2"
    assert typecheck(genus_word(1, 3, "formula")) == (3, 0)
    for g in range(4):
        for n in range(1, 4):
            for side in ("formula", "fusion"):
                assert typecheck(genus_word(g, n, side)) == (n, 0)


@pytest.mark.parametrize("g,n,side", [(-1, 1, "fusion"), (1, 0, "fusion"), (1, 1, "sideways")])
def test_genus_word_rejects(g, n, side):
    with pytest.raises(ValueError):
        genus_word(g, n, side)


def test_genus_word_fibonacci(fib):
    rep = genus_word_report(fib, 1, ["tau"])
    assert rep.passed
    assert rep.bruteforce == 1
    assert abs(rep.formula_value - fib.D * rep.fusion_value) < 1e-9


@pytest.mark.parametrize("name", ["fibonacci", "ising", "semion", "su2(3)"])
def test_genus_word_matches_bruteforce(name, cats):
    cat = cats[name]
    for g in range(3):
        for ins in ([0], [1], [1, 1], [1, cat.rank - 1, 1]):
            assert genus_word_report(cat, g, ins).passed, (g, ins)


# -- export -------------------------------------------------------------------
@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False), min_size=1, max_size=12),
       st.integers(1, 4))
def test_export_roundtrip_bitwise(values, cols):
    arr = np.array(values + [0] * (-len(values) % cols), dtype=complex).reshape(-1, cols)
    for to, back in ((matrix_to_json, matrix_from_json), (matrix_to_csv, matrix_from_csv)):
        again = back(to(arr))
        assert again.shape == arr.shape
        assert again.tobytes() == arr.tobytes()


def test_export_evaluated_map(fib):
    m = evaluate("Psi . Y2", fib)
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m.matrix)
