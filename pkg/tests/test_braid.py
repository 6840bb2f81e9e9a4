from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from qg.braid import (
    ClassicalRational,
    FrozenVertex,
    WrongLayout,
    an_seed,
    apply_word,
    beta_squared_differs,
    binomial_A,
    braid_conjugate,
    braid_move,
    braid_relation,
    check_mutation_lemma,
    etas_of,
    eval_classical_A,
    expand_word,
    find_layouts,
    layout,
    mutate,
    path_counts,
    seed_from_form,
    verify_braid,
)


def two_vertex_seed(b=1):
    return seed_from_form(["z", "y"], [[0, b], [-b, 0]])


# -- mutation

def test_mutation_single_arrow():
    s = two_vertex_seed()
    z, y = s.variables
    one = ClassicalRational.of(z.K, 1)
    m = mutate(s, "z")
    assert m.var("z") == z.inverse()
    assert m.var("y") == y * (one + z)
    assert m.eps == ((0, -1), (1, 0))
    m = mutate(s, "y")
    assert m.var("z") == z / (one + y.inverse())


def test_mutation_double_arrow():
    s = two_vertex_seed(2)
    z, y = s.variables
    one = ClassicalRational.of(z.K, 1)
    assert mutate(s, "z").var("y") == y * (one + z) ** 2


def test_mutation_isolated_vertex():
    s = seed_from_form(["a", "b"], [[0, 0], [0, 0]])
    m = mutate(s, "a")
    assert m.var("a") == s.var("a").inverse() and m.var("b") == s.var("b")


def test_mutation_frozen():
    s = seed_from_form(["a", "b"], [[0, 1], [-1, 0]], frozen=["b"])
    with pytest.raises(FrozenVertex):
        mutate(s, "b")


@pytest.mark.parametrize("n", [3, 4])
def test_mutation_involution_on_an(n):
    s = an_seed(n)
    for v in s.vertices:
        back = mutate(mutate(s, v), v)
        assert back.eps == s.eps and back.variables == s.variables


def test_mutation_against_sympy_oracle():
    """Y-pattern mutation rule checked with plain sympy symbols."""
    s = seed_from_form(["a", "b", "c"], [[0, 1, -1], [-1, 0, 2], [1, -2, 0]])
    a, b, c = sympy.symbols("a b c", positive=True)
    m = mutate(s, "b")
    pt = (0.7, 1.9, 0.4)
    va, vb, vc = pt
    want = {"a": va * (1 + 1 / vb) ** -1, "b": 1 / vb, "c": vc * (1 + vb) ** 2}
    for v, w in want.items():
        assert abs(m.var(v).evaluate(pt) - w) < 1e-12


# -- classical rationals with radicals

def test_radical_classes():
    s = two_vertex_seed()
    z, y = s.variables
    r = (z * y) ** Fraction(1, 2)
    assert not r.is_rational
    assert r * r == z * y
    assert r + r == r * ClassicalRational.of(z.K, 2)
    assert (z ** Fraction(1, 2)) * (y ** Fraction(1, 2)) == r
    assert z ** Fraction(1, 2) != y ** Fraction(1, 2)


# -- layouts and the lemma

@pytest.mark.parametrize("n", [3, 4, 5])
def test_found_layouts_match_shipped(n):
    found = find_layouts(n)
    for i in range(1, n):
        assert found[i] == layout(n, i)


@pytest.mark.parametrize("n,i", [(n, i) for n in (3, 4, 5) for i in range(1, n)])
def test_mutation_lemma(n, i):
    rep = check_mutation_lemma(n, i)
    assert rep.holds, {k: v for k, v in rep.checks.items() if not v}


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_mutation_lemma_n6(i):
    rep = check_mutation_lemma(6, i)
    assert rep.holds, {k: v for k, v in rep.checks.items() if not v}


def test_word_length():
    for n in (3, 4, 5, 6):
        for i in range(1, n):
            assert len(layout(n, i).word) == 2 * n - 5


def test_eta_examples():
    lay = layout(5, 2)
    s = an_seed(5)
    vals = {v: s.var(v) for v in s.vertices}
    eta = etas_of(lay, vals)
    one = ClassicalRational.of(s.variables[0].K, 1)
    r = len(lay.bs)
    assert eta[r + 2] == one
    assert eta[r + 1] == one + vals[lay.s2]
    assert eta[1] == one + vals[lay.s2] + vals[lay.s2] * vals[lay.bs[1]] + vals[lay.s2] * vals[lay.bs[1]] * vals[lay.bs[0]]


@pytest.mark.parametrize("n,i", [(4, 1), (4, 2), (5, 2), (5, 3)])
def test_superdiagonal_entry_formula(n, i):
    """a_{i,i+1} = (S2 B_r..B_1 S1)^{-1/2} G in the inverse variables."""
    lay = layout(n, i)
    s = an_seed(n)
    x = {v: s.var(v).inverse() for v in s.vertices}
    eta = etas_of(lay, x)
    bprod = ClassicalRational.of(s.variables[0].K, 1)
    for b in lay.bs:
        bprod = bprod * x[b]
    mono = x[lay.s2] * bprod * x[lay.s1]
    G = eta[1] + mono
    A = eval_classical_A(n, s)
    assert A[i - 1][i] == mono ** Fraction(-1, 2) * G


def test_wrong_layout():
    from qg.braid import Layout

    s = an_seed(4)
    assert layout(4, 1) == Layout(4, 1, ("Z211",), "Z112", "Zb1")
    with pytest.raises(WrongLayout):
        braid_move(s, 1, Layout(4, 1, ("Z121",), "Z112", "Zb1"))


# -- matrix action

def test_braid_conjugate_integers():
    A = binomial_A(3)
    assert braid_conjugate(A, 1) == [[1, 3, 6], [0, 1, 3], [0, 0, 1]]
    B = sympy.Matrix([[3, -1, 0], [1, 0, 0], [0, 0, 1]])
    assert sympy.Matrix(braid_conjugate(A, 1)) == B * sympy.Matrix(A) * B.T


def test_braid_conjugate_range():
    with pytest.raises(ValueError):
        braid_conjugate(binomial_A(3), 3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_path_counts_binomial(n):
    assert path_counts(n) == binomial_A(n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_classical_A_at_ones(n):
    A = eval_classical_A(n)
    ones = [1.0] * len(an_seed(n).vertices)
    assert [[round(x.evaluate(ones)) for x in r] for r in A] == binomial_A(n)


def test_verify_single_generator_n5():
    for i in range(1, 5):
        v = verify_braid(5, [i])
        assert v.holds, v.extra
        assert v.extra[f"matrix-action:{i}"] and v.extra[f"quiver-iso:{i}"]


def test_verify_empty_word():
    v = verify_braid(4, [])
    assert v.holds and v.id == "BRAID:"


@pytest.mark.parametrize("n,i", [(4, 1), (4, 2), (5, 1), (5, 2), (5, 3)])
def test_braid_relation(n, i):
    entries, variables = braid_relation(n, i, i + 1)
    assert entries and variables


def test_verify_braid_word():
    v = verify_braid(4, [1, 2, 1])
    assert v.holds
    assert v.extra["braid-relation:1,2"]


@pytest.mark.parametrize("n,i", [(3, 1), (4, 2)])
def test_beta_squared_is_not_identity(n, i):
    assert beta_squared_differs(n, i)


def test_expand_word():
    w = expand_word(4, [1, 2])
    assert len(w) == 2 * (2 * 4 - 5)
