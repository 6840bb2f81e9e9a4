from __future__ import annotations

import re
from fractions import Fraction
from math import comb

import pytest
import sympy

from qg.qtorus import ExponentVector, QuantumMatrix
from qg.sln import (
    D1,
    D2,
    S_matrix,
    classical_T1,
    classical_matrix,
    d1_exponent,
    d2_exponent,
    m3_transport,
    normalized_transport,
    raw_transport,
    tau,
    tau_rotate,
    triangle_torus,
    triples,
)


def mono(text: str) -> ExponentVector:
    """'Z021^-1/3 Z102^2/3 Z003' -> exponent vector (repeated faces add up)."""
    out = {}
    for face, p in re.findall(r"(Z\d{3})(?:\^(-?\d+(?:/\d+)?))?", text):
        out[face] = out.get(face, Fraction(0)) + Fraction(p or 1)
    return ExponentVector(out)


def entry(t, *terms):
    """Sum of Weyl monomials, as listed in the reference tables."""
    x = t.zero()
    for s in terms:
        x = x + t.monomial(mono(s))
    return x


# -- golden SL3 tables

RAW1 = [
    [["Z003"], [], []],
    [["Z003 Z102"], ["Z012 Z003 Z102"], []],
    [["Z003 Z102 Z201"], ["Z012 Z003 Z102 Z201", "Z012 Z111 Z003 Z102 Z201"],
     ["Z021 Z012 Z111 Z003 Z102 Z201"]],
]

RAW2 = [
    [["Z003 Z300 Z201 Z102"], ["Z003 Z300 Z012 Z201 Z102", "Z003 Z300 Z111 Z012 Z201 Z102"],
     ["Z003 Z300 Z021 Z111 Z012 Z201 Z102"]],
    [[], ["Z003 Z300 Z210 Z111 Z012 Z201 Z102"], ["Z003 Z300 Z210 Z021 Z111 Z012 Z201 Z102"]],
    [[], [], ["Z003 Z300 Z120 Z210 Z021 Z111 Z012 Z201 Z102"]],
]

# The normalized tables list the Weyl monomials only; the row factor (-1)^{i+1} q^{1/2-i}
# is checked separately.  Entry (1,2) and row 2 of the M1 table follow the factorization
# Q S D1^{-1} M1raw: the factor Z012^{1/3}, and Z102^{+1/3} from raw row Z003 Z102.
NORM1 = [
    [["Z021^-1/3 Z102^1/3 Z111^-1/3 Z012^-2/3 Z201^2/3"],
     ["Z021^-1/3 Z102^1/3 Z111^-1/3 Z012^1/3 Z201^2/3", "Z021^-1/3 Z102^1/3 Z111^2/3 Z012^1/3 Z201^2/3"],
     ["Z021^2/3 Z102^1/3 Z111^2/3 Z012^1/3 Z201^2/3"]],
    [["Z021^-1/3 Z102^1/3 Z111^-1/3 Z012^-2/3 Z201^-1/3"],
     ["Z021^-1/3 Z102^1/3 Z111^-1/3 Z012^1/3 Z201^-1/3"], []],
    [["Z021^-1/3 Z102^-2/3 Z111^-1/3 Z012^-2/3 Z201^-1/3"], [], []],
]

NORM2 = [
    [[], [], ["Z210^1/3 Z111^1/3 Z012^1/3 Z120^2/3 Z021^2/3"]],
    [[], ["Z210^1/3 Z111^1/3 Z012^1/3 Z120^-1/3 Z021^-1/3"],
     ["Z210^1/3 Z111^1/3 Z012^1/3 Z120^-1/3 Z021^2/3"]],
    [["Z210^-2/3 Z111^-2/3 Z012^-2/3 Z120^-1/3 Z021^-1/3"],
     ["Z210^-2/3 Z111^-2/3 Z012^1/3 Z120^-1/3 Z021^-1/3", "Z210^-2/3 Z111^1/3 Z012^1/3 Z120^-1/3 Z021^-1/3"],
     ["Z210^-2/3 Z111^1/3 Z012^1/3 Z120^-1/3 Z021^2/3"]],
]


def golden(t, table, row_factor=None):
    rows = []
    for i, r in enumerate(table):
        row = []
        for terms in r:
            x = entry(t, *terms)
            if row_factor is not None:
                x = row_factor(i, x)
            row.append(x)
        rows.append(row)
    return QuantumMatrix(t, rows)


def qs_row(i, x):
    # 0-based i: (-1)^{i} q^{-1/2 - i}
    return (x if i % 2 == 0 else -x).qshift(Fraction(-1, 2) - i)


def test_raw_transport_sl3():
    t = triangle_torus(3).torus
    r1, r2 = raw_transport(3)
    assert r1 == golden(t, RAW1)
    assert r2 == golden(t, RAW2)


def test_normalized_transport_sl3():
    t = triangle_torus(3).torus
    m1, m2 = normalized_transport(3)
    assert m1 == golden(t, NORM1, qs_row)
    assert m2 == golden(t, NORM2, qs_row)


def test_d1_d2_sl3():
    t = triangle_torus(3).torus
    assert D1(3) == t.monomial(mono("Z021^1/3 Z102^2/3 Z111^1/3 Z003 Z012^2/3 Z201^1/3"))
    # the reference "D2" is the combined right normalizer of M2
    combined = mono("Z300^-1 Z003^-1 Z201^-1 Z102^-1 Z210^-2/3 Z111^-2/3 Z012^-2/3 Z120^-1/3 Z021^-1/3")
    assert -(d1_exponent(3) + d2_exponent(3)) == combined
    assert D2(3) == tau_rotate(D1(3), 2)


def test_normalized_factorization_q1():
    """q = 1 values of normalized M1 equal the factorized product of H and L matrices."""
    for n in (2, 3, 4):
        m1, _ = normalized_transport(n)
        diff = sympy.simplify(classical_matrix(m1) - classical_T1(n))
        assert diff == sympy.zeros(n, n)


# -- toy specialization

def toy_M1(n):
    return [[(-1) ** i * comb(n - 1 - i, j) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_toy_matrices(n):
    m1, m2 = normalized_transport(n)
    M1 = sympy.Matrix(m1.at_all_ones())
    M2 = sympy.Matrix(m2.at_all_ones())
    assert M1 == sympy.Matrix(toy_M1(n))
    assert M1 ** 2 == M2
    assert M1 ** 3 == (-1) ** (n + 1) * sympy.eye(n)
    absS = sympy.Matrix(n, n, lambda i, j: 1 if i + j == n - 1 else 0)
    assert M2 == (-1) ** (n + 1) * absS * M1 * absS
    assert M1.T * M2 == sympy.Matrix(n, n, lambda i, j: comb(n, j - i) if j >= i else 0)


def test_toy_tables():
    m1, m2 = normalized_transport(3)
    assert m1.at_all_ones() == [[1, 2, 1], [-1, -1, 0], [1, 0, 0]]
    assert m2.at_all_ones() == [[0, 0, 1], [0, -1, -1], [1, 2, 1]]
    m1, m2 = normalized_transport(4)
    assert m1.at_all_ones() == [[1, 3, 3, 1], [-1, -2, -1, 0], [1, 1, 0, 0], [-1, 0, 0, 0]]
    assert m2.at_all_ones() == [[0, 0, 0, 1], [0, 0, -1, -1], [0, 1, 2, 1], [-1, -3, -3, -1]]


# -- structure

def test_S_matrix():
    assert S_matrix(3) == [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
    for n in range(2, 7):
        S = sympy.Matrix(S_matrix(n))
        assert S ** 2 == (-1) ** (n + 1) * sympy.eye(n)


def test_tau_order_three():
    for t in triples(4):
        assert tau(tau(tau(t))) == t
    x = D1(4)
    assert tau_rotate(x, 3) == x
    assert tau_rotate(x, 1) != x


@pytest.mark.parametrize("n", [2, 3])
def test_toy_m3(n):
    """M3 at q = 1 is M2 M1^{-1}, computed independently by sympy."""
    m1, m2 = normalized_transport(n)
    A, B = classical_matrix(m1), classical_matrix(m2)
    C = classical_matrix(m3_transport(n))
    assert sympy.simplify(C - B * A.inv()) == sympy.zeros(n, n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_det_one(n):
    assert sympy.simplify(classical_T1(n).det()) == 1
