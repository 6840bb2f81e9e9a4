from __future__ import annotations

from fractions import Fraction

import pytest

from qg.qtorus import QCoefficient, QuantumMatrix, SkewForm, Torus
from qg.tensor import (
    CATALOG,
    Deadline,
    Inconclusive,
    canonical_id,
    partial_transpose_1,
    permutation_matrix,
    r_matrix,
    r_matrix_coeffs,
    verify_identity,
)

SCALARS = Torus(SkewForm([]), name="scalars")


def R(k, normalized=False, q_inverse=False):
    return r_matrix(k, SCALARS, normalized=normalized, q_inverse=q_inverse)


def qdiff():
    return QCoefficient({1: 1, -1: -1})


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("normalized", [False, True])
def test_r_inverse(k, normalized):
    I = QuantumMatrix.identity(SCALARS, k * k)
    assert R(k, normalized) @ R(k, normalized, q_inverse=True) == I


@pytest.mark.parametrize("k", [2, 3, 4])
def test_r_minus_transpose(k):
    lhs = R(k) - R(k, q_inverse=True).T()
    rhs = permutation_matrix(k, SCALARS).map(lambda x: x * SCALARS.scalar(qdiff()))
    assert lhs == rhs


@pytest.mark.parametrize("k", [2, 3])
def test_yang_baxter(k):
    """R12 R13 R23 = R23 R13 R12 on the triple tensor power."""
    from qg.tensor import kron

    Rk = R(k)
    I = QuantumMatrix.identity(SCALARS, k)
    P = permutation_matrix(k, SCALARS)
    R12 = kron(Rk, I)
    R23 = kron(I, Rk)
    P23 = kron(I, P)
    R13 = P23 @ R12 @ P23
    assert R12 @ R13 @ R23 == R23 @ R13 @ R12


def test_r3_explicit():
    one, zero = QCoefficient.one(), QCoefficient()
    q, d = QCoefficient.q(1), qdiff()
    rows = [[zero] * 9 for _ in range(9)]
    for i in range(9):
        rows[i][i] = q if i in (0, 4, 8) else one
    rows[3][1] = rows[6][2] = rows[7][5] = d
    assert r_matrix_coeffs(3, normalized=False) == rows
    normed = r_matrix_coeffs(3, normalized=True)
    assert normed == [[c.shift(Fraction(-1, 3)) for c in r] for r in rows]


def test_partial_transpose_is_involution():
    m = R(3)
    assert partial_transpose_1(partial_transpose_1(m, 3), 3) == m
    assert partial_transpose_1(m, 3) != m


def test_canonical_id():
    assert canonical_id("reflection-gen") == "REFLECTION_GEN"
    with pytest.raises(KeyError):
        canonical_id("nope")


def test_deadline():
    import time

    with pytest.raises(Inconclusive):
        with Deadline(0.05):
            time.sleep(0.3)


CASES = [(ident, n) for n in (2, 3) for ident in CATALOG if not (ident == "REFLECTION_GEN" and n == 3)]


@pytest.mark.parametrize("ident,n", CASES, ids=[f"{i}-{n}" for i, n in CASES])
def test_catalog(ident, n):
    v = verify_identity(ident, n)
    assert v.holds is True, v.detail


def test_reflection_gen_n3():
    assert verify_identity("REFLECTION_GEN", 3).holds is True


N4 = [i for i in CATALOG if i != "REFLECTION_GEN"]


@pytest.mark.parametrize("ident", N4)
def test_catalog_n4(ident):
    assert verify_identity(ident, 4).holds is True


@pytest.mark.slow
def test_reflection_gen_n4():
    assert verify_identity("REFLECTION_GEN", 4).holds is True


def test_budget_gives_inconclusive():
    v = verify_identity("GOLDMAN", 4, budget=0.01)
    assert v.holds is None and v.status == "inconclusive"
