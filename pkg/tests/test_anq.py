from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
import sympy

from qg.anq import (
    an_torus,
    amalgamated_faces,
    build_A,
    casimir_subsets,
    check_casimirs,
    d1_partners,
    full_rank_faces,
    in_kernel_span,
    kernel_dimensions,
    named_casimirs,
    normalized_A,
    reduced_faces,
)
from qg.qtorus import ExponentVector
from qg.sln import triangle_torus


def rank_oracle(form, faces):
    """Kernel dimension of the restricted form through a plain sympy rank."""
    M = sympy.Matrix([[sympy.Rational(str(form.pair_faces(a, b))) for b in faces] for a in faces])
    return len(faces) - M.rank()


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_kernel_dimensions(n):
    dims = kernel_dimensions(n)
    assert dims["full_rank"] == n // 2
    assert dims["reduced"] == (n - 1) // 2
    assert dims["reduced_with_summit"] == (n - 1) // 2 + 1
    assert dims["amalgamated"] == n // 2 + (n - 1)
    tf, af = triangle_torus(n).torus.form, an_torus(n).torus.form
    assert dims["full_rank"] == rank_oracle(tf, full_rank_faces(n))
    assert dims["reduced"] == rank_oracle(tf, reduced_faces(n))
    assert dims["amalgamated"] == rank_oracle(af, amalgamated_faces(n))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_named_casimirs(n):
    res = check_casimirs(n)
    assert all(res.values()), res
    assert len([k for k in res if k.startswith("K")]) == n - 1
    assert len([k for k in res if k.startswith("C")]) == n // 2
    for name, x in named_casimirs(n).items():
        if name != "D1":
            assert in_kernel_span(n, x.leading_exponent())


def test_casimir_negative_control():
    # a single unfrozen generator is not central
    f = an_torus(4).unfrozen()[0]
    assert not in_kernel_span(4, ExponentVector.unit(f))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_d1_pairs_only_outside_its_support(n):
    support = set(casimir_subsets(n)["D1"])
    partners = d1_partners(n)
    assert partners and not support & set(partners)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_toy_A(n):
    A = build_A(n)
    assert A.at_all_ones() == [[comb(n, j - i) if j >= i else 0 for j in range(n)] for i in range(n)]
    assert normalized_A(n).at_all_ones() == A.at_all_ones()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_A_positive_and_unipotent(n):
    A = normalized_A(n).A
    t = A.torus
    for i in range(n):
        assert A.rows[i][i] == t.one().qshift(Fraction(-1, 2))
        for j in range(i):
            assert A.rows[i][j].is_zero()
        for j in range(i + 1, n):
            assert all(c > 0 for c in A.rows[i][j].terms.values())


def test_an3_quiver():
    am = an_torus(3)
    u = am.unfrozen()
    assert u == ["Z111", "Zb1", "Zb2"]
    vals = [am.torus.form.pair_faces(a, b) for a in u for b in u if a != b]
    assert sorted(vals) == [-2, -2, -2, 2, 2, 2]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_A_entries_live_on_amalgamated_torus(n):
    A = normalized_A(n).A
    assert A.torus is an_torus(n).torus
