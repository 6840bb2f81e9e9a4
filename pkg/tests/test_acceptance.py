"""The fourteen acceptance criteria, one test each, with their time limits."""
from __future__ import annotations

from fractions import Fraction
from math import comb

import sympy

from qg.anq import check_casimirs, kernel_dimensions, normalized_A
from qg.braid import braid_relation, check_mutation_lemma, verify_braid
from qg.network import TruncationPolicy, apply_move, measurements_agree, transport_relations
from qg.qtorus import QCoefficient, QuantumMatrix, SkewForm, Torus
from qg.samples import move_examples, wheel_network
from qg.semiclassical import check_du
from qg.sln import D1, d1_exponent, d2_exponent, normalized_transport, raw_transport, triangle_torus
from qg.tensor import permutation_matrix, r_matrix, r_matrix_coeffs, verify_identity

BUDGET = 600.0


def binom_A(n):
    return sympy.Matrix(n, n, lambda i, j: comb(n, j - i) if j >= i else 0)


def holds(ident, n, budget=None):
    v = verify_identity(ident, n, budget)
    assert v.holds is True, f"{ident} n={n}: {v.status} {v.detail}"


def test_01_toy_specialization(criterion):
    with criterion(1, "toy specialization: binomial M1, M2, A; M1^3 = (-1)^{n+1} I, M1^2 = M2", 1.0):
        for n in (3, 4, 5):
            m1, m2 = normalized_transport(n)
            M1, M2 = sympy.Matrix(m1.at_all_ones()), sympy.Matrix(m2.at_all_ones())
            assert M1 == sympy.Matrix(n, n, lambda i, j: (-1) ** i * comb(n - 1 - i, j))
            assert M1 ** 2 == M2
            assert M1 ** 3 == (-1) ** (n + 1) * sympy.eye(n)
            assert sympy.Matrix(normalized_A(n).at_all_ones()) == binom_A(n) == M1.T * M2


def test_02_sl3_golden(criterion):
    from test_sln import NORM1, NORM2, RAW1, RAW2, golden, mono, qs_row

    with criterion(2, "SL3 golden matrices: raw, normalized, D1, D2", 1.0):
        t = triangle_torus(3).torus
        r1, r2 = raw_transport(3)
        m1, m2 = normalized_transport(3)
        assert r1 == golden(t, RAW1) and r2 == golden(t, RAW2)
        assert m1 == golden(t, NORM1, qs_row) and m2 == golden(t, NORM2, qs_row)
        assert D1(3) == t.monomial(mono("Z021^1/3 Z102^2/3 Z111^1/3 Z003 Z012^2/3 Z201^1/3"))
        assert -(d1_exponent(3) + d2_exponent(3)) == mono(
            "Z300^-1 Z003^-1 Z201^-1 Z102^-1 Z210^-2/3 Z111^-2/3 Z012^-2/3 Z120^-1/3 Z021^-1/3")


def test_03_r_matrix_suite(criterion):
    with criterion(3, "R-matrix: R(q)R(q^-1) = Id, R(q) - R^T(q^-1) = (q-q^-1)P, explicit R_3", 1.0):
        t = Torus(SkewForm([]))
        qd = t.scalar(QCoefficient({1: 1, -1: -1}))
        for k in (2, 3, 4):
            R = r_matrix(k, t, normalized=False)
            Ri = r_matrix(k, t, normalized=False, q_inverse=True)
            assert R @ Ri == QuantumMatrix.identity(t, k * k)
            assert R - Ri.T() == permutation_matrix(k, t).map(lambda x: x * qd)
        one, zero, q, d = QCoefficient.one(), QCoefficient(), QCoefficient.q(1), QCoefficient({1: 1, -1: -1})
        rows = [[(q if i in (0, 4, 8) else one) if i == j else zero for j in range(9)] for i in range(9)]
        rows[3][1] = rows[6][2] = rows[7][5] = d
        assert r_matrix_coeffs(3, normalized=True) == [[c.shift(Fraction(-1, 3)) for c in r] for r in rows]


def test_04_rtt_and_cross(criterion):
    with criterion(4, "RTT and cross relations, raw and normalized, n = 2, 3 (n = 4 budgeted)", BUDGET):
        for n in (2, 3, 4):
            for ident in ("RTT_raw", "CROSS_raw", "RTT_norm", "CROSS_norm"):
                holds(ident, n, BUDGET if n == 4 else None)


def test_05_groupoid(criterion):
    with criterion(5, "groupoid relation M3 M1 = M2, n = 2, 3", 120.0):
        for n in (2, 3):
            holds("GROUPOID", n)


def test_06_reflection(criterion):
    with criterion(6, "reflection equation for A = M1^T M2, n = 2, 3 (n = 4 budgeted)", BUDGET):
        for n in (2, 3, 4):
            holds("REFLECTION", n, BUDGET if n == 4 else None)


def test_07_reflection_gen(criterion):
    with criterion(7, "reflection equation for the generalized A over two tori, n = 2"):
        holds("REFLECTION_GEN", 2)


def test_08_goldman_and_paths(criterion):
    with criterion(8, "Goldman relation and commuting nonintersecting paths, n = 2, 3"):
        for n in (2, 3):
            holds("GOLDMAN", n)
            holds("COMMUTING_PATHS", n)


def test_09_casimirs(criterion):
    with criterion(9, "Casimirs K_i, C_k, D_1 central for n = 3..6; kernel dimensions", 10.0):
        for n in (3, 4, 5, 6):
            res = check_casimirs(n)
            assert all(res.values()), res
            dims = kernel_dimensions(n)
            assert dims["full_rank"] == n // 2
            assert dims["reduced"] == (n - 1) // 2
            assert dims["amalgamated"] == n // 2 + n - 1


def test_10_braid(criterion):
    with criterion(10, "mutation lemma (n = 5, 6), quiver return, B A B^T action, braid relations (n = 4, 5)",
                   600.0):
        for n in (5, 6):
            for i in range(1, n):
                rep = check_mutation_lemma(n, i)
                assert rep.holds, (n, i, {k: v for k, v in rep.checks.items() if not v})
        for i in range(1, 5):
            v = verify_braid(5, [i], ("matrix-action", "quiver-iso"))
            assert v.holds, v.extra
        for n in (4, 5):
            for i in range(1, n - 1):
                entries, _ = braid_relation(n, i, i + 1)
                assert entries, (n, i)


def test_11_poisson_du(criterion):
    with criterion(11, "bracket families on the entries of A, n = 3, 4", 300.0):
        for n in (3, 4):
            v = check_du(n)
            assert v.holds, v.extra


def test_12_quantum_network_relations(criterion):
    with criterion(12, "transport algebra on a one-cycle network modulo degree 8", 60.0):
        rep = transport_relations(wheel_network(), TruncationPolicy(8))
        assert rep.holds, rep.failures[:3]
        assert all(rep.counts[k] > 0 for k in ("nested", "crossing", "separated", "source", "sink"))


def test_13_move_invariance(criterion):
    with criterion(13, "M1-M3, R1-R3 preserve boundary measurements modulo degree 8", 60.0):
        pol = TruncationPolicy(8)
        seen = set()
        for move, loc, net in move_examples():
            assert measurements_agree(net, apply_move(net, move, loc, pol), pol), move
            seen.add(move)
        assert seen == {"M1", "M2", "M3", "R1", "R2", "R3"}


def test_14_property_suites(criterion):
    import test_properties as tp

    with criterion(14, "property suites, 1000 cases each"):
        for fn in (tp.test_torus_associativity, tp.test_weyl_form_well_defined,
                   tp.test_mutation_involution, tp.test_poisson_jacobi):
            assert fn._hypothesis_internal_use_settings.max_examples == tp.N
            fn()
