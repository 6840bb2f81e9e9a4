"""Amalgamation, the upper-triangular matrix A = M1^T M2, and its Casimirs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .qtorus import (
    ExponentVector,
    QCoefficient,
    QuantumMatrix,
    SkewForm,
    Torus,
    TorusElement,
    commutation_exponent,
    iter_terms,
)
from .sln import d1_exponent, face_id, normalized_transport, triangle_torus, triples


class AmalgamationError(ValueError):
    pass


@dataclass
class AmalgamatedTorus:
    """Quotient of a torus in which each pair (a, b) becomes one face Z_bar = :Z_a Z_b:."""

    parent: Torus
    pairs: Tuple[Tuple[str, str], ...]
    names: Tuple[str, ...]
    torus: Torus
    frozen: FrozenSet[str] = frozenset()

    def push_exponent(self, e: ExponentVector) -> ExponentVector:
        d = e.as_dict()
        out: Dict[str, Fraction] = {}
        for (a, b), name in zip(self.pairs, self.names):
            va, vb = d.pop(a, Fraction(0)), d.pop(b, Fraction(0))
            if va != vb:
                raise AmalgamationError(f"exponents of {a} and {b} differ ({va} vs {vb})")
            if va:
                out[name] = va
        out.update(d)
        return ExponentVector(out)

    def push(self, x: TorusElement) -> TorusElement:
        """Image of an element whose paired exponents agree in every term."""
        terms: Dict[Tuple[ExponentVector, Fraction], int] = {}
        for e, r, c in iter_terms(x):
            k = (self.push_exponent(e), r)
            terms[k] = terms.get(k, 0) + c
        return TorusElement(self.torus, terms)

    def push_matrix(self, m: QuantumMatrix) -> QuantumMatrix:
        return m.map(self.push, self.torus)

    def unfrozen(self) -> List[str]:
        return [f for f in self.torus.faces if f not in self.frozen]


def amalgamate(torus: Torus, pairs: Sequence[Tuple[str, str]], names: Sequence[str] | None = None,
               frozen: Sequence[str] = ()) -> AmalgamatedTorus:
    """Merge each pair of faces into a new face; pairings of the new face are summed.

    `frozen` lists faces of the result that stay frozen; the merged faces are unfrozen.
    """
    pairs = tuple((a, b) for a, b in pairs)
    seen = set()
    for a, b in pairs:
        if a == b or a in seen or b in seen:
            raise AmalgamationError("pairs must consist of distinct, non-overlapping faces")
        if a not in torus.faces or b not in torus.faces:
            raise AmalgamationError(f"unknown face in pair ({a}, {b})")
        seen.update((a, b))
    names = tuple(names) if names is not None else tuple(f"{a}+{b}" for a, b in pairs)
    if len(names) != len(pairs):
        raise AmalgamationError("one name per pair")
    if not pairs:
        return AmalgamatedTorus(torus, (), (), torus, frozenset(frozen))
    rep = {}
    for (a, b), name in zip(pairs, names):
        rep[a] = name
        rep[b] = name
    faces = [f for f in torus.faces if f not in rep] + list(names)
    form = SkewForm(faces)
    for a in torus.faces:
        for b, v in torus.form.rows[a].items():
            if torus.faces.index(a) < torus.faces.index(b):
                x, y = rep.get(a, a), rep.get(b, b)
                if x != y:
                    form.add(x, y, v)
    new = Torus(form, name=(torus.name + "/amalg") if torus.name else "amalg")
    return AmalgamatedTorus(torus, pairs, names, new, frozenset(frozen))


def zbar(k: int) -> str:
    return f"Zb{k}"


def standard_pairs(n: int) -> List[Tuple[str, str]]:
    return [(face_id(i, 0, n - i), face_id(n - i, i, 0)) for i in range(1, n)]


@lru_cache(maxsize=None)
def an_torus(n: int) -> AmalgamatedTorus:
    """The A_n amalgamation of the SL_n triangle torus.

    The frozen faces are the remaining side Z_{0,i,n-i} and the three corners.
    """
    tt = triangle_torus(n)
    frozen = [face_id(0, i, n - i) for i in range(0, n + 1)] + [face_id(n, 0, 0), face_id(0, n, 0)]
    return amalgamate(tt.torus, standard_pairs(n), [zbar(k) for k in range(1, n)], frozen=frozen)


def an_quiver_faces(n: int) -> List[str]:
    """Unfrozen vertices of the A_n-quiver: interior faces and the Z_bar."""
    return an_torus(n).unfrozen()


# ---------------------------------------------------------------------------
# the reflection matrix


@dataclass
class ReflectionMatrix:
    n: int
    A: QuantumMatrix
    amalgamation: Optional[AmalgamatedTorus] = None
    # Z-exponent of each diagonal entry
    diagonal: List[ExponentVector] = field(default_factory=list)

    def entry(self, i: int, j: int) -> TorusElement:
        return self.A.rows[i][j]

    def at_all_ones(self) -> List[List[int]]:
        return self.A.at_all_ones()


def _diag_exponents(A: QuantumMatrix) -> List[ExponentVector]:
    out = []
    for i in range(A.shape[0]):
        x = A.rows[i][i]
        if not x.is_monomial():
            raise ValueError("diagonal entry is not a monomial")
        out.append(x.leading_exponent())
    return out


@lru_cache(maxsize=None)
def build_A(n: int) -> ReflectionMatrix:
    """A = M1^T M2 pushed forward to the A_n-amalgamated torus."""
    m1, m2 = normalized_transport(n)
    am = an_torus(n)
    A = am.push_matrix(m1.T() @ m2)
    return ReflectionMatrix(n, A, am, _diag_exponents(A))


def A_entry_weyl(n: int, i: int, j: int) -> TorusElement:
    """Sum over k of :[M1]_{k,i} [M2]_{k,j}: (0-based), with q^{-1/2} on the diagonal."""
    from .qtorus import weyl_order

    m1, m2 = normalized_transport(n)
    t = m1.torus
    acc = t.zero()
    for k in range(n):
        a, b = m1.rows[k][i], m2.rows[k][j]
        if a.terms and b.terms:
            acc = acc + weyl_order(a, b)
    return acc.qshift(Fraction(-1, 2)) if i == j else acc


# ---------------------------------------------------------------------------
# Casimirs


def K_exponent(n: int, i: int) -> ExponentVector:
    d: Dict[str, Fraction] = {face_id(0, i, n - i): Fraction(2), zbar(i): Fraction(1)}
    for j in range(1, i):
        f = face_id(j, i - j, n - i)
        d[f] = d.get(f, Fraction(0)) + 1
    for j in range(1, n - i):
        f = face_id(j, i, n - i - j)
        d[f] = d.get(f, Fraction(0)) + 1
    return ExponentVector(d)


def C_exponent(n: int, k: int) -> ExponentVector:
    d: Dict[str, Fraction] = {}

    def bump(f, v=1):
        d[f] = d.get(f, Fraction(0)) + v

    bump(zbar(k))
    bump(zbar(n - k))
    for i in range(1, n - k):
        bump(face_id(k, i, n - k - i))
    for j in range(1, k):
        bump(face_id(n - k, j, k - j))
    return ExponentVector(d)


def named_casimirs(n: int) -> Dict[str, TorusElement]:
    """K_1..K_{n-1} and C_1..C_{[n/2]} on the A_n torus; D1 on the triangle torus."""
    am = an_torus(n)
    out: Dict[str, TorusElement] = {}
    for i in range(1, n):
        out[f"K{i}"] = am.torus.monomial(K_exponent(n, i))
    for k in range(1, n // 2 + 1):
        out[f"C{k}"] = am.torus.monomial(C_exponent(n, k))
    out["D1"] = triangle_torus(n).torus.monomial(d1_exponent(n))
    return out


def casimir_subsets(n: int) -> Dict[str, List[str]]:
    """The generator subset on which each named Casimir is declared central."""
    am = an_torus(n)
    tt = triangle_torus(n)
    out: Dict[str, List[str]] = {}
    for i in range(1, n):
        out[f"K{i}"] = am.unfrozen()
    for k in range(1, n // 2 + 1):
        out[f"C{k}"] = amalgamated_faces(n)
    out["D1"] = [face_id(*t) for t in triples(n) if t[2] > 0]
    return out


def corners(n: int) -> List[str]:
    return [face_id(n, 0, 0), face_id(0, n, 0), face_id(0, 0, n)]


def full_rank_faces(n: int) -> List[str]:
    """Faces of the full-rank SL_n quiver (corners excluded)."""
    return [f for f in triangle_torus(n).torus.faces if f not in corners(n)]


def reduced_faces(n: int, with_summit: bool = False) -> List[str]:
    """Full-rank faces minus the frozen side k = 0 (the variables of M1).

    with_summit adds the corner (0,0,n).
    """
    out = [f for f in full_rank_faces(n) if int(f[3]) > 0]
    if with_summit:
        out.append(face_id(0, 0, n))
    return out


def amalgamated_faces(n: int) -> List[str]:
    """Faces of the amalgamated quiver (corners excluded, frozen sides kept)."""
    return [f for f in an_torus(n).torus.faces if f not in corners(n)]


def kernel_dimensions(n: int) -> Dict[str, int]:
    from .qtorus import casimir_kernel

    tf = triangle_torus(n).torus.form
    af = an_torus(n).torus.form
    return {
        "full_rank": len(casimir_kernel(tf, full_rank_faces(n))),
        "reduced": len(casimir_kernel(tf, reduced_faces(n))),
        "reduced_with_summit": len(casimir_kernel(tf, reduced_faces(n, True))),
        "amalgamated": len(casimir_kernel(af, amalgamated_faces(n))),
    }


def in_kernel_span(n: int, e: ExponentVector) -> bool:
    """Whether e lies in the rational span of the amalgamated kernel."""
    import sympy
    from .qtorus import casimir_kernel

    faces = amalgamated_faces(n)
    basis = casimir_kernel(an_torus(n).torus.form, faces)
    M = sympy.Matrix([[b.get(f) for f in faces] for b in basis])
    v = sympy.Matrix([[e.get(f) for f in faces]])
    return M.rank() == M.col_join(v).rank()


def check_casimirs(n: int) -> Dict[str, bool]:
    res = {}
    cas = named_casimirs(n)
    subsets = casimir_subsets(n)
    for name, x in cas.items():
        e = x.leading_exponent()
        res[name] = all(commutation_exponent(x.torus, e, ExponentVector.unit(f)) == 0 for f in subsets[name])
    return res


def d1_partners(n: int) -> List[str]:
    """Faces of the triangle torus that pair nontrivially with D1."""
    t = triangle_torus(n).torus
    e = d1_exponent(n)
    return [f for f in t.faces if t.pair(e, ExponentVector.unit(f)) != 0]


# ---------------------------------------------------------------------------
# normalization


def casimir_normalizer(n: int, i: int, j: int) -> ExponentVector:
    """Exponent removed from entry (i, j) (0-based): the mean of the diagonal exponents.

    On the diagonal this is (prod_{k<i} K_k) / (K_1^{(n-1)/n} ... K_{n-1}^{1/n}); off the
    diagonal it adds prod_{i<=l<j} K_l^{1/2}.
    """
    diag = build_A(n).diagonal
    return (diag[i] + diag[j]).scale(Fraction(1, 2))


def normalize_unipotent(ra: ReflectionMatrix) -> ReflectionMatrix:
    """Divide each entry by its Casimir monomial and fix the diagonal to q^{-1/2}.

    The result is D A D with D diagonal (a q-power times a central monomial), so the
    reflection equation is preserved.
    """
    n = ra.n
    A = ra.A
    t = A.torus
    diag = ra.diagonal or _diag_exponents(A)
    qd = []
    for i in range(n):
        (_, r), c = next(iter(A.rows[i][i].terms.items()))
        if c != 1:
            raise ValueError("diagonal coefficient must be 1")
        qd.append((Fraction(-1, 2) - r) / 2)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = A.rows[i][j]
            if not x.terms:
                row.append(x)
                continue
            N = (diag[i] + diag[j]).scale(Fraction(1, 2))
            row.append(x.map_exponents(lambda e, N=N: e - N).qshift(qd[i] + qd[j]))
        rows.append(row)
    out = QuantumMatrix(t, rows)
    return ReflectionMatrix(n, out, ra.amalgamation, [ExponentVector() for _ in range(n)])


@lru_cache(maxsize=None)
def normalized_A(n: int) -> ReflectionMatrix:
    return normalize_unipotent(build_A(n))


# ---------------------------------------------------------------------------
# the general (full) reflection matrix


def build_A_gen(ra: ReflectionMatrix | QuantumMatrix, Mg: QuantumMatrix, prefixes=("a:", "g:")) -> QuantumMatrix:
    """A_gen = Mg^T S^T A S Mg, with A and Mg moved to the direct sum of their tori.

    If Mg already lives on the torus of A its entries must commute with those of A.
    """
    from .qtorus import direct_sum, embed
    from .sln import S_matrix

    A = ra.A if isinstance(ra, ReflectionMatrix) else ra
    n = A.shape[0]
    if Mg.torus is A.torus or Mg.torus.compatible(A.torus):
        for r in A.rows:
            for a in r:
                for s in Mg.rows:
                    for b in s:
                        if a.terms and b.terms and a * b != b * a:
                            raise ValueError("entries of M_gamma must commute with those of A")
        T = A.torus
        A2, M2 = A, Mg
    else:
        T = direct_sum([A.torus, Mg.torus], list(prefixes))
        A2 = A.map(lambda x: embed(x, T, prefixes[0]), T)
        M2 = Mg.map(lambda x: embed(x, T, prefixes[1]), T)
    S = QuantumMatrix.scalar_matrix(T, S_matrix(n))
    return M2.T() @ S.T() @ A2 @ S @ M2
