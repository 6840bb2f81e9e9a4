"""Log-canonical Poisson brackets and the induced bracket on the entries of A."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from .anq import an_torus, named_casimirs, normalized_A
from .qtorus import ExponentVector, SkewForm, TorusElement, frac
from .tensor import Verdict


class Laurent:
    """Commutative Laurent polynomial with rational coefficients and rational exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[ExponentVector, Fraction] | None = None):
        self.terms: Dict[ExponentVector, Fraction] = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, e: ExponentVector | Mapping[str, object], c=1) -> "Laurent":
        if not isinstance(e, ExponentVector):
            e = ExponentVector(e)
        return cls({e: Fraction(c)})

    @classmethod
    def gen(cls, face: str, power=1) -> "Laurent":
        return cls.monomial(ExponentVector.unit(face, power))

    @classmethod
    def const(cls, c) -> "Laurent":
        return cls.monomial(ExponentVector(), c)

    @classmethod
    def from_torus(cls, x: TorusElement) -> "Laurent":
        """Specialize q = 1."""
        return cls({e: Fraction(c) for e, c in x.at_q1().items()})

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other) -> "Laurent":
        return other if isinstance(other, Laurent) else Laurent.const(other)

    def __add__(self, other) -> "Laurent":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Laurent":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Laurent":
        return self._lift(other) - self

    def __mul__(self, other) -> "Laurent":
        other = self._lift(other)
        out: Dict[ExponentVector, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            return Laurent({e.scale(k): c ** k})
        out = Laurent.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Laurent):
            other = Laurent.const(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def evaluate(self, point: Mapping[str, float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            t = float(c)
            for f, x in e.as_dict().items():
                t *= point[f] ** float(x)
            total += t
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*Z{e!r}" for e, c in sorted(self.terms.items()))


@dataclass(frozen=True)
class PoissonStructure:
    """{Z_a, Z_b} = kappa <a,b> Z_{a+b}."""

    form: SkewForm
    kappa: Fraction = Fraction(1)

    def with_kappa(self, kappa) -> "PoissonStructure":
        return PoissonStructure(self.form, frac(kappa))


def poisson_bracket(f: Laurent, g: Laurent, ps: PoissonStructure) -> Laurent:
    out: Dict[ExponentVector, Fraction] = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            w = ps.form.pair(e1, e2)
            if not w:
                continue
            e = e1 + e2
            out[e] = out.get(e, Fraction(0)) + ps.kappa * w * c1 * c2
    return Laurent(out)


def semiclassical_limit(x: TorusElement, y: TorusElement) -> Laurent:
    """(1/2) d/dq of the commutator xy - yx at q = 1.

    For monomials this is <a,b> Z_{a+b}, so poisson_bracket equals kappa times it.
    """
    c = x * y - y * x
    out: Dict[ExponentVector, Fraction] = {}
    for (e, r), v in c.terms.items():
        out[e] = out.get(e, Fraction(0)) + Fraction(r) * v / 2
    return Laurent(out)


# ---------------------------------------------------------------------------
# the bracket on A


@lru_cache(maxsize=None)
def classical_entries(n: int) -> Tuple[Tuple[Laurent, ...], ...]:
    """Normalized a_ij at q = 1 (zero below the diagonal, one on it)."""
    A = normalized_A(n).A
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(Laurent())
            elif j == i:
                row.append(Laurent.const(1))
            else:
                row.append(Laurent.from_torus(A.rows[i][j]))
        rows.append(tuple(row))
    return tuple(rows)


def an_structure(n: int, kappa=1) -> PoissonStructure:
    return PoissonStructure(an_torus(n).torus.form, frac(kappa))


@lru_cache(maxsize=None)
def calibrate_kappa() -> Fraction:
    """The unique kappa with {a12, a23} = a12 a23 - 2 a13 at n = 3."""
    a = classical_entries(3)
    raw = poisson_bracket(a[0][1], a[1][2], an_structure(3))
    target = a[0][1] * a[1][2] - 2 * a[0][2]
    e, c = next(iter(sorted(raw.terms.items())))
    kappa = target.terms.get(e, Fraction(0)) / c
    if not kappa or raw * kappa != target:
        raise ArithmeticError("no constant kappa reproduces the n=3 bracket")
    return kappa


def du_relations(n: int) -> Iterator[Tuple[str, Tuple[int, int], Tuple[int, int], Callable]]:
    """(family, (i,k), (j,l), rhs builder) for every instance of the five families, 0-based."""
    rng = range(n)
    for i in rng:
        for k in rng:
            for j in rng:
                for l in rng:
                    if i < k < j < l or i < j < l < k:
                        yield "zero", (i, k), (j, l), lambda A: Laurent()
                    elif i < j < k < l:
                        # a_kj with k > j is read as a_jk
                        yield "cross", (i, k), (j, l), (
                            lambda A, i=i, j=j, k=k, l=l: 2 * (A[i][j] * A[k][l] - A[i][l] * A[j][k]))
    for i in rng:
        for k in rng:
            for l in rng:
                if i < k < l:
                    yield "chain", (i, k), (k, l), lambda A, i=i, k=k, l=l: A[i][k] * A[k][l] - 2 * A[i][l]
                    yield "row", (i, k), (i, l), lambda A, i=i, k=k, l=l: -(A[i][k] * A[i][l]) + 2 * A[k][l]
    for i in rng:
        for j in rng:
            for k in rng:
                if i < j < k:
                    yield "column", (i, k), (j, k), lambda A, i=i, j=j, k=k: -(A[i][k] * A[j][k]) + 2 * A[i][j]


def check_du(n: int, kappa: Optional[Fraction] = None) -> Verdict:
    """Verify every instance of the five bracket families on the normalized entries."""
    if not 3 <= n <= 5:
        raise ValueError("check_du needs 3 <= n <= 5")
    t0 = time.perf_counter()
    kappa = calibrate_kappa() if kappa is None else frac(kappa)
    ps = an_structure(n, kappa)
    A = classical_entries(n)
    counts: Dict[str, List[int]] = {}
    first = None
    for fam, (i, k), (j, l), rhs in du_relations(n):
        lhs = poisson_bracket(A[i][k], A[j][l], ps)
        ok = lhs == rhs(A)
        c = counts.setdefault(fam, [0, 0])
        c[0] += ok
        c[1] += 1
        if not ok and first is None:
            first = (i * n + k, j * n + l, f"{fam}: {{a{i + 1}{k + 1}, a{j + 1}{l + 1}}}")
    holds = all(a == b for a, b in counts.values())
    extra = {"kappa": str(kappa), "families": {f: f"{a}/{b}" for f, (a, b) in counts.items()}}
    return Verdict("POISSON_DU", n, holds, first, "", (time.perf_counter() - t0) * 1000, extra)


def casimirs_central(n: int, kappa=1) -> bool:
    """{K, Z_v} = 0 for every named Casimir K and unfrozen generator Z_v."""
    am = an_torus(n)
    ps = an_structure(n, kappa)
    for name, x in named_casimirs(n).items():
        if name == "D1":  # lives on the triangle torus
            continue
        K = Laurent.from_torus(x)
        for v in am.unfrozen():
            if not poisson_bracket(K, Laurent.gen(v), ps).is_zero():
                return False
    return True


def jacobiator(f: Laurent, g: Laurent, h: Laurent, ps: PoissonStructure) -> Laurent:
    return (poisson_bracket(f, poisson_bracket(g, h, ps), ps)
            + poisson_bracket(g, poisson_bracket(h, f, ps), ps)
            + poisson_bracket(h, poisson_bracket(f, g, ps), ps))
