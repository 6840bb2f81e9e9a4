"""Exact arithmetic in a quantum torus.

Elements are finite sums c(q) Z_lambda where lambda is a rational exponent
vector over named faces and c(q) is an integer Laurent polynomial in rational
powers of q.  Multiplication follows Z_a Z_b = q^<a,b> Z_{a+b}.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

Rational = Union[int, Fraction]


def frac(x) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class TorusMismatch(ValueError):
    """Raised when elements from different tori are combined."""


# ---------------------------------------------------------------------------
# q-coefficients


class QCoefficient:
    """Integer Laurent polynomial in rational powers of q."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Rational, int] | None = None):
        clean: Dict[Fraction, int] = {}
        if terms:
            for r, c in terms.items():
                if c:
                    r = frac(r)
                    v = clean.get(r, 0) + int(c)
                    if v:
                        clean[r] = v
                    else:
                        clean.pop(r, None)
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def q(cls, r: Rational = 1, c: int = 1) -> "QCoefficient":
        return cls({frac(r): c})

    @classmethod
    def one(cls) -> "QCoefficient":
        return cls({Fraction(0): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "QCoefficient":
        other = _as_qcoef(other)
        d = dict(self.terms)
        for r, c in other.terms.items():
            d[r] = d.get(r, 0) + c
        return QCoefficient(d)

    __radd__ = __add__

    def __neg__(self) -> "QCoefficient":
        return QCoefficient({r: -c for r, c in self.terms.items()})

    def __sub__(self, other) -> "QCoefficient":
        return self + (-_as_qcoef(other))

    def __rsub__(self, other) -> "QCoefficient":
        return _as_qcoef(other) - self

    def __mul__(self, other) -> "QCoefficient":
        other = _as_qcoef(other)
        d: Dict[Fraction, int] = {}
        for r, c in self.terms.items():
            for s, e in other.terms.items():
                d[r + s] = d.get(r + s, 0) + c * e
        return QCoefficient(d)

    __rmul__ = __mul__

    def shift(self, r: Rational) -> "QCoefficient":
        r = frac(r)
        return QCoefficient({s + r: c for s, c in self.terms.items()})

    def invert_q(self) -> "QCoefficient":
        """Substitute q -> q^{-1}."""
        return QCoefficient({-s: c for s, c in self.terms.items()})

    def at_one(self) -> int:
        return sum(self.terms.values())

    def __eq__(self, other) -> bool:
        try:
            other = _as_qcoef(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def to_json(self) -> list:
        return [{"qexp": frac_str(r), "c": c} for r, c in self.terms.items()]

    @classmethod
    def from_json(cls, data: list) -> "QCoefficient":
        return cls({frac(t["qexp"]): int(t["c"]) for t in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for r, c in self.terms.items():
            if r == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*q^({frac_str(r)})")
        return " + ".join(parts)


def _as_qcoef(x) -> QCoefficient:
    if isinstance(x, QCoefficient):
        return x
    if isinstance(x, int):
        return QCoefficient({Fraction(0): x})
    raise TypeError(f"not a q-coefficient: {x!r}")


Q_MINUS_QINV = QCoefficient({Fraction(1): 1, Fraction(-1): -1})


# ---------------------------------------------------------------------------
# exponent vectors and skew forms


class ExponentVector:
    """Finitely supported face-id -> rational map, stored sorted."""

    __slots__ = ("items", "_hash")

    def __init__(self, entries: Mapping[str, Rational] | Iterable[Tuple[str, Rational]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        d: Dict[str, Fraction] = {}
        for f, v in entries:
            v = frac(v)
            d[f] = d.get(f, Fraction(0)) + v
        self.items: Tuple[Tuple[str, Fraction], ...] = tuple(
            sorted((f, v) for f, v in d.items() if v)
        )
        self._hash = hash(self.items)

    @classmethod
    def _raw(cls, items: Tuple[Tuple[str, Fraction], ...]) -> "ExponentVector":
        ev = cls.__new__(cls)
        ev.items = items
        ev._hash = hash(items)
        return ev

    @classmethod
    def unit(cls, face: str, v: Rational = 1) -> "ExponentVector":
        return cls({face: v})

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.items)

    def get(self, face: str) -> Fraction:
        for f, v in self.items:
            if f == face:
                return v
        return Fraction(0)

    def support(self) -> Tuple[str, ...]:
        return tuple(f for f, _ in self.items)

    def degree(self) -> Fraction:
        return sum((v for _, v in self.items), Fraction(0))

    def __add__(self, other: "ExponentVector") -> "ExponentVector":
        if not other.items:
            return self
        if not self.items:
            return other
        d = dict(self.items)
        for f, v in other.items:
            w = d.get(f)
            if w is None:
                d[f] = v
            else:
                w = w + v
                if w:
                    d[f] = w
                else:
                    del d[f]
        return ExponentVector._raw(tuple(sorted(d.items())))

    def __neg__(self) -> "ExponentVector":
        return ExponentVector._raw(tuple((f, -v) for f, v in self.items))

    def __sub__(self, other: "ExponentVector") -> "ExponentVector":
        return self + (-other)

    def scale(self, c: Rational) -> "ExponentVector":
        c = frac(c)
        if c == 0:
            return ExponentVector()
        return ExponentVector._raw(tuple((f, v * c) for f, v in self.items))

    def __bool__(self) -> bool:
        return bool(self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExponentVector) and self.items == other.items

    def __lt__(self, other: "ExponentVector") -> bool:
        return self.items < other.items

    def __hash__(self) -> int:
        return self._hash

    def to_json(self) -> Dict[str, str]:
        return {f: frac_str(v) for f, v in self.items}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "ExponentVector":
        return cls({f: frac(v) for f, v in data.items()})

    def __repr__(self) -> str:
        if not self.items:
            return "0"
        return "+".join(f"{frac_str(v)}*{f}" if v != 1 else f for f, v in self.items)


class SkewForm:
    """Antisymmetric rational pairing on named faces."""

    def __init__(self, faces: Sequence[str], pairing: Mapping[Tuple[str, str], Rational] | None = None):
        self.faces: Tuple[str, ...] = tuple(faces)
        if len(set(self.faces)) != len(self.faces):
            raise ValueError("duplicate face ids")
        self._index = {f: i for i, f in enumerate(self.faces)}
        self.rows: Dict[str, Dict[str, Fraction]] = {f: {} for f in self.faces}
        for (a, b), v in (pairing or {}).items():
            self.add(a, b, v)
        self._img_cache: Dict[ExponentVector, Dict[str, Fraction]] = {}

    def add(self, a: str, b: str, v: Rational) -> None:
        """Add v to <a,b> (and -v to <b,a>)."""
        v = frac(v)
        if a == b:
            if v:
                raise ValueError("diagonal of a skew form must vanish")
            return
        for x, y, w in ((a, b, v), (b, a, -v)):
            if x not in self.rows or y not in self.rows:
                raise KeyError(f"unknown face in pairing: {x}, {y}")
            row = self.rows[x]
            nv = row.get(y, Fraction(0)) + w
            if nv:
                row[y] = nv
            else:
                row.pop(y, None)
        self._img_cache = {}

    def pair_faces(self, a: str, b: str) -> Fraction:
        return self.rows[a].get(b, Fraction(0))

    def image(self, a: ExponentVector) -> Dict[str, Fraction]:
        img = self._img_cache.get(a)
        if img is None:
            img = {}
            for f, v in a.items:
                for g, w in self.rows[f].items():
                    img[g] = img.get(g, Fraction(0)) + v * w
            img = {g: w for g, w in img.items() if w}
            self._img_cache[a] = img
        return img

    def pair(self, a: ExponentVector, b: ExponentVector) -> Fraction:
        if not a.items or not b.items:
            return Fraction(0)
        img = self.image(a)
        s = Fraction(0)
        for f, v in b.items:
            w = img.get(f)
            if w:
                s += w * v
        return s

    def matrix(self, faces: Sequence[str] | None = None):
        faces = self.faces if faces is None else tuple(faces)
        return [[self.pair_faces(a, b) for b in faces] for a in faces]

    def arrows(self) -> Dict[Tuple[str, str], Fraction]:
        """Positive pairings <a,b> > 0, keyed in face order."""
        out = {}
        for a in self.faces:
            for b, v in self.rows[a].items():
                if v > 0:
                    out[(a, b)] = v
        return out

    def key(self) -> tuple:
        return (self.faces, tuple(sorted(self.arrows().items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewForm) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_json(self) -> dict:
        return {
            "faces": list(self.faces),
            "pairing": [[a, b, frac_str(v)] for (a, b), v in sorted(self.arrows().items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SkewForm":
        return cls(data["faces"], {(a, b): frac(v) for a, b, v in data["pairing"]})


# ---------------------------------------------------------------------------
# the torus and its elements


class Torus:
    """A quantum torus: face ids plus a skew form."""

    def __init__(self, form: SkewForm, name: str = ""):
        self.form = form
        self.name = name

    @property
    def faces(self) -> Tuple[str, ...]:
        return self.form.faces

    def compatible(self, other: "Torus") -> bool:
        return self is other or self.form is other.form or self.form == other.form

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def one(self) -> "TorusElement":
        return TorusElement(self, {(ExponentVector(), Fraction(0)): 1})

    def scalar(self, c) -> "TorusElement":
        c = _as_qcoef(c)
        e = ExponentVector()
        return TorusElement(self, {(e, r): v for r, v in c.terms.items()})

    def monomial(self, exp: ExponentVector | Mapping[str, Rational], coef=1) -> "TorusElement":
        """The Weyl monomial coef * Z_exp."""
        if not isinstance(exp, ExponentVector):
            exp = ExponentVector(exp)
        for f in exp.support():
            if f not in self.form.rows:
                raise KeyError(f"face {f!r} not in torus")
        c = _as_qcoef(coef)
        return TorusElement(self, {(exp, r): v for r, v in c.terms.items()})

    def gen(self, face: str, power: Rational = 1) -> "TorusElement":
        return self.monomial(ExponentVector({face: power}))

    def pair(self, a: ExponentVector, b: ExponentVector) -> Fraction:
        return self.form.pair(a, b)

    def __repr__(self) -> str:
        return f"Torus({self.name or len(self.faces)})"


Key = Tuple[ExponentVector, Fraction]


class TorusElement:
    """Finite sum of c * q^r * Z_lambda, stored as {(lambda, r): c}."""

    __slots__ = ("torus", "terms")

    def __init__(self, torus: Torus, terms: Mapping[Key, int]):
        self.torus = torus
        self.terms: Dict[Key, int] = {k: v for k, v in terms.items() if v}

    # -- construction helpers
    def _new(self, terms: Dict[Key, int]) -> "TorusElement":
        el = TorusElement.__new__(TorusElement)
        el.torus = self.torus
        el.terms = terms
        return el

    def _check(self, other: "TorusElement") -> None:
        if not self.torus.compatible(other.torus):
            raise TorusMismatch("elements live in different tori")

    # -- ring operations
    def __add__(self, other) -> "TorusElement":
        if not isinstance(other, TorusElement):
            other = self.torus.scalar(other)
        self._check(other)
        d = dict(self.terms)
        for k, v in other.terms.items():
            nv = d.get(k, 0) + v
            if nv:
                d[k] = nv
            else:
                d.pop(k, None)
        return self._new(d)

    __radd__ = __add__

    def __neg__(self) -> "TorusElement":
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "TorusElement":
        if not isinstance(other, TorusElement):
            other = self.torus.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "TorusElement":
        return (-self) + other

    def __mul__(self, other) -> "TorusElement":
        if isinstance(other, TorusElement):
            return weyl_product(self, other)
        c = _as_qcoef(other)
        d: Dict[Key, int] = {}
        for (e, r), v in self.terms.items():
            for s, w in c.terms.items():
                k = (e, r + s)
                d[k] = d.get(k, 0) + v * w
        return self._new({k: v for k, v in d.items() if v})

    def __rmul__(self, other) -> "TorusElement":
        # scalars are central
        return self.__mul__(other)

    def __pow__(self, k: int) -> "TorusElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.torus.one()
        for _ in range(k):
            out = out * self
        return out

    def qshift(self, r: Rational) -> "TorusElement":
        r = frac(r)
        return self._new({(e, s + r): v for (e, s), v in self.terms.items()})

    # -- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def exponents(self) -> list:
        return sorted({e for e, _ in self.terms})

    def coefficient(self, exp: ExponentVector) -> QCoefficient:
        return QCoefficient({r: v for (e, r), v in self.terms.items() if e == exp})

    def grouped(self) -> Dict[ExponentVector, QCoefficient]:
        g: Dict[ExponentVector, Dict[Fraction, int]] = {}
        for (e, r), v in self.terms.items():
            g.setdefault(e, {})[r] = v
        return {e: QCoefficient(g[e]) for e in sorted(g)}

    def is_monomial(self) -> bool:
        return len({e for e, _ in self.terms}) == 1

    def leading_exponent(self) -> ExponentVector:
        if not self.is_monomial():
            raise ValueError("not a monomial")
        return next(iter(self.terms))[0]

    def is_scalar(self) -> bool:
        return all(not e for e, _ in self.terms)

    def inverse(self) -> "TorusElement":
        """Inverse of c q^r Z_e when c = +-1."""
        if len(self.terms) != 1:
            raise ValueError("only single-term monomials are invertible here")
        (e, r), v = next(iter(self.terms.items()))
        if v not in (1, -1):
            raise ValueError("coefficient not a unit")
        return self._new({(-e, -r): v})

    def max_abs_degree(self) -> Fraction:
        return max((e.degree() for e, _ in self.terms), default=Fraction(0))

    def truncate(self, max_degree: Rational) -> "TorusElement":
        """Keep only terms of total Z-degree <= max_degree."""
        m = frac(max_degree)
        return self._new({k: v for k, v in self.terms.items() if k[0].degree() <= m})

    def at_q1(self) -> Dict[ExponentVector, int]:
        """Commutative q = 1 image as {exponent: integer}."""
        d: Dict[ExponentVector, int] = {}
        for (e, _), v in self.terms.items():
            d[e] = d.get(e, 0) + v
        return {e: v for e, v in sorted(d.items()) if v}

    def at_all_ones(self) -> int:
        """Value at q = 1 and every Z = 1."""
        return sum(self.terms.values())

    def map_exponents(self, fn, torus: Torus | None = None) -> "TorusElement":
        """Apply a linear map to exponent vectors (no q reordering)."""
        d: Dict[Key, int] = {}
        for (e, r), v in self.terms.items():
            k = (fn(e), r)
            d[k] = d.get(k, 0) + v
        return TorusElement(torus or self.torus, d)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.torus.scalar(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.torus.compatible(other.torus) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def to_json(self) -> list:
        return [{"exp": e.to_json(), "coef": c.to_json()} for e, c in self.grouped().items()]

    @classmethod
    def from_json(cls, torus: Torus, data: list) -> "TorusElement":
        out: Dict[Key, int] = {}
        for term in data:
            e = ExponentVector.from_json(term["exp"])
            for t in term["coef"]:
                out[(e, frac(t["qexp"]))] = int(t["c"])
        return TorusElement(torus, out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.grouped().items():
            parts.append(f"({c})*Z[{e}]")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# operations


def weyl_product(a: TorusElement, b: TorusElement) -> TorusElement:
    """Product obeying Z_x Z_y = q^<x,y> Z_{x+y}."""
    a._check(b)
    form = a.torus.form
    d: Dict[Key, int] = {}
    pair_cache: Dict[Tuple[ExponentVector, ExponentVector], Tuple[ExponentVector, Fraction]] = {}
    for (ea, ra), va in a.terms.items():
        for (eb, rb), vb in b.terms.items():
            pk = (ea, eb)
            hit = pair_cache.get(pk)
            if hit is None:
                hit = (ea + eb, form.pair(ea, eb))
                pair_cache[pk] = hit
            k = (hit[0], ra + rb + hit[1])
            d[k] = d.get(k, 0) + va * vb
    return a._new({k: v for k, v in d.items() if v})


def weyl_normal_form(torus: Torus, gens: Sequence[ExponentVector]) -> TorusElement:
    """:Z_{e1} ... Z_{ek}: = q^{-sum_{j<k}<e_j,e_k>} Z_{e1}...Z_{ek} = Z_{sum e_j}."""
    total = ExponentVector()
    for g in gens:
        total = total + g
    return torus.monomial(total)


def ordered_product(torus: Torus, gens: Sequence[ExponentVector]) -> TorusElement:
    """The plain ordered product Z_{e1} Z_{e2} ... Z_{ek}."""
    out = torus.one()
    for g in gens:
        out = out * torus.monomial(g)
    return out


def commutation_exponent(torus_or_form, a: ExponentVector, b: ExponentVector) -> Fraction:
    """The r with Z_a Z_b = q^r Z_b Z_a, i.e. 2<a,b>."""
    form = torus_or_form.form if isinstance(torus_or_form, Torus) else torus_or_form
    return 2 * form.pair(a, b)


def weyl_order(x: TorusElement, y: TorusElement) -> TorusElement:
    """:x y: for two q-commuting elements whose leading terms fix the exponent."""
    p = x * y
    rev = y * x
    # x y = q^c y x  =>  :x y: = q^{-c/2} x y
    c = _qcommute_exponent(p, rev)
    return p.qshift(-c / 2)


def _qcommute_exponent(xy: TorusElement, yx: TorusElement) -> Fraction:
    if xy.is_zero():
        return Fraction(0)
    (e, r), v = min(xy.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    cands = [s for (f, s), w in yx.terms.items() if f == e and w == v]
    for s in sorted(cands):
        c = r - s
        if xy == yx.qshift(c):
            return c
    raise ValueError("elements do not q-commute")


def q_commutator_exponent(x: TorusElement, y: TorusElement) -> Fraction:
    """The c with x y = q^c y x, raising if x and y do not q-commute."""
    return _qcommute_exponent(x * y, y * x)


def casimir_kernel(form: SkewForm, subset: Iterable[str] | None = None) -> list:
    """Integer basis (content 1) of vectors on subset orthogonal to all of subset."""
    import sympy

    faces = [f for f in form.faces if subset is None or f in set(subset)]
    if not faces:
        return []
    m = sympy.Matrix([[form.pair_faces(a, b) for b in faces] for a in faces])
    basis = m.nullspace()
    out = []
    # reduce the basis to echelon form for a deterministic answer
    if basis:
        red, _ = sympy.Matrix.hstack(*basis).T.rref()
        basis = [red.row(i).T for i in range(red.rows) if any(red.row(i))]
    for v in basis:
        den = sympy.ilcm(*[sympy.fraction(sympy.nsimplify(x))[1] for x in v])
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = sympy.igcd(g, x)
        ints = [x // int(g) for x in ints]
        out.append(ExponentVector({f: x for f, x in zip(faces, ints) if x}))
    return out


def direct_sum(tori: Sequence[Torus], prefixes: Sequence[str], name: str = "") -> Torus:
    """Torus on disjoint copies of the faces; copies commute with each other."""
    faces = []
    pairs = {}
    for t, p in zip(tori, prefixes):
        faces.extend(p + f for f in t.faces)
        for (a, b), v in t.form.arrows().items():
            pairs[(p + a, p + b)] = v
    return Torus(SkewForm(faces, pairs), name=name)


def embed(x: TorusElement, target: Torus, prefix: str) -> TorusElement:
    """Carry an element into a direct sum via the face prefix."""
    return x.map_exponents(
        lambda e: ExponentVector._raw(tuple((prefix + f, v) for f, v in e.items)), target
    )


def iter_terms(x: TorusElement) -> Iterator[Tuple[ExponentVector, Fraction, int]]:
    for (e, r), v in sorted(x.terms.items()):
        yield e, r, v


# ---------------------------------------------------------------------------
# matrices over the torus


class QuantumMatrix:
    """Rectangular array of TorusElements over one torus.

    Products keep the left factor on the left: (AB)_ik = sum_j A_ij * B_jk.
    Transposition is a formal permutation of entries.
    """

    def __init__(self, torus: Torus, rows: Sequence[Sequence[TorusElement]]):
        self.torus = torus
        self.rows: List[List[TorusElement]] = [list(r) for r in rows]
        for r in self.rows:
            for x in r:
                if not torus.compatible(x.torus):
                    raise TorusMismatch("matrix entry from a different torus")

    @classmethod
    def zeros(cls, torus: Torus, m: int, n: int | None = None) -> "QuantumMatrix":
        n = m if n is None else n
        return cls(torus, [[torus.zero() for _ in range(n)] for _ in range(m)])

    @classmethod
    def identity(cls, torus: Torus, n: int) -> "QuantumMatrix":
        return cls(torus, [[torus.one() if i == j else torus.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def scalar_matrix(cls, torus: Torus, entries: Sequence[Sequence]) -> "QuantumMatrix":
        """Matrix with q-coefficient (or int) entries."""
        return cls(torus, [[torus.scalar(c) for c in row] for row in entries])

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij: Tuple[int, int]) -> TorusElement:
        return self.rows[ij[0]][ij[1]]

    def __matmul__(self, other: "QuantumMatrix") -> "QuantumMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        out = []
        for i in range(m):
            row = []
            for j in range(n):
                acc = self.torus.zero()
                for t in range(k):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return QuantumMatrix(self.torus, out)

    def __add__(self, other: "QuantumMatrix") -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "QuantumMatrix") -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[-a for a in r] for r in self.rows])

    def scale(self, c) -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[a * c for a in r] for r in self.rows])

    def right_scale(self, x: TorusElement) -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[a * x for a in r] for r in self.rows])

    def left_scale(self, x: TorusElement) -> "QuantumMatrix":
        return QuantumMatrix(self.torus, [[x * a for a in r] for r in self.rows])

    def T(self) -> "QuantumMatrix":
        m, n = self.shape
        return QuantumMatrix(self.torus, [[self.rows[i][j] for i in range(m)] for j in range(n)])

    def map(self, fn, torus: Torus | None = None) -> "QuantumMatrix":
        return QuantumMatrix(torus or self.torus, [[fn(a) for a in r] for r in self.rows])

    def _triangular_side(self) -> str | None:
        m, n = self.shape
        if all(self.rows[i][j].is_zero() for i in range(m) for j in range(i + 1, n)):
            return "lower"
        if all(self.rows[i][j].is_zero() for i in range(m) for j in range(i)):
            return "upper"
        return None

    def inverse(self) -> "QuantumMatrix":
        """Inverse of a (possibly row-reversed) triangular matrix with unit-monomial pivots."""
        m, n = self.shape
        if m != n:
            raise ValueError("inverse of a non-square matrix")
        side = self._triangular_side()
        if side is None:
            # anti-triangular: reverse rows, invert, then reverse columns
            rev = QuantumMatrix(self.torus, self.rows[::-1])
            if rev._triangular_side() is None:
                raise ValueError("matrix is not (anti-)triangular")
            inv = rev.inverse()
            return QuantumMatrix(self.torus, [r[::-1] for r in inv.rows])
        order = range(n) if side == "lower" else range(n - 1, -1, -1)
        X = [[self.torus.zero() for _ in range(n)] for _ in range(n)]
        done: List[int] = []
        for i in order:
            piv = self.rows[i][i].inverse()
            for j in range(n):
                acc = self.torus.one() if i == j else self.torus.zero()
                for k in done:
                    a = self.rows[i][k]
                    if a.terms and X[k][j].terms:
                        acc = acc - a * X[k][j]
                X[i][j] = piv * acc if acc.terms else acc
            done.append(i)
        return QuantumMatrix(self.torus, X)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def first_nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if not a.is_zero():
                    return i, j, a
        return None

    def at_all_ones(self) -> List[List[int]]:
        return [[a.at_all_ones() for a in r] for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, QuantumMatrix) and self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def to_json(self) -> dict:
        return {
            "form": self.torus.form.to_json(),
            "rows": [[a.to_json() for a in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict, torus: Torus | None = None) -> "QuantumMatrix":
        torus = torus or Torus(SkewForm.from_json(data["form"]))
        return cls(torus, [[TorusElement.from_json(torus, a) for a in r] for r in data["rows"]])

    def __repr__(self) -> str:
        return "QuantumMatrix(\n" + "\n".join("  " + repr(r) for r in self.rows) + "\n)"
