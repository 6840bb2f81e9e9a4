"""The SL_n triangle network and its quantum transport matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple

from .network import (
    Network,
    NetworkError,
    boundary_measurement,
    from_geometry,
    skew_form_from_plabic,
)
from .qtorus import (
    ExponentVector,
    QCoefficient,
    QuantumMatrix,
    SkewForm,
    Torus,
    TorusElement,
)

# vertical spacing of the hexagonal drawing
_DY = 0.85
_DB = 0.566


def face_id(i: int, j: int, k: int) -> str:
    return f"Z{i}{j}{k}"


def parse_face(f: str) -> Tuple[int, int, int]:
    return int(f[1]), int(f[2]), int(f[3])


def triples(n: int) -> List[Tuple[int, int, int]]:
    return [(i, j, n - i - j) for i in range(n, -1, -1) for j in range(n - i + 1)]


def is_corner(t: Tuple[int, int, int], n: int) -> bool:
    return n in t


@dataclass
class TriangleTorus:
    """Torus on the barycentric faces (i,j,k), i+j+k = n, corners included."""

    n: int
    torus: Torus

    def Z(self, i: int, j: int, k: int, power=1) -> TorusElement:
        return self.torus.gen(face_id(i, j, k), power)

    def faces(self) -> Tuple[str, ...]:
        return self.torus.faces


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2 or n > 8:
        raise ValueError("n must be an integer in 2..8")


def _yw(r: int) -> float:
    return -1.5 + _DY * r


def sln_geometry(n: int):
    """Positions, kinds, edges, outline and face labels of the triangle network."""
    pos: Dict[str, Tuple[float, float]] = {}
    kinds: Dict[str, str] = {}
    edges: List[Tuple[str, str]] = []

    def wx(r, c):
        return c + r / 2 - (n - 1) / 2

    for r in range(n):
        for c in range(n - r):
            pos[f"W{r}_{c}"] = (wx(r, c), _yw(r))
            kinds[f"W{r}_{c}"] = "white"
    for r in range(1, n):
        for c in range(n - r):
            pos[f"B{r}_{c}"] = (wx(r, c), _yw(r) - _DB)
            kinds[f"B{r}_{c}"] = "black"
    for r in range(1, n):
        for c in range(n - r):
            edges.append((f"W{r}_{c}", f"B{r}_{c}"))
            edges.append((f"W{r - 1}_{c + 1}", f"B{r}_{c}"))
            edges.append((f"B{r}_{c}", f"W{r - 1}_{c}"))
    off = 0.6
    for k in range(1, n + 1):
        w = f"W{n - k}_{k - 1}"
        x, y = pos[w]
        s = f"s{k}"
        pos[s] = (x + 0.765 * off, y + 0.45 * off)
        kinds[s] = "source"
        edges.append((s, w))
    for i in range(1, n + 1):
        w = f"W{n - i}_0"
        x, y = pos[w]
        t = f"l{i}"
        pos[t] = (x - 0.765 * off, y + 0.45 * off)
        kinds[t] = "sink"
        edges.append((w, t))
    for c in range(n):
        w = f"W0_{c}"
        x, y = pos[w]
        t = f"b{c + 1}"
        pos[t] = (x, y - off)
        kinds[t] = "sink"
        edges.append((w, t))

    # outline: the three lines through the boundary vertices
    def meet(p1, d1, p2, d2):
        det = d1[0] * (-d2[1]) + d2[0] * d1[1]
        t = ((p2[0] - p1[0]) * (-d2[1]) + d2[0] * (p2[1] - p1[1])) / det
        return (p1[0] + t * d1[0], p1[1] + t * d1[1])

    bottom = (pos["b1"], (1.0, 0.0))
    right = (pos[f"s{n}"], (pos["s1"][0] - pos[f"s{n}"][0], pos["s1"][1] - pos[f"s{n}"][1])) if n > 1 else None
    left = (pos["l1"], (pos[f"l{n}"][0] - pos["l1"][0], pos[f"l{n}"][1] - pos["l1"][1])) if n > 1 else None
    bl = meet(*bottom, *left)
    br = meet(*bottom, *right)
    top = meet(*right, *left)
    outline = [bl, br, top]

    labels = {}
    for (i, j, k) in triples(n):
        labels[face_id(i, j, k)] = ((j - i) / 2, _yw(k) - 0.2)
    return pos, kinds, edges, outline, labels


@lru_cache(maxsize=None)
def _network_cached(n: int) -> Network:
    pos, kinds, edges, outline, labels = sln_geometry(n)
    eids = [f"{a}>{b}" for a, b in edges]
    net = from_geometry(pos, kinds, edges, outline, labels, edge_ids=eids)
    # boundary numbering: sources bottom to top, left sinks top to bottom,
    # bottom sinks left to right (counterclockwise starting at source n)
    order = [f"s{k}" for k in range(n, 0, -1)] + [f"l{i}" for i in range(1, n + 1)] + [f"b{c}" for c in range(1, n + 1)]
    for p, v in enumerate(order, start=1):
        net.vertices[v].boundary_pos = p
    return net


def triangle_form(n: int) -> SkewForm:
    """Skew form of the SL_n triangle quiver.

    This is the negative of the plabic dual-graph form of the network: an arrow
    a -> b of the quiver gives <a,b> = +1 (or +1/2 on the boundary), so that
    Z_b Z_a = q^{-2} Z_a Z_b.
    """
    plab = skew_form_from_plabic(_network_cached(n))
    return SkewForm(plab.faces, {(a, b): -v for (a, b), v in plab.arrows().items()})


@lru_cache(maxsize=None)
def triangle_torus(n: int) -> TriangleTorus:
    _check_n(n)
    return TriangleTorus(n, Torus(triangle_form(n), name=f"SL{n}"))


def build_sln_network(n: int) -> Tuple[Network, TriangleTorus]:
    _check_n(n)
    net = _network_cached(n)
    tt = triangle_torus(n)
    net.base_torus = tt.torus
    return net, tt


def _sink_ids(n: int, which: str) -> List[str]:
    return [f"{which}{i}" for i in range(1, n + 1)]


@lru_cache(maxsize=None)
def raw_transport(n: int) -> Tuple[QuantumMatrix, QuantumMatrix]:
    """Non-normalized matrices: right sources to left sinks, and to bottom sinks."""
    net, tt = build_sln_network(n)
    srcs = [f"s{k}" for k in range(1, n + 1)]
    m1 = [[boundary_measurement(net, s, t) for s in srcs] for t in _sink_ids(n, "l")]
    m2 = [[boundary_measurement(net, s, t) for s in srcs] for t in _sink_ids(n, "b")]
    return QuantumMatrix(tt.torus, m1), QuantumMatrix(tt.torus, m2)


# ---------------------------------------------------------------------------
# normalization


def tau(t: Tuple[int, int, int]) -> Tuple[int, int, int]:
    """Index rotation (i,j,k) -> (j,k,i)."""
    i, j, k = t
    return (j, k, i)


def tau_exponent(e: ExponentVector, power: int = 1) -> ExponentVector:
    items = []
    for f, v in e.items:
        t = parse_face(f)
        for _ in range(power % 3):
            t = tau(t)
        items.append((face_id(*t), v))
    return ExponentVector(items)


def tau_rotate(x, power: int = 1):
    """Apply the barycentric rotation to a TorusElement or QuantumMatrix."""
    if isinstance(x, QuantumMatrix):
        return x.map(lambda a: tau_rotate(a, power))
    if isinstance(x, TorusElement):
        if not all(f.startswith("Z") and len(f) == 4 for f in x.torus.faces):
            raise ValueError("tau acts only on triangle tori")
        return x.map_exponents(lambda e: tau_exponent(e, power))
    raise TypeError("expected TorusElement or QuantumMatrix")


def d1_exponent(n: int) -> ExponentVector:
    return ExponentVector({face_id(i, j, k): Fraction(k, n) for (i, j, k) in triples(n) if k > 0})


def d2_exponent(n: int) -> ExponentVector:
    return tau_exponent(d1_exponent(n), 2)


def D1(n: int) -> TorusElement:
    return triangle_torus(n).torus.monomial(d1_exponent(n))


def D2(n: int) -> TorusElement:
    return triangle_torus(n).torus.monomial(d2_exponent(n))


def S_matrix(n: int) -> List[List[int]]:
    """Signed antidiagonal S_ij = (-1)^{i+1} delta_{i,n+1-j}."""
    return [[(-1) ** (i + 1) if j == n + 1 - i else 0 for j in range(1, n + 1)] for i in range(1, n + 1)]


def Q_matrix(n: int) -> List[List[QCoefficient]]:
    return [[QCoefficient.q(Fraction(1, 2) - i) if i == j else QCoefficient() for j in range(1, n + 1)]
            for i in range(1, n + 1)]


def _qs(n: int, torus: Torus) -> QuantumMatrix:
    """The scalar matrix Q S."""
    Q = QuantumMatrix.scalar_matrix(torus, Q_matrix(n))
    S = QuantumMatrix.scalar_matrix(torus, S_matrix(n))
    return Q @ S


@lru_cache(maxsize=None)
def normalized_transport(n: int) -> Tuple[QuantumMatrix, QuantumMatrix]:
    """M1 = Q S M1raw D1^{-1} and M2 = Q S M2raw :D1^{-1} D2^{-1}:."""
    tt = triangle_torus(n)
    t = tt.torus
    r1, r2 = raw_transport(n)
    qs = _qs(n, t)
    d1inv = t.monomial(-d1_exponent(n))
    d12inv = t.monomial(-(d1_exponent(n) + d2_exponent(n)))
    m1 = (qs @ r1).right_scale(d1inv)
    m2 = (qs @ r2).right_scale(d12inv)
    return m1, m2


# ---------------------------------------------------------------------------
# the reoriented network and M3


def reoriented_network(n: int) -> Network:
    """Reverse the n horizontal snakes so that the left sinks become sources."""
    net, tt = build_sln_network(n)
    pos, kinds, edges, outline, labels = sln_geometry(n)
    snake = set()
    new_edges: List[Tuple[str, str]] = []
    for r in range(n):
        chain = [f"s{n - r}", f"W{r}_{n - 1 - r}"]
        for c in range(n - 2 - r, -1, -1):
            chain += [f"B{r + 1}_{c}", f"W{r}_{c}"]
        chain.append(f"l{n - r}")
        for a, b in zip(chain, chain[1:]):
            snake.add((a, b))
    for a, b in edges:
        new_edges.append((b, a) if (a, b) in snake else (a, b))
    kinds = dict(kinds)
    for i in range(1, n + 1):
        kinds[f"s{i}"] = "sink"
        kinds[f"l{i}"] = "source"
    for v in list(kinds):
        if v.startswith("W") or v.startswith("B"):
            kinds[v] = None
    # recolour: a vertex with one outgoing edge is black, with one incoming white
    outs: Dict[str, int] = {}
    ins: Dict[str, int] = {}
    for a, b in new_edges:
        outs[a] = outs.get(a, 0) + 1
        ins[b] = ins.get(b, 0) + 1
    for v, k in kinds.items():
        if k is None:
            if outs.get(v, 0) == 1 and ins.get(v, 0) == 2:
                kinds[v] = "black"
            elif ins.get(v, 0) == 1 and outs.get(v, 0) == 2:
                kinds[v] = "white"
            else:
                raise NetworkError(f"reorientation broke vertex {v}")
    eids = [f"{a}>{b}" for a, b in new_edges]
    rnet = from_geometry(pos, kinds, new_edges, outline, labels, edge_ids=eids)
    order = [f"s{k}" for k in range(n, 0, -1)] + [f"l{i}" for i in range(1, n + 1)] + [f"b{c}" for c in range(1, n + 1)]
    for p, v in enumerate(order, start=1):
        rnet.vertices[v].boundary_pos = p
    rnet.base_torus = tt.torus
    return rnet


@lru_cache(maxsize=None)
def raw_m3(n: int) -> QuantumMatrix:
    """Reoriented transport, left sources to bottom sinks: [i][j] = Meas(l_{n+1-j} -> b_i)."""
    rnet = reoriented_network(n)
    tt = triangle_torus(n)
    rows = [[boundary_measurement(rnet, f"l{n + 1 - j}", f"b{i}") for j in range(1, n + 1)]
            for i in range(1, n + 1)]
    return QuantumMatrix(tt.torus, rows)


def m3_exponent(n: int) -> ExponentVector:
    """Right normalizer of the reoriented transport: D2."""
    return d2_exponent(n)


@lru_cache(maxsize=None)
def m3_transport(n: int) -> QuantumMatrix:
    """M3 = q^{-1/2n} Q S M3raw D2^{-1} Q^{-2}, the normalization for which M3 M1 = M2."""
    tt = triangle_torus(n)
    t = tt.torus
    m = (_qs(n, t) @ raw_m3(n)).right_scale(t.monomial(-m3_exponent(n)))
    g = [[QCoefficient.q(2 * j - 1 - Fraction(1, 2 * n)) if i == j else QCoefficient() for j in range(1, n + 1)]
         for i in range(1, n + 1)]
    return m @ QuantumMatrix.scalar_matrix(t, g)


# ---------------------------------------------------------------------------
# classical factorized transport


def classical_T1(n: int, values: Mapping[str, object] | None = None):
    """S [prod H] L-chain [prod H] as a sympy Matrix in the face values."""
    import sympy

    if values is None:
        values = {face_id(*t): sympy.Symbol(face_id(*t), positive=True) for t in triples(n)}

    def Z(i, j, k):
        return values[face_id(i, j, k)]

    def H(k, t):
        return sympy.diag(*[t ** (sympy.Rational(-(n - k), n) + (1 if i > k else 0)) for i in range(1, n + 1)])

    def L(k):
        m = sympy.eye(n)
        m[k, k - 1] = 1
        return m

    S = sympy.Matrix(S_matrix(n))
    left = sympy.eye(n)
    for j in range(1, n):
        left = left * H(n - j, Z(n - j, 0, j))
    # inner factors run q = p down to 1; the face of slot (p, q) is (n-1-p, p+1-q, q)
    mid = L(n - 1)
    for p in range(1, n - 1):
        for qq in range(p, 0, -1):
            mid = mid * L(n - qq - 1) * H(n - qq, Z(n - 1 - p, p + 1 - qq, qq))
        mid = mid * L(n - 1)
    right = sympy.eye(n)
    for j in range(1, n):
        right = right * H(j, Z(0, j, n - j))
    return S * left * mid * right


def classical_eval(x: TorusElement, values: Mapping[str, object]):
    """q = 1 commutative value of an element as a sympy expression."""
    import sympy

    total = sympy.Integer(0)
    for e, c in x.at_q1().items():
        term = sympy.Integer(c)
        for f, v in e.items:
            term *= values[f] ** sympy.Rational(v.numerator, v.denominator)
        total += term
    return total


def classical_matrix(m: QuantumMatrix, values: Mapping[str, object] | None = None):
    import sympy

    if values is None:
        values = {f: sympy.Symbol(f, positive=True) for f in m.torus.faces}
    return sympy.Matrix([[classical_eval(a, values) for a in r] for r in m.rows])
