"""Planar directed networks with quantum face weights.

A network lives in a disk.  Internal vertices are black or white, boundary
vertices are sources or sinks numbered counterclockwise.  Every edge records
the faces on its left and right, which is all that is needed for path
windings and the plabic skew form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .qtorus import (
    ExponentVector,
    QCoefficient,
    QuantumMatrix,
    SkewForm,
    Torus,
    TorusElement,
    frac,
)


class NetworkError(ValueError):
    pass


class UnsupportedNetwork(NetworkError):
    """Raised for internal vertices of degree other than three."""


class MoveInapplicable(NetworkError):
    pass


@dataclass
class Vertex:
    id: str
    kind: str  # black | white | source | sink
    boundary_pos: Optional[int] = None


@dataclass
class Edge:
    id: str
    tail: str
    head: str
    left_face: str
    right_face: str


@dataclass
class TruncationPolicy:
    """Keep path contributions of total Z-degree at most max_degree (None = all)."""

    max_degree: Optional[int] = None


UNLIMITED = TruncationPolicy(None)


@dataclass
class Path:
    edges: Tuple[str, ...]
    crossings: int
    winding: Dict[str, int]

    def degree(self) -> int:
        return sum(self.winding.values())


@dataclass
class Network:
    vertices: Dict[str, Vertex]
    edges: Dict[str, Edge]
    faces: List[str]
    rotation: Dict[str, List[str]]
    positions: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    weights: Dict[str, TorusElement] = field(default_factory=dict)
    base_torus: Optional[Torus] = None

    # -- basic structure
    def out_edges(self, v: str) -> List[str]:
        return sorted(e for e in self.rotation.get(v, []) if self.edges[e].tail == v)

    def in_edges(self, v: str) -> List[str]:
        return sorted(e for e in self.rotation.get(v, []) if self.edges[e].head == v)

    def boundary(self) -> List[Vertex]:
        bs = [v for v in self.vertices.values() if v.kind in ("source", "sink")]
        return sorted(bs, key=lambda v: v.boundary_pos)

    def sources(self) -> List[str]:
        return [v.id for v in self.boundary() if v.kind == "source"]

    def sinks(self) -> List[str]:
        return [v.id for v in self.boundary() if v.kind == "sink"]

    def internal(self) -> List[Vertex]:
        return [v for v in self.vertices.values() if v.kind in ("black", "white")]

    def by_pos(self, pos: int) -> str:
        for v in self.vertices.values():
            if v.boundary_pos == pos:
                return v.id
        raise KeyError(pos)

    def resolve_boundary(self, label) -> str:
        """Accept a vertex id or a 1-based boundary position."""
        if isinstance(label, str) and label in self.vertices:
            return label
        return self.by_pos(int(label))

    def validate(self) -> None:
        for v in self.vertices.values():
            ins, outs = self.in_edges(v.id), self.out_edges(v.id)
            if v.kind == "source" and (ins or len(outs) != 1):
                raise NetworkError(f"source {v.id} must have one outgoing edge")
            if v.kind == "sink" and (outs or len(ins) != 1):
                raise NetworkError(f"sink {v.id} must have one incoming edge")
            if v.kind == "black" and len(outs) != 1:
                raise NetworkError(f"black vertex {v.id} needs exactly one outgoing edge")
            if v.kind == "white" and len(ins) != 1:
                raise NetworkError(f"white vertex {v.id} needs exactly one incoming edge")
        for e in self.edges.values():
            for f in (e.left_face, e.right_face):
                if f not in self.faces:
                    raise NetworkError(f"edge {e.id} refers to unknown face {f}")
        # counting the boundary arcs as edges, V - E + F = number of connected pieces
        arcs = len(self.boundary())
        if len(self.vertices) - len(self.edges) - arcs + len(self.faces) != self._components():
            raise NetworkError("Euler characteristic check failed")

    def _components(self) -> int:
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.tail, e.head) for e in self.edges.values())
        bd = [b.id for b in self.boundary()]
        g.add_edges_from(zip(bd, bd[1:]))
        return nx.number_connected_components(g)

    # -- weights
    def torus(self) -> Torus:
        if self.base_torus is None:
            self.base_torus = Torus(skew_form_from_plabic(self), name="plabic")
        return self.base_torus

    def copy(self) -> "Network":
        return Network(
            {k: Vertex(v.id, v.kind, v.boundary_pos) for k, v in self.vertices.items()},
            {k: Edge(e.id, e.tail, e.head, e.left_face, e.right_face) for k, e in self.edges.items()},
            list(self.faces),
            {k: list(v) for k, v in self.rotation.items()},
            dict(self.positions),
            dict(self.weights),
            self.torus(),
        )

    def other_end(self, e: str, v: str) -> str:
        edge = self.edges[e]
        return edge.head if edge.tail == v else edge.tail

    def weight(self, face: str) -> TorusElement:
        w = self.weights.get(face)
        if w is not None:
            return w
        return self.torus().gen(face)

    def arc_face(self, b: str) -> str:
        """Face following boundary vertex b in counterclockwise order."""
        (e,) = self.rotation[b]
        edge = self.edges[e]
        return edge.right_face if edge.tail == b else edge.left_face

    # -- serialization
    def to_json(self) -> dict:
        data = {
            "vertices": [
                {"id": v.id, "kind": v.kind, **({"boundary_pos": v.boundary_pos} if v.boundary_pos else {})}
                for v in sorted(self.vertices.values(), key=lambda v: v.id)
            ],
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "left_face": e.left_face, "right_face": e.right_face}
                for e in sorted(self.edges.values(), key=lambda e: e.id)
            ],
            "faces": list(self.faces),
            "rotation": {v: list(es) for v, es in sorted(self.rotation.items())},
        }
        if self.positions:
            data["positions"] = {v: list(p) for v, p in sorted(self.positions.items())}
        if self.weights:
            data["base_form"] = self.torus().form.to_json()
            data["weights"] = {f: w.to_json() for f, w in sorted(self.weights.items())}
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Network":
        vs = {v["id"]: Vertex(v["id"], v["kind"], v.get("boundary_pos")) for v in data["vertices"]}
        es = {e["id"]: Edge(e["id"], e["tail"], e["head"], e["left_face"], e["right_face"]) for e in data["edges"]}
        net = cls(vs, es, list(data["faces"]), {k: list(v) for k, v in data["rotation"].items()})
        net.positions = {k: tuple(v) for k, v in data.get("positions", {}).items()}
        if "weights" in data:
            net.base_torus = Torus(SkewForm.from_json(data["base_form"]))
            net.weights = {f: TorusElement.from_json(net.base_torus, w) for f, w in data["weights"].items()}
        net.validate()
        return net

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# construction from a drawing


def _angle(p, q) -> float:
    return math.atan2(q[1] - p[1], q[0] - p[0])


def from_geometry(
    positions: Mapping[str, Tuple[float, float]],
    kinds: Mapping[str, str],
    edges: Sequence[Tuple[str, str]],
    outline: Sequence[Tuple[float, float]],
    face_labels: Mapping[str, Tuple[float, float]],
    edge_ids: Sequence[str] | None = None,
) -> Network:
    """Build a network from a straight-line drawing inside a polygonal disk.

    outline is the counterclockwise boundary polygon; boundary vertices must
    lie on it.  Each face is named by the label whose point it contains.
    """
    from shapely.geometry import Point, Polygon

    outline = [tuple(map(float, p)) for p in outline]
    nco = len(outline)

    def outline_param(p) -> float:
        best = None
        acc = 0.0
        for i in range(nco):
            a, b = outline[i], outline[(i + 1) % nco]
            seg = math.dist(a, b)
            ax, ay = b[0] - a[0], b[1] - a[1]
            t = ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / (seg * seg)
            if -1e-9 <= t <= 1 + 1e-9:
                proj = (a[0] + t * ax, a[1] + t * ay)
                if math.dist(proj, p) < 1e-7:
                    val = acc + t * seg
                    if best is None:
                        best = val
            acc += seg
        if best is None:
            raise NetworkError(f"boundary vertex at {p} is not on the outline")
        return best

    bverts = [v for v, k in kinds.items() if k in ("source", "sink")]
    params = {v: outline_param(positions[v]) for v in bverts}
    perimeter = sum(math.dist(outline[i], outline[(i + 1) % nco]) for i in range(nco))
    # counterclockwise numbering starts from the smallest outline parameter
    order = sorted(bverts, key=lambda v: params[v])

    # polyline along the outline between consecutive boundary vertices
    corner_params = []
    acc = 0.0
    for i in range(nco):
        corner_params.append((acc, outline[i]))
        acc += math.dist(outline[i], outline[(i + 1) % nco])

    def arc_points(a: str, b: str) -> List[Tuple[float, float]]:
        s, t = params[a], params[b]
        if t <= s:
            t += perimeter
        pts = []
        for c, p in corner_params + [(c + perimeter, p) for c, p in corner_params]:
            if s + 1e-9 < c < t - 1e-9:
                pts.append(p)
        return pts

    # half-edges: (tail, head, key) with a polyline of interior points
    halfs: Dict[Tuple[str, str, str], List[Tuple[float, float]]] = {}
    eids = list(edge_ids) if edge_ids else [f"e{i}" for i in range(len(edges))]
    for eid, (a, b) in zip(eids, edges):
        halfs[(a, b, eid)] = []
        halfs[(b, a, eid + "~")] = []
    nb = len(order)
    for i, a in enumerate(order):
        b = order[(i + 1) % nb]
        pts = arc_points(a, b)
        halfs[(a, b, f"arc{i}")] = pts
        halfs[(b, a, f"arc{i}~")] = list(reversed(pts))

    at: Dict[str, List[Tuple[float, Tuple[str, str, str]]]] = {}
    for h, pts in halfs.items():
        a, b, _ = h
        target = pts[0] if pts else positions[b]
        at.setdefault(a, []).append((_angle(positions[a], target), h))
    for v in at:
        at[v].sort()

    def twin(h):
        a, b, k = h
        return (b, a, k[:-1] if k.endswith("~") else k + "~")

    def nxt(h):
        # face on the left: at the head turn to the clockwise neighbour of the twin
        t = twin(h)
        lst = at[t[0]]
        idx = [x[1] for x in lst].index(t)
        return lst[idx - 1][1]

    face_of: Dict[Tuple[str, str, str], int] = {}
    cycles: List[List[Tuple[str, str, str]]] = []
    for h in sorted(halfs):
        if h in face_of:
            continue
        cyc = []
        cur = h
        while cur not in face_of:
            face_of[cur] = len(cycles)
            cyc.append(cur)
            cur = nxt(cur)
        cycles.append(cyc)

    outer = {face_of[(a, b, k)] for (a, b, k) in halfs if k.startswith("arc") and k.endswith("~")}
    if len(outer) != 1:
        raise NetworkError("drawing is not a disk (outer face ambiguous)")
    (outer_id,) = outer

    names: Dict[int, str] = {}
    for ci, cyc in enumerate(cycles):
        if ci == outer_id:
            continue
        pts = []
        for a, b, k in cyc:
            pts.append(positions[a])
            pts.extend(halfs[(a, b, k)])
        poly = Polygon(pts)
        if not poly.is_valid:
            poly = poly.buffer(0)
        hits = [lab for lab, p in face_labels.items() if poly.contains(Point(p))]
        if len(hits) != 1:
            raise NetworkError(f"face with corners {pts} contains labels {hits}")
        names[ci] = hits[0]
    if len(set(names.values())) != len(names):
        raise NetworkError("a label was used for two faces")

    vertices = {}
    for v, k in kinds.items():
        vertices[v] = Vertex(v, k, order.index(v) + 1 if v in params else None)
    edge_objs = {}
    for eid, (a, b) in zip(eids, edges):
        edge_objs[eid] = Edge(eid, a, b, names[face_of[(a, b, eid)]], names[face_of[(b, a, eid + "~")]])
    rotation = {}
    for v, lst in at.items():
        rotation[v] = [k.rstrip("~") for _, (_, _, k) in lst if not k.startswith("arc")]
    for v in kinds:
        rotation.setdefault(v, [])
    faces = [lab for lab in face_labels if lab in names.values()]
    net = Network(vertices, edge_objs, faces, rotation, positions={v: tuple(positions[v]) for v in kinds})
    net.validate()
    return net


# ---------------------------------------------------------------------------
# skew form


def vertex_faces(net: Network, v: str) -> List[str]:
    """Faces around v in counterclockwise order: face i sits between edges i and i+1."""
    out = []
    for eid in net.rotation[v]:
        e = net.edges[eid]
        out.append(e.left_face if e.tail == v else e.right_face)
    return out


def skew_form_from_plabic(net: Network) -> SkewForm:
    """Dual-arc form: ccw arcs around black vertices, cw around white ones.

    Leaves and bivalent vertices (which only appear around the reduction
    moves) contribute nothing; degree four or more is rejected.
    """
    counts: Dict[Tuple[str, str], int] = {}
    for v in net.internal():
        deg = len(net.rotation[v.id])
        if deg > 3 or deg == 0:
            raise UnsupportedNetwork(f"vertex {v.id} has degree {deg}")
        if deg < 3:
            continue
        fs = vertex_faces(net, v.id)
        for i in range(3):
            a, b = fs[i], fs[(i + 1) % 3]
            if v.kind == "white":
                a, b = b, a
            if a != b:
                counts[(a, b)] = counts.get((a, b), 0) + 1
    pairing: Dict[Tuple[str, str], Fraction] = {}
    for (a, b), c in counts.items():
        pairing[(a, b)] = pairing.get((a, b), Fraction(0)) + Fraction(c, 2)
    return SkewForm(net.faces, pairing)


# ---------------------------------------------------------------------------
# paths


def directed_cycles(net: Network) -> List[List[str]]:
    import networkx as nx

    g = nx.MultiDiGraph()
    for e in net.edges.values():
        g.add_edge(e.tail, e.head, key=e.id)
    return [list(c) for c in nx.simple_cycles(nx.DiGraph(g))]


def _loop_winding(net: Network, edges: Sequence[str]) -> Dict[str, int]:
    """Winding profile of a closed loop of edges (0 on the boundary faces)."""
    t: Dict[str, int] = {}
    for e in edges:
        t[e] = t.get(e, 0) + 1
    return _propagate(net, t, {f: 0 for f in _boundary_faces(net)})


def _boundary_faces(net: Network) -> List[str]:
    return sorted({net.arc_face(b.id) for b in net.boundary()})


def _propagate(net: Network, traversals: Mapping[str, int], known: Dict[str, int]) -> Dict[str, int]:
    w = dict(known)
    adj: Dict[str, List[Tuple[str, int]]] = {}
    for e in net.edges.values():
        d = traversals.get(e.id, 0)
        # w(right) = w(left) + traversals
        adj.setdefault(e.left_face, []).append((e.right_face, d))
        adj.setdefault(e.right_face, []).append((e.left_face, -d))
    stack = list(w)
    while stack:
        f = stack.pop()
        for g, d in adj.get(f, []):
            val = w[f] + d
            if g in w:
                if w[g] != val:
                    raise NetworkError("inconsistent winding profile")
            else:
                w[g] = val
                stack.append(g)
    missing = [f for f in net.faces if f not in w]
    if missing:
        raise NetworkError(f"faces not reached by winding propagation: {missing}")
    return w


def check_cycles(net: Network) -> None:
    """Every directed cycle must wind positively around at least one face."""
    for cyc in directed_cycles(net):
        loop = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            es = [e.id for e in net.edges.values() if e.tail == a and e.head == b]
            loop.append(es[0])
        w = _loop_winding(net, loop)
        if sum(w.values()) <= 0:
            raise NetworkError(f"directed cycle {cyc} does not enclose a face positively")


def path_winding(net: Network, source: str, sink: str, edges: Sequence[str]) -> Dict[str, int]:
    bd = net.boundary()
    ids = [b.id for b in bd]
    i, j = ids.index(source), ids.index(sink)
    known: Dict[str, int] = {}
    k = i
    while True:
        b = ids[k]
        f = net.arc_face(b)
        val = 1 if _between_ccw(i, j, k) else 0
        if f in known and known[f] != val:
            raise NetworkError("boundary face lies on both sides of the path")
        known[f] = val
        k = (k + 1) % len(ids)
        if k == i:
            break
    t: Dict[str, int] = {}
    for e in edges:
        t[e] = t.get(e, 0) + 1
    w = _propagate(net, t, known)
    return {f: v for f, v in w.items() if v}


def _between_ccw(i: int, j: int, k: int) -> bool:
    """True when arc k (after vertex k) lies on the ccw stretch from i to j."""
    if i <= j:
        return i <= k < j
    return k >= i or k < j


def _crossings(net: Network, edges: Sequence[str]) -> int:
    """Number of loops removed by chronological loop erasure."""
    stack: List[str] = [net.edges[edges[0]].tail]
    count = 0
    for e in edges:
        h = net.edges[e].head
        if h in stack:
            while stack[-1] != h:
                stack.pop()
            count += 1
        else:
            stack.append(h)
    return count


def enumerate_paths(net: Network, source, sink, policy: TruncationPolicy = UNLIMITED) -> List[Path]:
    """All directed source->sink paths whose winding degree fits the policy."""
    source, sink = net.resolve_boundary(source), net.resolve_boundary(sink)
    if net.vertices[source].kind != "source" or net.vertices[sink].kind != "sink":
        raise NetworkError("need a source and a sink")
    cyclic = bool(directed_cycles(net))
    if cyclic and policy.max_degree is None:
        raise NetworkError("network has directed cycles; a degree bound is required")
    if cyclic:
        check_cycles(net)
    cap = None if policy.max_degree is None else policy.max_degree + 1
    found: List[Tuple[str, ...]] = []
    used: Dict[str, int] = {}

    def dfs(v: str, acc: List[str]) -> None:
        if v == sink:
            found.append(tuple(acc))
            return
        for e in net.out_edges(v):
            if cap is not None and used.get(e, 0) > cap:
                continue
            used[e] = used.get(e, 0) + 1
            acc.append(e)
            dfs(net.edges[e].head, acc)
            acc.pop()
            used[e] -= 1

    dfs(source, [])
    paths = []
    for edges in sorted(found):
        w = path_winding(net, source, sink, edges)
        p = Path(edges, _crossings(net, edges), w)
        # with general weights the winding no longer measures degree; the sum is truncated later
        if policy.max_degree is None or net.weights or p.degree() <= policy.max_degree:
            paths.append(p)
    return paths


def path_weight(net: Network, p: Path) -> TorusElement:
    """Weyl-ordered product of face weights with the path's winding multiplicities."""
    return weighted_monomial(net, p.winding)


def weighted_monomial(net: Network, mult: Mapping[str, int], form: Optional[SkewForm] = None) -> TorusElement:
    """:prod_f W_f^{m_f}: for the current face weights W_f.

    Plain generators give Z of the exponent sum.  Weights produced by moves
    are general elements; they are multiplied in face order and Weyl
    corrected with the plabic form of the network itself.
    """
    torus = net.torus()
    items = [(f, c) for f, c in sorted(mult.items(), key=lambda kv: net.faces.index(kv[0])) if c]
    if all(_plain(net, f) for f, _ in items):
        mono = ExponentVector()
        for f, c in items:
            w = net.weights.get(f)
            e = ExponentVector({f: 1}) if w is None else w.leading_exponent()
            mono = mono + e.scale(c)
        return torus.monomial(mono)
    form = form or skew_form_from_plabic(net)
    shift = Fraction(0)
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            (fa, ca), (fb, cb) = items[a], items[b]
            shift += ca * cb * form.pair_faces(fa, fb)
    out = torus.one()
    for f, c in items:
        w = net.weight(f)
        out = out * (w ** c if c > 0 else w.inverse() ** (-c))
    return out.qshift(-shift)


def _plain(net: Network, f: str) -> bool:
    w = net.weights.get(f)
    if w is None:
        return True
    if len(w.terms) != 1:
        return False
    (e, r), v = next(iter(w.terms.items()))
    return r == 0 and v == 1


def boundary_measurement(net: Network, source, sink, policy: TruncationPolicy = UNLIMITED) -> TorusElement:
    total = net.torus().zero()
    for p in enumerate_paths(net, source, sink, policy):
        w = path_weight(net, p)
        total = total + (w if p.crossings % 2 == 0 else -w)
    if policy.max_degree is not None and net.weights:
        total = total.truncate(policy.max_degree)
    return total


def measurement_matrix(net: Network, policy: TruncationPolicy = UNLIMITED) -> QuantumMatrix:
    """Rows indexed by sinks, columns by sources (ccw order)."""
    return QuantumMatrix(net.torus(), [[boundary_measurement(net, s, t, policy) for s in net.sources()]
                                       for t in net.sinks()])


def boundary_order(net: Network) -> Dict[str, Fraction]:
    out = {}
    sigma = 0
    for b in net.boundary():
        if b.kind == "source":
            out[b.id] = Fraction(sigma) + Fraction(1, 2)
            sigma += 1
        else:
            out[b.id] = Fraction(sigma)
    return out


def grassmannian_matrix(net: Network, policy: TruncationPolicy = UNLIMITED) -> QuantumMatrix:
    """(m+n) x n matrix: q-graded unit rows at sources, signed measurements at sinks."""
    torus = net.torus()
    order = boundary_order(net)
    srcs = net.sources()
    rows = []
    for b in net.boundary():
        o = order[b.id]
        row = []
        for i, s in enumerate(srcs, start=1):
            if b.kind == "source":
                row.append(torus.scalar(QCoefficient.q(-o)) if b.id == s else torus.zero())
            else:
                sign = (-1) ** ((i + int(o)) % 2) if o.denominator == 1 else None
                if sign is None:
                    raise NetworkError("sink order must be an integer")
                m = boundary_measurement(net, s, b.id, policy)
                row.append(m * QCoefficient.q(-o, sign))
        rows.append(row)
    return QuantumMatrix(torus, rows)


# ---------------------------------------------------------------------------
# transport-element algebra


def _ccw(bd: Sequence[str], *xs: str) -> bool:
    idx = [bd.index(x) for x in xs]
    k = idx.index(min(idx))
    r = idx[k:] + idx[:k]
    return r == sorted(r)


@dataclass
class RelationReport:
    counts: Dict[str, int]
    failures: List[str]

    @property
    def holds(self) -> bool:
        return not self.failures


def transport_relations(net: Network, policy: TruncationPolicy = UNLIMITED) -> RelationReport:
    """Check the quadratic algebra of transport elements on every boundary configuration.

    With the plabic form of this module (q_minus = q^{-1}) the relations read
      nested   alpha,a,b,beta ccw:  [(alpha,a),(beta,b)] = (q^{-1}-q)(alpha,b)(beta,a)
      crossing same four points:    (alpha,b),(beta,a) commute
      separate alpha,b,beta,a ccw:  (alpha,a),(beta,b) commute
      source   alpha,a,b ccw:       (alpha,a)(alpha,b) = q^{-1}(alpha,b)(alpha,a)
      sink     alpha,a,beta ccw:    (beta,a)(alpha,a) = q(alpha,a)(beta,a)
    All products are compared modulo the policy degree.
    """
    bd = [b.id for b in net.boundary()]
    D = policy.max_degree
    cut = (lambda x: x.truncate(D)) if D is not None else (lambda x: x)
    srcs, snks = net.sources(), net.sinks()
    M = {(s, t): boundary_measurement(net, s, t, policy) for s in srcs for t in snks}
    counts: Dict[str, int] = {}
    failures: List[str] = []
    qdiff = QCoefficient({-1: 1, 1: -1})

    def record(kind: str, ok: bool, label: str) -> None:
        counts[kind] = counts.get(kind, 0) + 1
        if not ok:
            failures.append(f"{kind}: {label}")

    for a, b in _pairs(snks):
        for al, be in _pairs(srcs):
            X, Y = M[al, a], M[be, b]
            tag = f"({al},{a}),({be},{b})"
            if _ccw(bd, al, a, b, be):
                record("nested", cut(X * Y - Y * X) == cut(M[al, b] * M[be, a] * qdiff), tag)
                U, V = M[al, b], M[be, a]
                record("crossing", cut(U * V) == cut(V * U), tag)
            elif _ccw(bd, al, b, be, a):
                record("separated", cut(X * Y) == cut(Y * X), tag)
    for al in srcs:
        for a, b in _pairs(snks):
            if _ccw(bd, al, a, b):
                lhs, rhs = M[al, a] * M[al, b], (M[al, b] * M[al, a]).qshift(-1)
                record("source", cut(lhs) == cut(rhs), f"{al};{a},{b}")
    for a in snks:
        for al, be in _pairs(srcs):
            if _ccw(bd, al, a, be):
                lhs, rhs = M[be, a] * M[al, a], (M[al, a] * M[be, a]).qshift(1)
                record("sink", cut(lhs) == cut(rhs), f"{a};{al},{be}")
    return RelationReport(counts, failures)


def _pairs(xs: Sequence[str]):
    return [(x, y) for x in xs for y in xs if x != y]


# ---------------------------------------------------------------------------
# elementary moves

MOVES = ("M1", "M2", "M3", "R1", "R2", "R3")


def _series_cap(policy: TruncationPolicy) -> Optional[int]:
    # room for the negative-degree weight Z_{-eps} that M1 introduces
    return None if policy.max_degree is None else policy.max_degree + 2


def _edges_of_face(net: Network, f: str) -> List[str]:
    return sorted(e.id for e in net.edges.values() if f in (e.left_face, e.right_face))


def _across(net: Network, e: str, f: str) -> str:
    edge = net.edges[e]
    return edge.right_face if edge.left_face == f else edge.left_face


def _reverse(net: Network, e: str) -> None:
    edge = net.edges[e]
    edge.tail, edge.head = edge.head, edge.tail
    edge.left_face, edge.right_face = edge.right_face, edge.left_face


def _perfect_at(net: Network, v: str) -> bool:
    k = net.vertices[v].kind
    if k == "black":
        return len(net.out_edges(v)) == 1
    if k == "white":
        return len(net.in_edges(v)) == 1
    return True


def _geometric(net: Network, base: str, step: str, cap: Optional[int]) -> TorusElement:
    """:W_base x/(1+x): with x = W_step, expanded so that it converges in degree.

    For x of positive degree this is sum_{j>=1} (-1)^{j-1} :W_base x^j:, for
    negative degree the equal series sum_{j>=0} (-1)^j :W_base x^{-j}:.
    """
    x = net.weight(step)
    if len(x.terms) != 1:
        raise MoveInapplicable(f"weight of face {step} must be a monomial")
    d = x.leading_exponent().degree()
    if d == 0:
        raise MoveInapplicable(f"weight of face {step} has degree zero")
    sign, j = (1, 1) if d > 0 else (-1, 0)
    out = net.torus().zero()
    while True:
        term = weighted_monomial(net, {base: 1, step: sign * j})
        if cap is not None:
            term = term.truncate(cap)
            if term.is_zero():
                break
        elif j > 64:
            raise MoveInapplicable("series weights need a finite truncation degree")
        k = j - 1 if sign > 0 else j
        out = out + (term if k % 2 == 0 else -term)
        j += 1
    return out


def _move_m1(net: Network, eps: str, policy: TruncationPolicy) -> Network:
    es = _edges_of_face(net, eps)
    vs = sorted({net.edges[e].tail for e in es} | {net.edges[e].head for e in es})
    if len(es) != 4 or len(vs) != 4 or any(net.vertices[v].kind not in ("black", "white") for v in vs):
        raise MoveInapplicable(f"face {eps} is not bounded by a square of internal vertices")
    if any(len(net.rotation[v]) != 3 for v in vs):
        raise MoveInapplicable("square vertices must be trivalent")
    for e in es:
        a, b = net.edges[e].tail, net.edges[e].head
        if net.vertices[a].kind == net.vertices[b].kind:
            raise MoveInapplicable("square colors must alternate")
    external = {v: next(e for e in net.rotation[v] if e not in es) for v in vs}
    entry = {v for v in vs if net.edges[external[v]].head == v}
    if len(entry) != 2:
        raise MoveInapplicable("square needs two entering and two leaving external edges")
    # Faces across the square edges.  In the drawn chirality (going ccw around
    # eps, the white entry vertex is followed by an exit) the entry-entry and
    # exit-exit neighbours take the series weights; the mirror image swaps roles.
    (white_in,) = [v for v in entry if net.vertices[v].kind == "white"]
    step = next(e for e in es if (net.edges[e].left_face == eps and net.edges[e].tail == white_in)
                or (net.edges[e].right_face == eps and net.edges[e].head == white_in))
    drawn = net.other_end(step, white_in) not in entry
    series, linear = [], []
    for e in es:
        ends = {net.edges[e].tail, net.edges[e].head}
        f = _across(net, e, eps)
        same_side = ends <= entry or not ends & entry
        (series if same_side == drawn else linear).append(f)
    if len(series) != 2 or len(linear) != 2:
        raise MoveInapplicable("entering vertices of the square are not adjacent")
    if len(set(series + linear + [eps])) != 5:
        raise MoveInapplicable("the four neighbours of the square must be distinct faces")
    cap = _series_cap(policy)
    new_w = {eps: net.weight(eps).inverse()}
    for f in linear:
        new_w[f] = net.weight(f) + weighted_monomial(net, {f: 1, eps: 1})
    for f in series:
        new_w[f] = _geometric(net, f, eps, cap)
    out = net.copy()
    for v in vs:
        out.vertices[v].kind = "white" if net.vertices[v].kind == "black" else "black"
    # the unique perfect orientation of the square edges with the external edges fixed
    for mask in range(16):
        trial = out.copy()
        for i, e in enumerate(es):
            if mask >> i & 1:
                _reverse(trial, e)
        if all(_perfect_at(trial, v) for v in vs):
            out = trial
            break
    else:  # pragma: no cover - alternating squares always admit one
        raise MoveInapplicable("no perfect orientation after the square move")
    out.weights.update(new_w)
    return out


def _move_m2(net: Network, e: str, policy: TruncationPolicy) -> Network:
    """Flip an edge between two trivalent vertices of the same color."""
    edge = net.edges[e]
    u, v = edge.tail, edge.head
    ku, kv = net.vertices[u].kind, net.vertices[v].kind
    if ku != kv or ku not in ("black", "white") or len(net.rotation[u]) != 3 or len(net.rotation[v]) != 3:
        raise MoveInapplicable(f"edge {e} does not join two trivalent vertices of one color")
    ru, rv = net.rotation[u], net.rotation[v]
    iu, iv = ru.index(e), rv.index(e)
    a, b = ru[(iu + 1) % 3], ru[(iu + 2) % 3]
    c, d = rv[(iv + 1) % 3], rv[(iv + 2) % 3]
    f_ab = vertex_faces(net, u)[(iu + 1) % 3]
    f_cd = vertex_faces(net, v)[(iv + 1) % 3]
    out = net.copy()
    # u keeps b, c; v keeps d, a
    for x, old, new in ((c, v, u), (a, u, v)):
        ex = out.edges[x]
        if ex.tail == old:
            ex.tail = new
        else:
            ex.head = new
    out.rotation[u] = [e, b, c]
    out.rotation[v] = [e, d, a]
    # orientation of the new edge: the vertex holding the unique in (white) / out (black) edge
    special = [x for x in (a, b, c, d) if (net.edges[x].head in (u, v)) == (ku == "white")]
    if len(special) != 1:
        raise MoveInapplicable("the merged vertex is not perfectly oriented")
    holder = u if special[0] in (b, c) else v
    other = v if holder == u else u
    tail, head = (holder, other) if ku == "white" else (other, holder)
    left = f_ab if tail == u else f_cd
    right = f_cd if tail == u else f_ab
    out.edges[e] = Edge(e, tail, head, left, right)
    return out


def _move_m3(net: Network, x: str, policy: TruncationPolicy) -> Network:
    """Remove a bivalent vertex."""
    if x not in net.vertices or net.vertices[x].kind not in ("black", "white") or len(net.rotation[x]) != 2:
        raise MoveInapplicable(f"{x} is not a bivalent internal vertex")
    (e_in,) = net.in_edges(x)
    (e_out,) = net.out_edges(x)
    out = net.copy()
    h = net.edges[e_out].head
    out.edges[e_in].head = h
    out.rotation[h] = [e_in if y == e_out else y for y in out.rotation[h]]
    del out.edges[e_out], out.vertices[x], out.rotation[x]
    return out


def _move_r1(net: Network, eps: str, policy: TruncationPolicy) -> Network:
    """Collapse a white-to-black bigon into a single edge."""
    es = _edges_of_face(net, eps)
    if len(es) != 2:
        raise MoveInapplicable(f"face {eps} is not a bigon")
    p, r = (net.edges[e] for e in es)
    w, b = p.tail, p.head
    if (r.tail, r.head) != (w, b) or net.vertices[w].kind != "white" or net.vertices[b].kind != "black":
        raise MoveInapplicable("bigon must consist of two edges from a white to a black vertex")
    (i,) = net.in_edges(w)
    (o,) = net.out_edges(b)
    alpha, beta = net.edges[i].left_face, net.edges[i].right_face
    cap = _series_cap(policy)
    new_w = {alpha: _geometric(net, alpha, eps, cap),
             beta: net.weight(beta) + weighted_monomial(net, {beta: 1, eps: 1})}
    out = net.copy()
    h = net.edges[o].head
    out.edges[i].head = h
    out.rotation[h] = [i if y == o else y for y in out.rotation[h]]
    for y in (p.id, r.id, o):
        del out.edges[y]
    for y in (w, b):
        del out.vertices[y], out.rotation[y]
    out.faces.remove(eps)
    out.weights.pop(eps, None)
    out.weights.update(new_w)
    return out


def _move_r2(net: Network, e: str, policy: TruncationPolicy) -> Network:
    """Remove a black leaf hanging off a white vertex; the white vertex splits into black leaves."""
    edge = net.edges[e]
    b, w = edge.tail, edge.head
    if net.vertices[b].kind != "black" or len(net.rotation[b]) != 1 or net.vertices[w].kind != "white":
        raise MoveInapplicable(f"edge {e} is not a black leaf feeding a white vertex")
    F = edge.left_face
    rw = net.rotation[w]
    others = [y for y in rw if y != e]
    k = rw.index(e)
    if len(others) != 2:
        raise MoveInapplicable("the white vertex must be trivalent")
    alpha = vertex_faces(net, w)[(k + 1) % 3]
    out = net.copy()
    new_weight = weighted_monomial(net, {F: 1, alpha: 1}) if alpha != F else net.weight(F)
    for y in others:
        leaf = f"{w}.{y}"
        out.vertices[leaf] = Vertex(leaf, "black")
        out.edges[y].tail = leaf
        out.rotation[leaf] = [y]
    del out.edges[e], out.vertices[b], out.vertices[w], out.rotation[b], out.rotation[w]
    if alpha != F:
        for ed in out.edges.values():
            if ed.left_face == alpha:
                ed.left_face = F
            if ed.right_face == alpha:
                ed.right_face = F
        out.faces.remove(alpha)
        out.weights.pop(alpha, None)
        out.weights[F] = new_weight
    return out


def _move_r3(net: Network, e: str, policy: TruncationPolicy) -> Network:
    """Delete an isolated edge from a black leaf to a white leaf."""
    edge = net.edges[e]
    b, w = edge.tail, edge.head
    if net.vertices[b].kind != "black" or net.vertices[w].kind != "white" \
            or len(net.rotation[b]) != 1 or len(net.rotation[w]) != 1:
        raise MoveInapplicable(f"edge {e} is not an isolated black-white edge")
    out = net.copy()
    del out.edges[e], out.vertices[b], out.vertices[w], out.rotation[b], out.rotation[w]
    return out


_MOVE_IMPL = {"M1": _move_m1, "M2": _move_m2, "M3": _move_m3, "R1": _move_r1, "R2": _move_r2, "R3": _move_r3}


def apply_move(net: Network, move: str, location: str, policy: TruncationPolicy = UNLIMITED) -> Network:
    """Apply an elementary move.

    location is a face for M1 and R1, an edge for M2, R2 and R3, and a
    vertex for M3.  Face weights of the result are elements of the original
    torus; series weights are truncated at the policy degree plus two.
    """
    move = move.upper()
    if move not in _MOVE_IMPL:
        raise MoveInapplicable(f"unknown move {move}")
    out = _MOVE_IMPL[move](net, location, policy)
    out.validate()
    return out


def measurements_agree(a: Network, b: Network, policy: TruncationPolicy = UNLIMITED) -> bool:
    """Every boundary measurement of a and b agrees modulo the policy degree."""
    if a.sources() != b.sources() or a.sinks() != b.sinks():
        return False
    D = policy.max_degree
    for s in a.sources():
        for t in a.sinks():
            x, y = boundary_measurement(a, s, t, policy), boundary_measurement(b, s, t, policy)
            if D is not None:
                x, y = x.truncate(D), y.truncate(D)
            if x != y:
                return False
    return True
