"""Small hand-built networks used by the tests and the command line."""

from __future__ import annotations

import math
from typing import Dict, List, Sequence, Tuple

from .network import Network, from_geometry

SQUARE = [(0, 0), (3, 0), (3, 3), (0, 3)]


def five_face_network() -> Network:
    """Two sources on the right, three sinks on the left, faces alpha..eps."""
    pos = {"s1": (3, 1), "s2": (3, 2), "k3": (0, 2.5), "k4": (0, 1.5), "k5": (0, 1),
           "u": (2.5, 1), "v": (2, 2), "w": (1, 2)}
    kinds = {"s1": "source", "s2": "source", "k3": "sink", "k4": "sink", "k5": "sink",
             "u": "white", "v": "black", "w": "white"}
    edges = [("s1", "u"), ("u", "k5"), ("s2", "v"), ("u", "v"), ("v", "w"), ("w", "k4"), ("w", "k3")]
    labels = {"alpha": (2, 2.5), "beta": (2.7, 1.5), "gamma": (0.3, 2), "delta": (1.2, 1.5), "eps": (1.7, 0.6)}
    return from_geometry(pos, kinds, edges, SQUARE, labels)


def wheel_network(pattern: str = "ssksskkk") -> Network:
    """A clockwise directed cycle with one spoke per boundary vertex.

    pattern lists the boundary vertices counterclockwise: 's' for a source,
    'k' for a sink.  The hub face is 'h', the sector faces are 'f0', 'f1', ...
    """
    m = len(pattern)
    R, r = 3.0, 1.0
    outline = [(R * math.cos(2 * math.pi * (k + 0.5) / m), R * math.sin(2 * math.pi * (k + 0.5) / m))
               for k in range(m)]
    pos: Dict[str, Tuple[float, float]] = {}
    kinds: Dict[str, str] = {}
    edges: List[Tuple[str, str]] = []
    for k, ch in enumerate(pattern):
        a = 2 * math.pi * k / m
        # boundary vertex at the midpoint of outline side k-1..k
        p0, p1 = outline[k - 1], outline[k]
        b, v = f"b{k}", f"v{k}"
        pos[b] = ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2)
        pos[v] = (r * math.cos(a), r * math.sin(a))
        if ch == "s":
            kinds[b], kinds[v] = "source", "black"
            edges.append((b, v))
        else:
            kinds[b], kinds[v] = "sink", "white"
            edges.append((v, b))
    for k in range(m):
        edges.append((f"v{k}", f"v{(k - 1) % m}"))
    labels = {"h": (0.0, 0.0)}
    for k in range(m):
        a = 2 * math.pi * (k + 0.5) / m
        labels[f"f{k}"] = (2.0 * math.cos(a), 2.0 * math.sin(a))
    return from_geometry(pos, kinds, edges, outline, labels)


def square_network() -> Network:
    """The square-move pattern: paths enter on the right and leave on the left."""
    pos = {"t1": (0, 2.5), "t2": (0, 0.5), "s1": (3, 2.5), "s2": (3, 0.5),
           "x": (1, 2), "y": (2, 2), "z": (1, 1), "w": (2, 1)}
    kinds = {"t1": "sink", "t2": "sink", "s1": "source", "s2": "source",
             "x": "black", "y": "white", "z": "white", "w": "black"}
    edges = [("s1", "y"), ("y", "x"), ("x", "t1"), ("s2", "w"), ("w", "z"), ("z", "t2"),
             ("y", "w"), ("z", "x")]
    labels = {"alpha": (1.5, 2.7), "beta": (0.3, 1.5), "gamma": (2.7, 1.5), "delta": (1.5, 0.3), "eps": (1.5, 1.5)}
    return from_geometry(pos, kinds, edges, SQUARE, labels)


def double_white_network() -> Network:
    """Two adjacent white vertices (the M2 pattern)."""
    pos = {"s": (3, 1.5), "k1": (0, 2.5), "k2": (0, 0.5), "k3": (1.5, 3), "u": (2, 1.5), "v": (1, 1.5),
           "s2": (1.5, 0), "b": (1.5, 0.75)}
    kinds = {"s": "source", "k1": "sink", "k2": "sink", "k3": "sink", "u": "white", "v": "white",
             "s2": "source", "b": "black"}
    edges = [("s", "u"), ("u", "v"), ("u", "k3"), ("v", "k1"), ("v", "b"), ("s2", "b"), ("b", "k2")]
    labels = {"f1": (2.5, 2.5), "f2": (0.5, 2.5), "f3": (0.3, 1.2), "f4": (0.5, 0.2), "f5": (2.5, 0.5)}
    return from_geometry(pos, kinds, edges, SQUARE, labels)


def bigon_network() -> Network:
    """A white-to-black bigon, each arc subdivided by a bivalent vertex."""
    pos = {"s": (3, 1.5), "k": (0, 1.5), "s2": (3, 0.5), "k2": (0, 2.5),
           "w": (2, 1.5), "b": (1, 1.5), "x": (1.5, 2), "y": (1.5, 1), "c": (2.5, 1.5), "d": (0.5, 1.5)}
    kinds = {"s": "source", "k": "sink", "s2": "source", "k2": "sink",
             "w": "white", "b": "black", "x": "white", "y": "black", "c": "black", "d": "white"}
    edges = [("s", "c"), ("s2", "c"), ("c", "w"), ("w", "x"), ("w", "y"), ("x", "b"), ("y", "b"),
             ("b", "d"), ("d", "k"), ("d", "k2")]
    labels = {"top": (1.5, 2.7), "eps": (1.5, 1.5), "bot": (1.5, 0.4), "r": (2.9, 1.0), "l": (0.1, 2.0)}
    return from_geometry(pos, kinds, edges, SQUARE, labels)


def leaf_network() -> Network:
    """A black leaf feeding a white vertex, below two paths to the same sink."""
    pos = {"a1": (0, 2.5), "a2": (0, 1), "t": (3, 2.5), "u": (2.5, 1.5),
           "k1": (1, 0), "k2": (2, 0), "w": (1.5, 0.6), "b": (1.5, 0.95)}
    kinds = {"a1": "source", "a2": "source", "t": "sink", "u": "black",
             "k1": "sink", "k2": "sink", "w": "white", "b": "black"}
    edges = [("a1", "u"), ("a2", "u"), ("u", "t"), ("b", "w"), ("w", "k1"), ("w", "k2")]
    labels = {"top": (1.5, 2.8), "mid": (0.5, 1.7), "F": (0.5, 0.8), "alpha": (1.5, 0.2)}
    return from_geometry(pos, kinds, edges, SQUARE, labels)


def with_isolated_edge(net: Network, face: str) -> Network:
    """Copy of net with a free black-to-white edge floating inside face."""
    from .network import Edge, Vertex

    out = net.copy()
    out.vertices["iso_b"] = Vertex("iso_b", "black")
    out.vertices["iso_w"] = Vertex("iso_w", "white")
    out.edges["iso"] = Edge("iso", "iso_b", "iso_w", face, face)
    out.rotation["iso_b"] = ["iso"]
    out.rotation["iso_w"] = ["iso"]
    out.validate()
    return out


def move_examples() -> List[Tuple[str, str, Network]]:
    """(move, location, network) triples covering every elementary move."""
    from .network import apply_move

    sq = square_network()
    dw = double_white_network()
    bg = bigon_network()
    lf = leaf_network()
    uv = next(e.id for e in dw.edges.values() if (e.tail, e.head) == ("u", "v"))
    bw = next(e.id for e in lf.edges.values() if (e.tail, e.head) == ("b", "w"))
    bare = apply_move(apply_move(bg, "M3", "x"), "M3", "y")
    return [
        ("M1", "eps", sq),
        ("M2", uv, dw),
        ("M3", "x", bg),
        ("R1", "eps", bare),
        ("R2", bw, lf),
        ("R3", "iso", with_isolated_edge(five_face_network(), "delta")),
    ]
