from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from qg.network import (
    MoveInapplicable,
    TruncationPolicy,
    apply_move,
    enumerate_paths,
    grassmannian_matrix,
    measurement_matrix,
    measurements_agree,
    skew_form_from_plabic,
    transport_relations,
)
from qg.qtorus import ExponentVector
from qg.samples import bigon_network, five_face_network, move_examples, square_network, wheel_network
from qg.sln import build_sln_network, raw_transport, triangle_form

P8 = TruncationPolicy(8)


def Z(net, **exps):
    return net.torus().monomial(ExponentVector({k: Fraction(v) for k, v in exps.items()}))


# -- plabic form and measurements on the five-face network

@pytest.mark.parametrize("a,b,v", [
    ("alpha", "beta", Fraction(-1, 2)),
    ("alpha", "delta", 1),
    ("alpha", "gamma", Fraction(-1, 2)),
    ("beta", "eps", Fraction(1, 2)),
    ("beta", "delta", -1),
    ("gamma", "delta", Fraction(-1, 2)),
    ("delta", "eps", Fraction(-1, 2)),
])
def test_five_face_form(a, b, v):
    form = skew_form_from_plabic(five_face_network())
    assert form.pair_faces(a, b) == v
    assert form.pair_faces(b, a) == -v


def test_five_face_measurements():
    net = five_face_network()
    m = measurement_matrix(net)
    expected = [
        [Z(net, alpha=1, beta=1), Z(net, alpha=1)],
        [Z(net, alpha=1, beta=1, gamma=1), Z(net, alpha=1, gamma=1)],
        [Z(net, alpha=1, beta=1, gamma=1, delta=1), net.torus().zero()],
    ]
    assert m.rows == expected


def test_five_face_grassmannian():
    net = five_face_network()
    g = grassmannian_matrix(net)
    t = net.torus()
    half = Fraction(1, 2)
    expected = [
        [t.one().qshift(-half), t.zero()],
        [t.zero(), t.one().qshift(-3 * half)],
        [-Z(net, alpha=1, beta=1).qshift(-2), Z(net, alpha=1).qshift(-2)],
        [-Z(net, alpha=1, beta=1, gamma=1).qshift(-2), Z(net, alpha=1, gamma=1).qshift(-2)],
        [-Z(net, alpha=1, beta=1, gamma=1, delta=1).qshift(-2), t.zero()],
    ]
    assert g.rows == expected


# -- path enumeration

def test_bigon_has_two_paths():
    net = bigon_network()
    assert len(enumerate_paths(net, "s", "k")) == 2


@pytest.mark.parametrize("w", [0, 1, 2, 4])
def test_wheel_winding_paths(w):
    net = wheel_network()
    paths = enumerate_paths(net, "b1", "b2", TruncationPolicy(w + 2))
    assert len(paths) == w + 1
    assert sorted(p.winding.get("h", 0) for p in paths) == list(range(1, w + 2))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sln_path_counts_are_binomial(n):
    r1, r2 = raw_transport(n)
    counts = r1.at_all_ones()
    assert counts == [[comb(i, j) for j in range(n)] for i in range(n)]


def test_blue_path_at_n6():
    r1, _ = raw_transport(6)
    blue = ExponentVector({f: 1 for f in ["Z024", "Z015", "Z114", "Z006", "Z105", "Z204", "Z303"]})
    assert any(e == blue for e, _ in r1.rows[3][2].terms)


def test_sln_form_is_negated_plabic_form():
    for n in (2, 3, 4):
        net, _ = build_sln_network(n)
        plab = skew_form_from_plabic(net)
        tri = triangle_form(n)
        m1, m2 = plab.matrix(), tri.matrix()
        assert all(a == -b for r1, r2 in zip(m1, m2) for a, b in zip(r1, r2))


def test_sln3_interior_face_is_hexagonal():
    tri = triangle_form(3)
    vals = sorted(tri.pair_faces("Z111", f) for f in tri.faces if f != "Z111")
    assert vals.count(1) == 3 and vals.count(-1) == 3


# -- moves

@pytest.mark.parametrize("move,loc,net", move_examples(), ids=[m for m, _, _ in move_examples()])
def test_move_preserves_measurements(move, loc, net):
    out = apply_move(net, move, loc, P8)
    assert measurements_agree(net, out, P8)


def test_square_move_weights():
    sq = square_network()
    out = apply_move(sq, "M1", "eps", P8)
    assert out.weight("eps") == Z(sq, eps=-1)
    assert out.weight("alpha") == Z(sq, alpha=1) + Z(sq, alpha=1, eps=1)
    # series neighbour: Z_beta x/(1+x) with x = Z_eps
    assert out.weight("beta").truncate(4) == (Z(sq, beta=1, eps=1) - Z(sq, beta=1, eps=2) + Z(sq, beta=1, eps=3))


def test_square_move_involution():
    sq = square_network()
    twice = apply_move(apply_move(sq, "M1", "eps", P8), "M1", "eps", P8)
    for f in sq.faces:
        assert twice.weight(f).truncate(6) == sq.weight(f)
    assert {v: x.kind for v, x in twice.vertices.items()} == {v: x.kind for v, x in sq.vertices.items()}


def test_square_move_needs_new_weights():
    sq = square_network()
    out = apply_move(sq, "M1", "eps", P8)
    out.weights = {}
    assert not measurements_agree(sq, out, P8)


def test_square_move_rejects_non_square():
    with pytest.raises(MoveInapplicable):
        apply_move(five_face_network(), "M1", "delta", P8)


# -- quadratic transport algebra on a network with a cycle

def test_wheel_relations():
    rep = transport_relations(wheel_network(), P8)
    assert rep.holds, rep.failures[:3]
    assert set(rep.counts) == {"nested", "crossing", "separated", "source", "sink"}


def test_five_face_relations():
    rep = transport_relations(five_face_network())
    assert rep.holds
