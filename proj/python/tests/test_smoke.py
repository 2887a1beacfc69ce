import json
import math

import pytest

import omtree

INF = math.inf


def tree_a():
    return omtree.Tree.from_rows([("r", None, INF), ("v", "r", 3), ("u1", "v", 0), ("u2", "v", 1)])


def tree_b():
    return omtree.Tree.from_rows([("r", None, INF), ("v", "r", 3), ("w1", "v", 1), ("w2", "v", 0)])


def test_tree_round_trip():
    a = tree_a()
    assert a.leaves == ["u1", "u2"]
    assert len(a) == 4
    again = omtree.Tree.from_json(a.to_json())
    assert again.rows() == a.rows()
    doc = json.loads(a.to_json())
    assert doc["format"] == "omtree"
    assert doc["vertices"][0]["height"] == "inf"


def test_curve_and_frechet():
    assert tree_a().curve() == [INF, 0, 3, 1, INF]
    assert omtree.frechet(tree_a().curve(), tree_b().curve()) == 1.0
    d = omtree.discrete_frechet(tree_a().curve(), tree_b().curve(), 0.01)
    assert 1.0 <= d <= 1.02


def test_distance_and_orders():
    a, b = tree_a(), tree_b()
    assert omtree.distance(a, b) == 1.0
    assert omtree.distance(a, a.shifted(2.5)) == 2.5
    best, _, _ = omtree.min_over_orders(a, b)
    assert best == 0.0


def test_certificate_verifies_and_round_trips():
    a, b = tree_a(), tree_b()
    cert = omtree.certificate(a, b)
    assert cert.delta == 1.0
    for kind in ("interleaving", "goodmap", "labelling"):
        assert cert.verify(kind) is None
    assert cert.verify("interleaving", 0.5) is not None
    again = omtree.Certificate.from_json(cert.to_json())
    assert again.delta == 1.0
    assert again.verify("labelling") is None
    with pytest.raises(ValueError):
        cert.verify("nonsense")


def test_decimal_heights():
    a = tree_a().shifted(0.1)
    b = tree_b().shifted(1 / 3)
    cert = omtree.certificate(a, b)
    assert cert.verify("interleaving") is None
    assert cert.verify("labelling") is None


def test_errors():
    with pytest.raises(omtree.ParseError):
        omtree.Tree.from_json("{not json")
    with pytest.raises(ValueError):
        omtree.Tree.from_rows([("r", None, INF), ("u", "r", 0), ("v", "u", 1)])


def test_partition_reduction():
    t, tp = omtree.partition_reduction([1, 1, 2, 2], 2)
    assert len(t.leaves) >= 2
    assert len(tp.leaves) >= 2
    assert omtree.distance(t, tp) >= 0
