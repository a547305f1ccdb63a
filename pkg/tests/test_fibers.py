import itertools

import pytest

from abpoly.errors import InvariantViolation
from abpoly.fibers import (
    PointConfiguration,
    achievable_targets,
    all_quadratic_moves,
    enumerate_fiber,
    fiber_connected_under_quadratic_moves,
    is_generated_by,
    quad_generation_check,
    reflections,
)
from abpoly.graphs import Graph, stable_config
from abpoly.vectors import BinomialMove, Monomial, reflect
from conftest import PRISM_EDGES, PRISM_WITNESS_TARGET, random_down_closed
from oracles import bfs_components, brute_fiber, quad_adjacent

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def square_config():
    return PointConfiguration.of(SQUARE)


def test_configuration_rejects_duplicates():
    with pytest.raises(InvariantViolation):
        PointConfiguration.of([(0, 0), (0, 0)])


def test_square_fiber_r2():
    f = enumerate_fiber(square_config(), 2, (1, 1))
    assert len(f.elements) == 2
    assert {m.factors for m in f.elements} == {
        ((0, 0), (1, 1)),
        ((0, 1), (1, 0)),
    }
    connected, parts = fiber_connected_under_quadratic_moves(f)
    assert connected and len(parts) == 1


def test_degree_one_fibers_are_singletons():
    cfg = square_config()
    for p in SQUARE:
        f = enumerate_fiber(cfg, 1, p)
        assert len(f.elements) == 1
    assert enumerate_fiber(cfg, 2, (5, 5)).elements == ()


def test_fiber_matches_brute_force(rng):
    for _ in range(20):
        n = rng.choice((2, 3))
        pts = sorted(random_down_closed(rng, n))
        cfg = PointConfiguration.of(pts)
        r = rng.choice((2, 3))
        targets = sorted(achievable_targets(cfg, r)[r])
        b = targets[rng.randrange(len(targets))]
        got = {m.factors for m in enumerate_fiber(cfg, r, b).elements}
        expected = set(brute_fiber(pts, r, b))
        assert got == expected


def test_fiber_enumeration_order_independent(rng):
    pts = sorted(random_down_closed(rng, 2, max_coord=2))
    shuffled = list(pts)
    rng.shuffle(shuffled)
    a = enumerate_fiber(PointConfiguration.of(pts), 3, (2, 1))
    b = enumerate_fiber(PointConfiguration.of(shuffled), 3, (2, 1))
    assert a.elements == b.elements


def test_degree_two_fibers_always_connected(rng):
    for _ in range(10):
        pts = sorted(random_down_closed(rng, rng.choice((2, 3))))
        cfg = PointConfiguration.of(pts)
        for b in sorted(achievable_targets(cfg, 2)[2]):
            f = enumerate_fiber(cfg, 2, b)
            if f.elements:
                connected, _ = fiber_connected_under_quadratic_moves(f)
                assert connected


def test_components_match_literal_bfs(rng):
    """The cofactor-merging partition equals components of the explicit move graph."""
    for _ in range(25):
        n = rng.choice((2, 3))
        pts = sorted(random_down_closed(rng, n))
        cfg = PointConfiguration.of(pts)
        r = rng.choice((3, 4))
        targets = sorted(achievable_targets(cfg, r)[r])
        b = targets[rng.randrange(len(targets))]
        f = enumerate_fiber(cfg, r, b)
        if len(f.elements) > 60:
            continue
        _, parts = fiber_connected_under_quadratic_moves(f)
        elems = [m.factors for m in f.elements]
        literal = bfs_components(elems, quad_adjacent)
        got = sorted(sorted(elems.index(m.factors) for m in comp) for comp in parts)
        assert got == sorted(literal)


def test_fiber_reflection_symmetry(rng):
    """Reflecting every factor maps fibers to fibers and preserves adjacency."""
    cfg = reflections(square_config())
    e = (-1, 1)
    f = enumerate_fiber(cfg, 3, (1, 1))
    g = enumerate_fiber(cfg, 3, reflect((1, 1), e))
    image = {
        Monomial.of([reflect(p, e) for p in m.factors]).factors for m in f.elements
    }
    assert image == {m.factors for m in g.elements}
    for a, b in itertools.combinations(f.elements, 2):
        ra = tuple(sorted(reflect(p, e) for p in a.factors))
        rb = tuple(sorted(reflect(p, e) for p in b.factors))
        assert quad_adjacent(a.factors, b.factors) == quad_adjacent(ra, rb)


def test_simplex_certified_trivially():
    cfg = PointConfiguration.of([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    cert = quad_generation_check(cfg, 4)
    assert cert.certified
    assert cert.verdict == "certified-quadratic-up-to-4"


def test_square_certified():
    cert = quad_generation_check(square_config(), 4)
    assert cert.certified
    assert quad_generation_check(reflections(square_config()), 4).certified


def test_quad_check_rejects_small_bound():
    with pytest.raises(InvariantViolation):
        quad_generation_check(square_config(), 2)


def test_prism_counterexample_pinned():
    """Frozen first hit of the seeded search: the prism's matching triangles."""
    g = Graph.of(6, PRISM_EDGES)
    cfg = stable_config(g)
    cert = quad_generation_check(cfg, 4)
    assert not cert.certified
    assert cert.verdict == "counterexample"
    assert cert.witness.degree == 3
    assert cert.witness.target == PRISM_WITNESS_TARGET
    reps = {comp[0].factors for comp in cert.witness.components}
    assert reps == {
        ((0, 0, 1, 0, 1, 0), (0, 1, 0, 1, 0, 0), (1, 0, 0, 0, 0, 1)),
        ((0, 0, 1, 1, 0, 0), (0, 1, 0, 0, 0, 1), (1, 0, 0, 0, 1, 0)),
    }
    # the witness is re-checkable: that fiber really is disconnected
    f = enumerate_fiber(cfg, 3, cert.witness.target)
    connected, parts = fiber_connected_under_quadratic_moves(f)
    assert not connected and len(parts) == 2
    # and the reflected configuration fails at the same degree
    refl_cert = quad_generation_check(reflections(cfg), 4)
    assert not refl_cert.certified
    assert refl_cert.witness.degree == 3


def test_certificate_json_shape():
    cert = quad_generation_check(square_config(), 3)
    d = cert.to_json_dict()
    assert d == {
        "checked_up_to": 3,
        "verdict": "certified-quadratic-up-to-3",
        "witness": None,
    }
    g = Graph.of(6, PRISM_EDGES)
    bad = quad_generation_check(stable_config(g), 3)
    d = bad.to_json_dict()
    assert d["verdict"] == "counterexample"
    assert d["witness"]["degree"] == 3
    assert len(d["witness"]["components"]) == 2


def test_all_quadratic_moves_square():
    moves = all_quadratic_moves(square_config())
    # one balanced pair class: {(0,0),(1,1)} vs {(1,0),(0,1)}
    assert len(moves) == 1
    assert moves[0] == BinomialMove(
        Monomial.of([(0, 0), (1, 1)]), Monomial.of([(1, 0), (0, 1)])
    )


def test_is_generated_by_matches_quad_check(rng):
    """Cross-validation of the two independent connectivity routes."""
    for _ in range(10):
        n = rng.choice((2, 3))
        pts = sorted(random_down_closed(rng, n))
        cfg = PointConfiguration.of(pts)
        lhs = quad_generation_check(cfg, 4).certified
        rhs = is_generated_by(cfg, all_quadratic_moves(cfg), 4)
        assert lhs == rhs


def test_is_generated_by_empty_moves():
    cfg = square_config()
    assert not is_generated_by(cfg, [], 4)


def test_is_generated_by_rejects_foreign_moves():
    cfg = square_config()
    foreign = BinomialMove(
        Monomial.of([(2, 2), (0, 0)]), Monomial.of([(1, 1), (1, 1)])
    )
    with pytest.raises(InvariantViolation):
        is_generated_by(cfg, [foreign], 3)


def test_parallel_sweep_matches_serial():
    cfg = reflections(square_config())
    serial = quad_generation_check(cfg, 4, jobs=1)
    parallel = quad_generation_check(cfg, 4, jobs=2)
    assert serial.to_json_dict() == parallel.to_json_dict()
