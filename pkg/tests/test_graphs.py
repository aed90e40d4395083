import json

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cyclograph.core import from_rho, make_context, zeta_power
from cyclograph.errors import InvalidParameterError, ResourceLimitError
from cyclograph.graphs import (
    GraphKind,
    bfs_distances,
    build_circulant,
    build_cyclotomic_graph,
    check_arc_regular,
    check_complete_rotation,
    diameter,
    graph_to_json,
    rotation_unit,
    to_dot,
    verify_isomorphism,
    verify_valency_theorem,
)
from cyclograph.ideals import QuotientRing, ideal_from_generators, principal_ideal

nx = pytest.importorskip("networkx")


def quotient(m, *gens):
    ctx = make_context(m)
    return QuotientRing(ideal_from_generators(ctx, [ctx.element(g) for g in gens]))


EJ_91 = QuotientRing(principal_ideal(from_rho(1, 9)))
GAUSS_65 = quotient(4, (7, 4))


def small_quotient(max_order=300):
    def build(args):
        m, coeffs = args
        ctx = make_context(m)
        alpha = ctx.element(coeffs)
        assume(alpha and 3 <= alpha.norm <= max_order)
        return QuotientRing(principal_ideal(alpha))

    return st.sampled_from([3, 4, 5, 8]).flatmap(
        lambda m: st.tuples(
            st.just(m),
            st.lists(st.integers(-4, 4), min_size=make_context(m).phi, max_size=make_context(m).phi),
        )
    ).map(build)


def adjacency_oracle(q, kind):
    """Edges from coset membership alone: u ~ v iff rep(v) - rep(u) -+ zeta^i lies in A."""
    ctx = q.ctx
    top = ctx.m if kind == "full" else ctx.phi
    steps = [s * zeta_power(ctx, i) for i in range(top) for s in (1, -1)]
    reps = [ctx.element(r) for r in np.asarray(q.reps).tolist()]
    g = nx.Graph()
    g.add_nodes_from(range(q.order))
    for u in range(q.order):
        for v in range(u + 1, q.order):
            diff = reps[v] - reps[u]
            if any(q.ideal.contains(diff - s) for s in steps):
                g.add_edge(u, v)
    return g


def to_nx(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.n_vertices))
    out.add_edges_from(map(tuple, g.edges().tolist()))
    return out


@pytest.mark.parametrize("kind", ["full", "second"])
@pytest.mark.parametrize("q", [EJ_91, GAUSS_65, quotient(5, (2, 1, 0, 0)), quotient(8, (2, 1, 0, 0)), quotient(8, (1, 2, 1, 0))])
def test_adjacency_matches_coset_oracle(q, kind):
    g = build_cyclotomic_graph(q, kind)
    assert set(to_nx(g).edges()) == set(adjacency_oracle(q, kind).edges())


def test_ej_91_is_the_circulant_with_jumps_1_9_10():
    g = build_cyclotomic_graph(EJ_91, "full")
    assert g.valency == 6 and g.n_vertices == 91
    assert nx.is_isomorphic(to_nx(g), to_nx(build_circulant(91, [1, 9, 10, 81, 82, 90])))
    assert diameter(g) == 6
    assert np.bincount(bfs_distances(g, 0)).tolist() == [1, 6, 12, 18, 24, 24, 6]


def test_second_kind_ej_91():
    g = build_cyclotomic_graph(EJ_91, "star")
    assert g.kind is GraphKind.SECOND and g.valency == 4


def test_gaussian_graph_is_torus_like():
    g = build_cyclotomic_graph(GAUSS_65, "full")
    assert g.valency == 4
    # i -> 47 since 47^2 = -1 and 7 + 4*47 = 0 mod 65
    assert nx.is_isomorphic(to_nx(g), to_nx(build_circulant(65, [1, 18, 47, 64])))


@given(small_quotient())
def test_graph_invariants(q):
    for kind in ("full", "second"):
        g = build_cyclotomic_graph(q, kind)
        adj = g.adjacency
        # symmetric, loop-free, regular
        assert not np.any(adj == np.arange(g.n_vertices)[:, None])
        for u in range(min(g.n_vertices, 25)):
            for v in adj[u]:
                assert u in adj[v]
        assert np.all(bfs_distances(g, 0) >= 0)


@given(small_quotient())
def test_valency_divides_2m_and_matches_prediction(q):
    g = build_cyclotomic_graph(q, "full")
    assert (2 * q.ctx.m) % g.valency == 0
    rep = verify_valency_theorem(q, g)
    assert rep.ok, rep


def test_valency_clauses():
    # no relation 1 -+ zeta^i in A: clause a
    rep = verify_valency_theorem(EJ_91)
    assert rep.clause == "a" and rep.predicted == 6
    # 2 in A collapses +-1 for m = 3: valency 3
    two = QuotientRing(principal_ideal(make_context(3).integer(2)))
    rep = verify_valency_theorem(two)
    assert rep.two_in_ideal and rep.predicted == rep.actual == 3
    # 1 - zeta_5 in A: every zeta^i is 1, valency 2
    rep = verify_valency_theorem(quotient(5, (1, -1, 0, 0)))
    assert rep.actual == 2 and rep.ok
    # even m uses clause c
    # even m uses clause c: A = (1 - zeta_12^4) has norm 9 and avoids 2
    rep = verify_valency_theorem(quotient(12, (2, 0, -1, 0)))
    assert rep.clause == "c" and rep.d_minus == 4 and rep.actual == 4 and rep.ok



@given(small_quotient())
def test_complete_rotation_and_arc_regularity(q):
    g = build_cyclotomic_graph(q, "full")
    rot = check_complete_rotation(q, g)
    assert rot.ok and rot.cycle_length == g.valency
    arc = check_arc_regular(q, g)
    assert arc.ok and arc.group_order == q.order * g.valency == g.n_arcs


def test_rotation_unit_sign():
    assert rotation_unit(EJ_91) == -make_context(3).zeta()
    assert rotation_unit(GAUSS_65) == make_context(4).zeta()


def test_arc_regularity_rejects_corrupted_graph():
    from dataclasses import replace

    g = build_cyclotomic_graph(EJ_91, "full")
    adj = np.array(g.adjacency)
    adj[[0, 1]] = adj[[1, 0]]
    bad = replace(g, adjacency=adj)
    assert not check_arc_regular(EJ_91, bad).ok


def test_arc_bound_is_enforced():
    g = build_cyclotomic_graph(EJ_91, "full")
    with pytest.raises(ResourceLimitError):
        check_arc_regular(EJ_91, g, max_arcs=100)


def test_vertex_bound_is_enforced(monkeypatch):
    monkeypatch.setenv("CYCLOGRAPH_MAX_VERTICES", "50")
    with pytest.raises(ResourceLimitError):
        build_cyclotomic_graph(EJ_91)
    with pytest.raises(ResourceLimitError):
        build_circulant(91, [1, 90])


def test_circulant_validation():
    with pytest.raises(InvalidParameterError):
        build_circulant(10, [1])
    with pytest.raises(InvalidParameterError):
        build_circulant(10, [0, 1, 9])
    with pytest.raises(InvalidParameterError):
        build_circulant(2, [1])


def test_verify_isomorphism_detects_bad_maps():
    g = build_circulant(13, [1, 12])
    h = build_circulant(13, [5, 8])
    # x -> 5x maps jumps +-1 to +-5
    good = [(5 * x) % 13 for x in range(13)]
    assert verify_isomorphism(g, h, good).verified
    assert not verify_isomorphism(g, h, list(range(13))).verified
    assert not verify_isomorphism(g, h, [0] * 13).verified


def test_json_and_dot_are_deterministic():
    a = graph_to_json(build_cyclotomic_graph(EJ_91, "full"))
    b = graph_to_json(build_cyclotomic_graph(QuotientRing(principal_ideal(from_rho(1, 9))), "full"))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["schema"] == 1 and a["n_vertices"] == 91 and len(a["edges"]) == 91 * 3
    dot = to_dot(build_circulant(5, [1, 4]))
    assert dot.startswith("graph G {") and dot.count("--") == 5


def test_unknown_kind():
    with pytest.raises(InvalidParameterError):
        build_cyclotomic_graph(EJ_91, "triangle")
