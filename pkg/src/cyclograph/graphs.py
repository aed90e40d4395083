"""Cayley graphs over Z[zeta_m]/A and over Z_n, with structural certificates.

Vertices are residue indices (see :class:`~cyclograph.ideals.QuotientRing`) or
integers mod n. Adjacency is a dense ``(N, k)`` array whose column ``j`` holds
``v + s_j`` for the ``j``-th connection-set element, so the graph is stored once
and every check below is a handful of numpy gathers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .core import CycInt, zeta_power
from .errors import InvalidParameterError, ResourceLimitError, UnitIdealError
from .ideals import QuotientRing

__all__ = [
    "GraphKind",
    "CayleyGraph",
    "IsoWitness",
    "ValencyReport",
    "RotationReport",
    "ArcRegularityReport",
    "build_cyclotomic_graph",
    "build_circulant",
    "bfs_distances",
    "diameter",
    "verify_valency_theorem",
    "rotation_unit",
    "check_complete_rotation",
    "check_arc_regular",
    "verify_isomorphism",
    "to_dot",
    "graph_to_json",
]

UNREACHED = -1


class GraphKind(str, Enum):
    FULL = "full-cyclotomic"
    SECOND = "second-kind"
    CIRCULANT = "circulant"

    @classmethod
    def parse(cls, value: str | GraphKind) -> GraphKind:
        if isinstance(value, GraphKind):
            return value
        aliases = {"full": cls.FULL, "second": cls.SECOND, "star": cls.SECOND}
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise InvalidParameterError(f"unknown graph kind {value!r}") from None


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    n_vertices: int
    connection_set: tuple[int, ...]
    adjacency: np.ndarray
    kind: GraphKind
    source: QuotientRing | tuple[int, tuple[int, ...]]

    @property
    def valency(self) -> int:
        return len(self.connection_set)

    @property
    def n_arcs(self) -> int:
        return self.n_vertices * self.valency

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency[v]

    def difference(self, u: np.ndarray | int, v: np.ndarray | int) -> np.ndarray:
        """Vertex index of v - u in the underlying group."""
        if isinstance(self.source, QuotientRing):
            q = self.source
            return q.add_indices(np.atleast_1d(v), q.neg_indices(np.atleast_1d(u)))
        n = self.source[0]
        return (np.atleast_1d(v) - np.atleast_1d(u)) % n

    def has_edge(self, u: int, v: int) -> bool:
        return int(self.difference(u, v)[0]) in self.connection_set

    def edges(self) -> np.ndarray:
        """Undirected edges (u, v) with u < v, lexicographically sorted."""
        u = np.repeat(np.arange(self.n_vertices), self.valency)
        v = self.adjacency.ravel()
        keep = u < v
        pairs = np.stack([u[keep], v[keep]], axis=1)
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]

    def vertex_label(self, v: int) -> str:
        if isinstance(self.source, QuotientRing):
            return ",".join(str(int(c)) for c in self.source.reps[v])
        return str(v)


def _max_vertices(limit: int | None) -> int:
    if limit is not None:
        return limit
    raw = os.environ.get("CYCLOGRAPH_MAX_VERTICES")
    return int(raw) if raw else 10**6


def _assert_connected(g: CayleyGraph) -> None:
    dist = bfs_distances(g, 0)
    if np.any(dist == UNREACHED):
        raise InvalidParameterError("connection set does not generate the group")


def connection_indices(q: QuotientRing, kind: GraphKind | str) -> tuple[int, ...]:
    kind = GraphKind.parse(kind)
    if kind is GraphKind.CIRCULANT:
        raise InvalidParameterError("circulants are built with build_circulant")
    top = q.ctx.m if kind is GraphKind.FULL else q.ctx.phi
    powers = np.array([zeta_power(q.ctx, i).coeffs for i in range(top)], dtype=np.int64)
    idx = q.indices(np.concatenate([powers, -powers]))
    s = sorted({int(i) for i in idx})
    if 0 in s:
        raise UnitIdealError("a unit lies in the ideal")
    return tuple(s)


def build_cyclotomic_graph(
    q: QuotientRing, kind: GraphKind | str = GraphKind.FULL, max_vertices: int | None = None
) -> CayleyGraph:
    kind = GraphKind.parse(kind)
    limit = _max_vertices(max_vertices)
    if q.order > limit:
        raise ResourceLimitError(f"{q.order} vertices exceeds the bound {limit}")
    s = connection_indices(q, kind)
    coords = q.coords(np.arange(q.order))
    s_coords = q.coords(np.array(s))
    adj = np.stack(
        [q.indices_of_coords(coords + s_coords[j]) for j in range(len(s))], axis=1
    ).astype(np.int64)
    adj.setflags(write=False)
    g = CayleyGraph(q.order, s, adj, kind, q)
    _assert_connected(g)
    return g


def build_circulant(n: int, s: Sequence[int], max_vertices: int | None = None) -> CayleyGraph:
    if n < 3:
        raise InvalidParameterError(f"circulants need n >= 3, got {n}")
    limit = _max_vertices(max_vertices)
    if n > limit:
        raise ResourceLimitError(f"{n} vertices exceeds the bound {limit}")
    conn = sorted({int(x) % n for x in s})
    if not conn:
        raise InvalidParameterError("empty connection set")
    if 0 in conn:
        raise InvalidParameterError("0 lies in the connection set")
    if sorted({(-x) % n for x in conn}) != conn:
        raise InvalidParameterError("connection set is not closed under negation")
    adj = (np.arange(n)[:, None] + np.array(conn)[None, :]) % n
    adj.setflags(write=False)
    return CayleyGraph(n, tuple(conn), adj, GraphKind.CIRCULANT, (n, tuple(conn)))


def bfs_distances(g: CayleyGraph, v: int, max_depth: int | None = None) -> np.ndarray:
    if not 0 <= v < g.n_vertices:
        raise InvalidParameterError(f"vertex {v} out of range")
    dist = np.full(g.n_vertices, UNREACHED, dtype=np.int64)
    dist[v] = 0
    frontier = np.array([v])
    depth = 0
    while frontier.size and (max_depth is None or depth < max_depth):
        nb = g.adjacency[frontier].ravel()
        nb = np.unique(nb[dist[nb] == UNREACHED])
        depth += 1
        dist[nb] = depth
        frontier = nb
    return dist


def diameter(g: CayleyGraph) -> int:
    # vertex-transitive, so eccentricity of 0 is the diameter
    return int(bfs_distances(g, 0).max())


# ---------------------------------------------------------------------------
# valency prediction


@dataclass(frozen=True)
class ValencyReport:
    m: int
    predicted: int | None
    actual: int
    clause: str
    d_minus: int
    d_plus: int | None
    two_in_ideal: bool
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.predicted == self.actual


def _smallest_power(q: QuotientRing, sign: int) -> int | None:
    ctx = q.ctx
    one = ctx.one()
    for d in range(1, ctx.m + 1):
        if q.ideal.contains(one + sign * zeta_power(ctx, d)):
            return d
    return None


def verify_valency_theorem(q: QuotientRing, graph: CayleyGraph | None = None) -> ValencyReport:
    """Predict val(G_m(A)) from which 1 -+ zeta^d lie in A and compare."""
    ctx, ideal = q.ctx, q.ideal
    m = ctx.m
    actual = graph.valency if graph is not None else len(connection_indices(q, GraphKind.FULL))
    two = ideal.contains(ctx.integer(2))
    d_minus = _smallest_power(q, -1)
    d_plus = _smallest_power(q, +1)
    assert d_minus is not None  # 1 - zeta^m = 0
    one = ctx.one()
    notes: list[str] = []

    if two:
        # +1 and -1 coincide mod A, so S = <zeta> and val is the order of zeta
        return ValencyReport(m, d_minus, actual, "two-in-ideal", d_minus, d_plus, True)

    none_hit = all(
        not ideal.contains(one + s * zeta_power(ctx, i)) for i in range(1, m) for s in (1, -1)
    )
    if none_hit:
        return ValencyReport(m, 2 * m, actual, "a", d_minus, d_plus, False)

    if m % 2:
        options: list[tuple[str, int]] = []
        if d_minus % 2:
            options.append(("b-case1-odd", 2 * d_minus))
        elif ideal.contains(one + zeta_power(ctx, d_minus // 2)):
            options.append(("b-case1-even", d_minus))
        if d_plus is not None and d_plus < m:
            if d_plus % 2:
                notes.append(f"smallest d with 1+zeta^d in A is odd ({d_plus})")
            options.append(("b-case2", 2 * d_plus))
        if not options:
            return ValencyReport(m, None, actual, "b-unresolved", d_minus, d_plus, False, tuple(notes))
        values = {v for _, v in options}
        if len(values) > 1:
            notes.append("case predictions disagree: " + ", ".join(f"{c}={v}" for c, v in options))
            return ValencyReport(m, None, actual, "+".join(c for c, _ in options), d_minus, d_plus, False, tuple(notes))
        clause = "+".join(c for c, _ in options)
        return ValencyReport(m, values.pop(), actual, clause, d_minus, d_plus, False, tuple(notes))

    if d_minus % 2:
        notes.append(f"smallest d with 1-zeta^d in A is odd ({d_minus})")
    return ValencyReport(m, d_minus, actual, "c", d_minus, d_plus, False, tuple(notes))


# ---------------------------------------------------------------------------
# rotation and arc-regularity


def rotation_unit(q: QuotientRing) -> CycInt:
    """Generator of H_A: -zeta for odd m, zeta for even m."""
    z = zeta_power(q.ctx, 1)
    return -z if q.ctx.m % 2 else z


@dataclass(frozen=True)
class RotationReport:
    ok: bool
    cycle_length: int
    valency: int
    bijective: bool
    additive: bool
    fixes_connection_set: bool
    single_cycle: bool


def _multiplier(q: QuotientRing) -> np.ndarray:
    return np.asarray(q.mul_indices(np.arange(q.order), rotation_unit(q)), dtype=np.int64)


def _snf_generators(q: QuotientRing) -> list[int]:
    return [s for s, d in zip(q.strides, q.snf_diag) if d > 1]


def check_complete_rotation(q: QuotientRing, g: CayleyGraph) -> RotationReport:
    if g.kind is not GraphKind.FULL:
        raise InvalidParameterError("complete rotations are checked on full cyclotomic graphs")
    perm = _multiplier(q)
    n = q.order
    bijective = len(np.unique(perm)) == n
    # additivity on a generating set of the group plus perm(0) = 0
    additive = bool(perm[0] == 0)
    everything = np.arange(n)
    for gen in _snf_generators(q):
        lhs = perm[q.add_indices(everything, gen)]
        rhs = q.add_indices(perm, int(perm[gen]))
        additive = additive and bool(np.array_equal(lhs, rhs))
    s = set(g.connection_set)
    fixes = {int(perm[x]) for x in s} == s
    start = q.index_of(q.ctx.one())
    cycle = [start]
    x = int(perm[start])
    while x != start and len(cycle) <= n:
        cycle.append(x)
        x = int(perm[x])
    single = fixes and set(cycle) == s and len(cycle) == len(s)
    ok = bijective and additive and fixes and single
    return RotationReport(ok, len(cycle), g.valency, bijective, additive, fixes, single)


@dataclass(frozen=True)
class ArcRegularityReport:
    ok: bool
    group_order: int
    n_arcs: int
    orbit_size: int
    stabilizer_size: int
    h_matches_connection_set: bool
    generators_are_automorphisms: bool
    exhaustive_automorphism_check: bool
    all_pairs_automorphisms: bool | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


def _env_arcs(limit: int | None) -> int:
    if limit is not None:
        return limit
    raw = os.environ.get("CYCLOGRAPH_MAX_ARCS")
    return int(raw) if raw else 10**5


def _preserves_adjacency(g: CayleyGraph, perm: np.ndarray) -> bool:
    return bool(
        np.array_equal(np.sort(perm[g.adjacency], axis=1), np.sort(g.adjacency[perm], axis=1))
    )


def check_arc_regular(
    q: QuotientRing,
    g: CayleyGraph,
    max_arcs: int | None = None,
    exhaustive_limit: int = 5 * 10**6,
) -> ArcRegularityReport:
    """Certify that (Z[zeta]/A) x| H_A acts regularly on the arcs of G_m(A).

    Each pair (beta, u) acts by x -> (x + beta) u. Every pair is applied to one
    base arc; the images must be distinct arcs and exhaust the arc set.
    """
    if g.kind is not GraphKind.FULL:
        raise InvalidParameterError("arc-regularity is checked on full cyclotomic graphs")
    limit = _env_arcs(max_arcs)
    if g.n_arcs > limit:
        raise ResourceLimitError(f"{g.n_arcs} arcs exceeds the bound {limit}")
    n, val = q.order, g.valency
    h = _multiplier(q)

    # powers of h as vertex permutations; H_A is their orbit of 1
    one = q.index_of(q.ctx.one())
    powers = [np.arange(n)]
    while True:
        nxt = h[powers[-1]]
        if np.array_equal(nxt, powers[0]) or len(powers) > 2 * q.ctx.m:
            break
        powers.append(nxt)
    h_set = {int(p[one]) for p in powers}
    h_ok = h_set == set(g.connection_set) and len(powers) == len(h_set)

    slot = np.full(n, -1, dtype=np.int64)
    slot[list(g.connection_set)] = np.arange(val)
    base = g.connection_set.index(one)
    everything = np.arange(n)
    shifted = g.adjacency[:, base]  # beta + 1 for every beta
    arc_ids = []
    stabilizer = 0
    for p in powers:
        tail, head = p[everything], p[shifted]
        pos = slot[g.difference(tail, head)]
        if np.any(pos < 0):
            arc_ids = None
            break
        arc_ids.append(tail * val + pos)
        stabilizer += int(np.count_nonzero(tail == 0))
    group_order = n * len(powers)
    if arc_ids is None:
        orbit = 0
    else:
        orbit = len(np.unique(np.concatenate(arc_ids)))

    gens_ok = _preserves_adjacency(g, h)
    for gen in _snf_generators(q):
        gens_ok = gens_ok and _preserves_adjacency(g, q.add_indices(everything, gen))

    exhaustive = group_order * g.n_arcs <= exhaustive_limit
    all_pairs: bool | None = None
    if exhaustive:
        all_pairs = True
        for p in powers:
            for beta in range(n):
                translated = q.add_indices(everything, beta)
                if not _preserves_adjacency(g, p[translated]):
                    all_pairs = False
                    break
            if not all_pairs:
                break
    notes = ()
    if not exhaustive:
        notes = ("automorphisms certified on generators only",)
    ok = (
        h_ok
        and group_order == g.n_arcs
        and orbit == g.n_arcs
        and stabilizer == val
        and gens_ok
        and all_pairs is not False
    )
    return ArcRegularityReport(
        ok, group_order, g.n_arcs, orbit, stabilizer, h_ok, gens_ok, exhaustive, all_pairs, notes
    )


# ---------------------------------------------------------------------------
# isomorphisms and export


@dataclass(frozen=True)
class IsoWitness:
    map: np.ndarray
    verified: bool
    edge_checks: int


def verify_isomorphism(g1: CayleyGraph, g2: CayleyGraph, mapping: Sequence[int]) -> IsoWitness:
    if g1.n_vertices != g2.n_vertices:
        raise InvalidParameterError(
            f"vertex counts differ: {g1.n_vertices} vs {g2.n_vertices}"
        )
    f = np.asarray(mapping, dtype=np.int64)
    n = g1.n_vertices
    if f.shape != (n,):
        raise InvalidParameterError(f"map must have length {n}")
    if np.any((f < 0) | (f >= n)) or len(np.unique(f)) != n:
        return IsoWitness(f, False, 0)
    if g1.valency != g2.valency:
        return IsoWitness(f, False, 0)
    # simple graphs of equal degree: equal neighbour sets in both directions
    same = np.array_equal(np.sort(f[g1.adjacency], axis=1), np.sort(g2.adjacency[f], axis=1))
    return IsoWitness(f, bool(same), n * g1.valency)


def _graph_header(g: CayleyGraph) -> dict:
    if isinstance(g.source, QuotientRing):
        q = g.source
        return {"m": q.ctx.m, "ideal_hnf": [list(r) for r in q.ideal.hnf], "n": None}
    return {"m": None, "ideal_hnf": None, "n": g.source[0]}


def graph_to_json(g: CayleyGraph, include_edges: bool = True) -> dict:
    head = _graph_header(g)
    out = {
        "schema": 1,
        "kind": g.kind.value,
        "m": head["m"],
        "ideal_hnf": head["ideal_hnf"],
        "n_vertices": g.n_vertices,
        "valency": g.valency,
        "connection_set": [g.vertex_label(s) for s in g.connection_set],
    }
    if head["n"] is not None:
        out["n"] = head["n"]
    if include_edges:
        out["edges"] = [[int(u), int(v)] for u, v in g.edges()]
    return out


def to_dot(g: CayleyGraph) -> str:
    lines = ["graph G {"]
    for v in range(g.n_vertices):
        lines.append(f'  {v} [label="{g.vertex_label(v)}"];')
    for u, v in g.edges():
        lines.append(f"  {int(u)} -- {int(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
