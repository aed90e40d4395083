"""Weights, balls and perfect codes in cyclotomic graphs.

Graph distance is always computed by BFS. The lattice-enumeration functions
(``*_oracle*``) recompute the same quantities straight from their definitions as
minima over cosets and exist to cross-check the BFS numbers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import CycInt, from_rho, make_context, to_rho, torsion_units
from .errors import (
    InternalInconsistencyError,
    InvalidParameterError,
    ResourceLimitError,
    TheoremRangeError,
)
from .graphs import (
    UNREACHED,
    CayleyGraph,
    GraphKind,
    bfs_distances,
    build_cyclotomic_graph,
)
from .ideals import IdealLattice, QuotientRing, Residue, intermediate_ideals, principal_ideal

__all__ = [
    "CodeSet",
    "CodeVerdict",
    "IdealCodeReport",
    "CodeCandidate",
    "CodeSearchResult",
    "TheoremReport",
    "cyclotomic_graph",
    "mannheim_weights",
    "mannheim_weight_bfs",
    "mannheim_weight_oracle",
    "mannheim_oracle_table",
    "rho_taxicab",
    "rho_taxicab_scan",
    "ej_weight_bfs",
    "ej_weight_oracle",
    "ej_oracle_table",
    "ball",
    "shell_series",
    "is_perfect_t_code",
    "ideal_code_members",
    "verify_ideal_code_conditions",
    "search_perfect_ideal_codes",
    "principal_generator",
    "normalize_nonnegative",
    "associate_label",
    "gaussian_theorem_check",
    "ej_theorem_check",
    "codes_report",
]

# vectors enumerated by a single oracle call before giving up
_ORACLE_BUDGET = 5 * 10**7


# ---------------------------------------------------------------------------
# shared graph cache


@lru_cache(maxsize=32)
def _cached_graph(q: QuotientRing, kind: GraphKind) -> CayleyGraph:
    return build_cyclotomic_graph(q, kind)


@lru_cache(maxsize=32)
def _cached_dist0(q: QuotientRing, kind: GraphKind) -> np.ndarray:
    d = bfs_distances(_cached_graph(q, kind), 0)
    d.setflags(write=False)
    return d


def cyclotomic_graph(q: QuotientRing, kind: GraphKind | str = GraphKind.FULL) -> CayleyGraph:
    """Memoised :func:`build_cyclotomic_graph`."""
    return _cached_graph(q, GraphKind.parse(kind))


def _index(q: QuotientRing, r: Residue | CycInt | int) -> int:
    if isinstance(r, Residue):
        if r.ring.ideal != q.ideal:
            raise InvalidParameterError("residue belongs to another quotient ring")
        return r.index
    if isinstance(r, CycInt):
        return q.index_of(r)
    if not 0 <= int(r) < q.order:
        raise InvalidParameterError(f"residue index {r} out of range")
    return int(r)


# ---------------------------------------------------------------------------
# Mannheim weight


def mannheim_weights(q: QuotientRing) -> np.ndarray:
    """BFS distance from 0 in G*_m(A), indexed by residue."""
    return _cached_dist0(q, GraphKind.SECOND)


def mannheim_weight_bfs(q: QuotientRing, r: Residue | CycInt | int) -> int:
    return int(mannheim_weights(q)[_index(q, r)])


@lru_cache(maxsize=None)
def _l1_sphere(dim: int, w: int) -> np.ndarray:
    """All integer vectors of length ``dim`` with Manhattan weight exactly ``w``."""
    if w == 0:
        return np.zeros((1, dim), dtype=np.int64)
    rows = []
    for support in range(1, min(dim, w) + 1):
        for pos in itertools.combinations(range(dim), support):
            for cuts in itertools.combinations(range(1, w), support - 1):
                parts = np.diff((0,) + cuts + (w,))
                for signs in itertools.product((1, -1), repeat=support):
                    v = [0] * dim
                    for p, a, s in zip(pos, parts, signs):
                        v[p] = int(a) * s
                    rows.append(v)
    out = np.array(rows, dtype=np.int64)
    out.setflags(write=False)
    return out


def _shell_table(q: QuotientRing, steps: np.ndarray, max_radius: int | None) -> np.ndarray:
    """Minimum step-count per coset, growing the radius until every coset is hit."""
    dim = steps.shape[0]
    table = np.full(q.order, -1, dtype=np.int64)
    spent = 0
    w = 0
    while True:
        sphere = _l1_sphere(dim, w)
        spent += len(sphere)
        if spent > _ORACLE_BUDGET:
            raise ResourceLimitError("lattice enumeration budget exhausted")
        idx = np.asarray(q.indices(sphere @ steps), dtype=np.int64)
        fresh = table[idx] < 0
        table[idx[fresh]] = w
        if np.all(table >= 0) or (max_radius is not None and w >= max_radius):
            return table
        w += 1


def mannheim_oracle_table(q: QuotientRing, max_radius: int | None = None) -> np.ndarray:
    """min{|v| : v in r + A} for every residue r, by enumerating Manhattan spheres.

    Every vector of weight <= w is visited before any of weight w + 1, so the
    first hit on a coset is its minimum. Entries stay -1 only if ``max_radius``
    stops the sweep early.
    """
    steps = np.eye(q.ctx.phi, dtype=np.int64)
    return _shell_table(q, steps, max_radius)


def mannheim_weight_oracle(q: QuotientRing, r: Residue | CycInt | int, radius_hint: int) -> int:
    """Minimum Manhattan weight over the coset of ``r``; needs radius_hint >= answer."""
    i = _index(q, r)
    rep = np.asarray(q.reps[i], dtype=np.int64)
    for w in range(radius_hint + 1):
        cand = rep[None, :] - _l1_sphere(q.ctx.phi, w)
        if np.any(q.ideal.contains_many(cand)):
            return w
    raise InvalidParameterError(f"no coset element of weight <= {radius_hint}")


# ---------------------------------------------------------------------------
# Eisenstein-Jacobi weights


def _rho_pair(gamma: CycInt | Sequence[int]) -> tuple[int, int]:
    if isinstance(gamma, CycInt):
        if gamma.ctx.m != 3:
            raise InvalidParameterError("the rho-taxicab norm is defined for m = 3 only")
        return to_rho(gamma)
    c, d = (int(x) for x in gamma)
    return c, d


def rho_taxicab(gamma: CycInt | Sequence[int]) -> int:
    """min |x|+|y|+|z| over gamma = x + y*rho + z*rho^2.

    Writing gamma = c + d*rho, the representations are (c+z, d-z, z) for z in Z;
    the cost is convex piecewise linear in z with kinks at -c, d and 0.
    """
    c, d = _rho_pair(gamma)
    return min(abs(c + z) + abs(d - z) + abs(z) for z in (0, -c, d))


def rho_taxicab_scan(gamma: CycInt | Sequence[int]) -> int:
    c, d = _rho_pair(gamma)
    r = abs(c) + abs(d)
    return min(abs(c + z) + abs(d - z) + abs(z) for z in range(-r, r + 1))


# power-basis coordinates of 1, rho, rho^2 in Z[zeta_3] (rho = -zeta_3)
_EJ_STEPS = np.array([[1, 0], [0, -1], [-1, -1]], dtype=np.int64)


def _require_m3(q: QuotientRing) -> None:
    if q.ctx.m != 3:
        raise InvalidParameterError("Eisenstein-Jacobi weights need m = 3")


def ej_weight_bfs(q: QuotientRing, r: Residue | CycInt | int) -> int:
    _require_m3(q)
    return int(_cached_dist0(q, GraphKind.FULL)[_index(q, r)])


def ej_oracle_table(q: QuotientRing, max_radius: int | None = None) -> np.ndarray:
    """min rho-taxicab weight per coset, enumerating x + y*rho + z*rho^2 by |x|+|y|+|z|."""
    _require_m3(q)
    return _shell_table(q, _EJ_STEPS, max_radius)


def ej_weight_oracle(q: QuotientRing, r: Residue | CycInt | int, radius_hint: int) -> int:
    _require_m3(q)
    i = _index(q, r)
    rep = np.asarray(q.reps[i], dtype=np.int64)
    for w in range(radius_hint + 1):
        cand = rep[None, :] - _l1_sphere(3, w) @ _EJ_STEPS
        if np.any(q.ideal.contains_many(cand)):
            return w
    raise InvalidParameterError(f"no coset element of rho-taxicab weight <= {radius_hint}")


# ---------------------------------------------------------------------------
# balls and codes


def ball(g: CayleyGraph, v: int, t: int) -> np.ndarray:
    if t < 0:
        raise InvalidParameterError(f"radius must be >= 0, got {t}")
    dist = bfs_distances(g, v, max_depth=t)
    return np.flatnonzero(dist != UNREACHED)


def shell_series(g: CayleyGraph, t_max: int) -> list[int]:
    dist = bfs_distances(g, 0)
    diam = int(dist.max())
    if not 0 <= t_max <= diam:
        raise InvalidParameterError(f"t_max must lie in [0, {diam}], got {t_max}")
    counts = np.bincount(dist, minlength=diam + 1)
    return [int(c) for c in counts[: t_max + 1]]


@dataclass(frozen=True)
class CodeSet:
    graph: CayleyGraph
    members: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise InvalidParameterError(f"codes need t >= 1, got {self.t}")
        if not self.members:
            raise InvalidParameterError("a code needs at least one member")
        ms = tuple(sorted({int(c) for c in self.members}))
        if ms[0] < 0 or ms[-1] >= self.graph.n_vertices:
            raise InvalidParameterError("code member out of range")
        object.__setattr__(self, "members", ms)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CodeVerdict:
    is_perfect: bool
    ball_size_at_zero: int
    min_nonzero_weight: int | None
    witness: dict | None = None


def is_perfect_t_code(g: CayleyGraph, code: CodeSet | Iterable[int], t: int | None = None) -> CodeVerdict:
    """Grow all radius-t balls at once; any vertex claimed twice is an overlap."""
    if not isinstance(code, CodeSet):
        if t is None:
            raise InvalidParameterError("t is required when passing bare members")
        code = CodeSet(g, tuple(code), t)
    t = code.t
    members = np.array(code.members, dtype=np.int64)
    n = g.n_vertices
    dist0 = bfs_distances(g, 0)
    ball0 = int(np.count_nonzero((dist0 >= 0) & (dist0 <= t)))
    nonzero = members[members != 0]
    min_w = int(dist0[nonzero].min()) if nonzero.size else None

    owner = np.full(n, -1, dtype=np.int64)
    owner[members] = members
    frontier = members
    witness = None
    for _ in range(t):
        if not frontier.size:
            break
        nb = g.adjacency[frontier]
        src = np.repeat(owner[frontier], g.valency)
        nb = nb.ravel()
        prior = owner[nb]
        clash = (prior >= 0) & (prior != src)
        if np.any(clash):
            k = int(np.flatnonzero(clash)[0])
            witness = {"type": "overlap", "vertex": int(nb[k]), "centers": sorted((int(prior[k]), int(src[k])))}
            break
        new = prior < 0
        pairs = np.unique(np.stack([nb[new], src[new]], axis=1), axis=0)
        verts, counts = np.unique(pairs[:, 0], return_counts=True) if pairs.size else (np.array([], dtype=np.int64), np.array([]))
        if np.any(counts > 1):
            v = int(verts[np.flatnonzero(counts > 1)[0]])
            centers = sorted(int(c) for c in pairs[pairs[:, 0] == v][:2, 1])
            witness = {"type": "overlap", "vertex": v, "centers": centers}
            break
        owner[pairs[:, 0]] = pairs[:, 1]
        frontier = pairs[:, 0]
    if witness is None:
        missing = np.flatnonzero(owner < 0)
        if missing.size:
            witness = {"type": "uncovered", "vertex": int(missing[0])}
    return CodeVerdict(witness is None, ball0, min_w, witness)


def ideal_code_members(q: QuotientRing, d: IdealLattice) -> np.ndarray:
    """Residue indices of D/A, sorted."""
    if d.ctx.m != q.ctx.m or not d.contains_ideal(q.ideal):
        raise InvalidParameterError("D does not contain A")
    return np.flatnonzero(d.contains_many(np.asarray(q.reps, dtype=np.int64)))


@dataclass(frozen=True)
class IdealCodeReport:
    norm: int
    n_members: int
    kind: GraphKind
    t: int
    ball_size: int
    ball_condition: bool
    min_mannheim_weight: int | None
    weight_condition: bool
    verdict: CodeVerdict
    consistent: bool
    relation: str

    @property
    def conditions_hold(self) -> bool:
        return self.ball_condition and self.weight_condition


def verify_ideal_code_conditions(
    q: QuotientRing, d: IdealLattice, t: int, kind: GraphKind | str = GraphKind.SECOND
) -> IdealCodeReport:
    """Ball-size and minimum-weight conditions for D/A against the partition test.

    On G*_m(A) the two conditions are equivalent to perfection; on G_m(A) they
    are only necessary, so ``consistent`` checks that one direction.
    """
    kind = GraphKind.parse(kind)
    if t < 1:
        raise InvalidParameterError(f"codes need t >= 1, got {t}")
    members = ideal_code_members(q, d)
    g = cyclotomic_graph(q, kind)
    verdict = is_perfect_t_code(g, CodeSet(g, tuple(int(x) for x in members), t))
    weights = mannheim_weights(q)
    nz = members[members != 0]
    min_w = int(weights[nz].min()) if nz.size else None
    ball_ok = verdict.ball_size_at_zero == d.norm
    weight_ok = min_w is None or min_w >= 2 * t + 1
    cond = ball_ok and weight_ok
    if kind is GraphKind.SECOND:
        consistent, relation = cond == verdict.is_perfect, "iff"
    else:
        consistent, relation = (not verdict.is_perfect) or cond, "only-if"
    return IdealCodeReport(
        d.norm, len(members), kind, t, verdict.ball_size_at_zero, ball_ok, min_w, weight_ok,
        verdict, consistent, relation,
    )


@dataclass(frozen=True)
class CodeCandidate:
    ideal: IdealLattice
    members: tuple[int, ...]
    report: IdealCodeReport

    @property
    def is_perfect(self) -> bool:
        return self.report.verdict.is_perfect


@dataclass(frozen=True)
class CodeSearchResult:
    t: int
    kind: GraphKind
    candidates: tuple[CodeCandidate, ...]
    enumeration_complete: bool

    @property
    def perfect(self) -> list[CodeCandidate]:
        return [c for c in self.candidates if c.is_perfect]

    @property
    def consistent(self) -> bool:
        return all(c.report.consistent for c in self.candidates)


def search_perfect_ideal_codes(
    q: QuotientRing, t: int, kind: GraphKind | str = GraphKind.FULL, **bounds
) -> CodeSearchResult:
    """Test every intermediate ideal D (A <= D) as a perfect t-code D/A."""
    kind = GraphKind.parse(kind)
    family = intermediate_ideals(q, **bounds)
    out = []
    for d in family:
        rep = verify_ideal_code_conditions(q, d, t, kind)
        members = tuple(int(x) for x in ideal_code_members(q, d))
        out.append(CodeCandidate(d, members, rep))
    return CodeSearchResult(t, kind, tuple(out), family.complete)


# ---------------------------------------------------------------------------
# generators and associate classes for m = 3, 4


def _norm_form2(m: int, u: Sequence[int], v: Sequence[int]) -> int:
    """Twice the bilinear form of the field norm on the power basis (m = 3, 4)."""
    if m == 4:
        return 2 * (u[0] * v[0] + u[1] * v[1])
    # N(a0 + a1*zeta_3) = a0^2 - a0*a1 + a1^2
    return 2 * u[0] * v[0] - u[0] * v[1] - u[1] * v[0] + 2 * u[1] * v[1]


def principal_generator(d: IdealLattice) -> CycInt:
    """A generator of D for m in {3, 4}: a shortest lattice vector under the norm."""
    m = d.ctx.m
    if m not in (3, 4):
        raise InvalidParameterError("generators are computed for m = 3 and m = 4 only")
    b1, b2 = [list(c) for c in d.columns]
    q = lambda v: _norm_form2(m, v, v)  # noqa: E731
    if q(b1) > q(b2):
        b1, b2 = b2, b1
    while True:
        mu = round(Fraction(_norm_form2(m, b1, b2), q(b1)))
        b2 = [x - mu * y for x, y in zip(b2, b1)]
        if q(b2) >= q(b1):
            break
        b1, b2 = b2, b1
    gen = CycInt(d.ctx, tuple(b1))
    if gen.norm != d.norm:
        raise InternalInconsistencyError("shortest vector does not generate the ideal")
    return gen


def normalize_nonnegative(alpha: CycInt) -> tuple[CycInt, tuple[int, int]]:
    """A unit multiple u*alpha with both coordinates >= 0 (i-basis or rho-basis)."""
    m = alpha.ctx.m
    if m not in (3, 4):
        raise InvalidParameterError("normalisation is defined for m = 3 and m = 4 only")
    if not alpha:
        raise InvalidParameterError("alpha must be nonzero")
    best = None
    for u in torsion_units(alpha.ctx):
        x = u * alpha
        ab = to_rho(x) if m == 3 else x.coeffs
        if ab[0] >= 0 and ab[1] >= 0:
            key = (ab[0] == 0, -ab[0], ab[1])
            if best is None or key < best[0]:
                best = (key, x, (int(ab[0]), int(ab[1])))
    assert best is not None  # the unit sectors cover the plane
    return best[1], best[2]


def associate_label(d: IdealLattice) -> str | None:
    """Canonical 'c+di' / 'c+d*rho' name of the generator class of D, or None."""
    if d.ctx.m not in (3, 4):
        return None
    if d.norm == 1:
        return "1"
    _, (c, e) = normalize_nonnegative(principal_generator(d))
    return f"{c}+{e}i" if d.ctx.m == 4 else f"{c}+{e}rho"


# ---------------------------------------------------------------------------
# theorem reconciliations


@dataclass(frozen=True)
class TheoremReport:
    alpha: tuple[int, int]
    t: int
    targets: tuple[str, ...]
    predicted: frozenset
    observed: frozenset
    candidates: tuple[CodeCandidate, ...]
    identities: dict = field(default_factory=dict)

    @property
    def agreement(self) -> bool:
        return self.predicted == self.observed and all(self.identities.values())

    @property
    def missing(self) -> frozenset:
        return self.predicted - self.observed

    @property
    def unexpected(self) -> frozenset:
        return self.observed - self.predicted


def _theorem_check(alpha: CycInt, t: int, m: int, min_norm: int, targets: list[tuple[str, CycInt]]) -> TheoremReport:
    if alpha.ctx.m != m:
        raise InvalidParameterError(f"expected an element of Z[zeta_{m}]")
    normalized, (a, b) = normalize_nonnegative(alpha)
    if alpha.norm < min_norm:
        raise TheoremRangeError(f"N(alpha) = {alpha.norm} < {min_norm}")
    top = (a + b - 1) // 2
    if not 1 <= t <= top:
        raise TheoremRangeError(f"t = {t} outside [1, {top}] for a={a}, b={b}")
    ideal = principal_ideal(normalized)
    q = QuotientRing(ideal)
    result = search_perfect_ideal_codes(q, t, GraphKind.FULL)
    predicted = frozenset(
        principal_ideal(beta).key for _, beta in targets
        if principal_ideal(beta).contains_ideal(ideal)
    )
    observed = frozenset(c.ideal.key for c in result.candidates if c.is_perfect)
    return TheoremReport((a, b), t, tuple(name for name, _ in targets), predicted, observed, result.candidates)


def gaussian_theorem_check(alpha: CycInt, t: int) -> TheoremReport:
    """Perfect ideal t-codes of G_4(alpha) versus associates of t +- (t+1)i."""
    ctx = make_context(4)
    targets = [
        (f"{t}+{t + 1}i", ctx.element((t, t + 1))),
        (f"{t}-{t + 1}i", ctx.element((t, -(t + 1)))),
    ]
    return _theorem_check(alpha, t, 4, 5, targets)


def _ej_case2_identities(t: int) -> dict:
    rho = from_rho(0, 1)
    r4, r5 = rho**4, rho**5
    b1, b2 = from_rho(t + 1, t), from_rho(t, t + 1)
    return {
        "(2t+1)-(t+1)rho = rho^5[(t+1)+t*rho]": from_rho(2 * t + 1, -(t + 1)) == r5 * b1,
        "(2t+1)-t*rho = rho^5[t+(t+1)rho]": from_rho(2 * t + 1, -t) == r5 * b2,
        "(t+1)-(2t+1)rho = rho^4[t+(t+1)rho]": from_rho(t + 1, -(2 * t + 1)) == r4 * b2,
        "t-(2t+1)rho = rho^4[(t+1)+t*rho]": from_rho(t, -(2 * t + 1)) == r4 * b1,
    }


def ej_theorem_check(alpha: CycInt, t: int) -> TheoremReport:
    """Perfect ideal t-codes of EJ_alpha versus associates of (t+1)+t*rho and t+(t+1)rho."""
    targets = [
        (f"{t + 1}+{t}rho", from_rho(t + 1, t)),
        (f"{t}+{t + 1}rho", from_rho(t, t + 1)),
    ]
    rep = _theorem_check(alpha, t, 3, 7, targets)
    return TheoremReport(
        rep.alpha, rep.t, rep.targets, rep.predicted, rep.observed, rep.candidates,
        _ej_case2_identities(t),
    )


# ---------------------------------------------------------------------------
# JSON report


def codes_report(q: QuotientRing, t: int, kind: GraphKind | str = GraphKind.FULL, **bounds) -> dict:
    kind = GraphKind.parse(kind)
    g = cyclotomic_graph(q, kind)
    result = search_perfect_ideal_codes(q, t, kind, **bounds)
    rows = []
    for c in result.candidates:
        rows.append(
            {
                "ideal_hnf": [list(r) for r in c.ideal.hnf],
                "norm": c.ideal.norm,
                "n_members": len(c.members),
                "is_perfect": c.is_perfect,
                "ball_size": c.report.ball_size,
                "min_weight": c.report.min_mannheim_weight,
                "associate_class": associate_label(c.ideal),
                "conditions_hold": c.report.conditions_hold,
                "consistent": c.report.consistent,
            }
        )
    return {
        "schema": 1,
        "graph": {
            "m": q.ctx.m,
            "ideal_hnf": [list(r) for r in q.ideal.hnf],
            "kind": kind.value,
            "n_vertices": g.n_vertices,
            "valency": g.valency,
        },
        "t": t,
        "enumeration_complete": result.enumeration_complete,
        "candidates": rows,
        "perfect": [r for r in rows if r["is_perfect"]],
        "agreement": result.consistent,
    }
