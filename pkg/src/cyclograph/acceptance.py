"""The eight end-to-end acceptance checks, runnable from tests and the CLI."""

from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Callable, Iterable, Iterator

import numpy as np

from .codes import (
    ej_theorem_check,
    gaussian_theorem_check,
    mannheim_oracle_table,
    normalize_nonnegative,
    search_perfect_ideal_codes,
)
from .core import CycInt, from_rho, make_context
from .frobenius import bridge_map, classify_2p, frobenius_subgroups_oracle, frobenius_to_cyclotomic
from .errors import InternalInconsistencyError
from .graphs import (
    CayleyGraph,
    GraphKind,
    bfs_distances,
    build_cyclotomic_graph,
    check_arc_regular,
    check_complete_rotation,
    verify_valency_theorem,
)
from .ideals import IdealLattice, QuotientRing, ideal_from_generators, principal_ideal

__all__ = [
    "CriterionResult",
    "CRITERIA",
    "FAULTS",
    "ideal_suite",
    "run_criterion",
    "run_acceptance",
    "inject_fault",
]

DEFAULT_SEED = 20240611
FAULTS = ("adjacency", "classifier")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0
    time_limit: float | None = None

    @property
    def within_time(self) -> bool:
        return self.time_limit is None or self.elapsed < self.time_limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        limit = f" (limit {self.time_limit:g} s)" if self.time_limit is not None else ""
        verdict = "PASS" if self.ok else "FAIL"
        return f"[{verdict}] criterion {self.number}: {self.name} in {self.elapsed:.2f} s{limit}"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.ok,
            "elapsed": round(self.elapsed, 3),
            "time_limit": self.time_limit,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# fault injection: patch library internals so the ordinary checks must notice


def _corrupt_graph(build: Callable[..., CayleyGraph]) -> Callable[..., CayleyGraph]:
    def wrapped(*args, **kwargs) -> CayleyGraph:
        g = build(*args, **kwargs)
        adj = g.adjacency.copy()
        adj[0, 0] = (adj[0, 0] + 1) % g.n_vertices
        adj.setflags(write=False)
        return replace(g, adjacency=adj)

    return wrapped


def _drop_candidate(classify: Callable[..., list]) -> Callable[..., list]:
    def wrapped(*args, **kwargs) -> list:
        return classify(*args, **kwargs)[1:]

    return wrapped


_ACTIVE_FAULT: list[str] = []


@contextmanager
def inject_fault(fault: str | None) -> Iterator[None]:
    """Temporarily corrupt graph construction or the classifier (no-op for None)."""
    if fault is None or _ACTIVE_FAULT:
        yield
        return
    if fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    from . import codes as codes_mod, frobenius as frob_mod, graphs as graphs_mod

    this = sys.modules[__name__]
    if fault == "adjacency":
        name, factory = "build_cyclotomic_graph", _corrupt_graph
        targets = [graphs_mod, codes_mod, frob_mod, this]
    else:
        name, factory = "classify_2p", _drop_candidate
        targets = [frob_mod, this]
    original = getattr(targets[0], name)
    patched = factory(original)
    saved = [(mod, getattr(mod, name)) for mod in targets]
    codes_mod._cached_graph.cache_clear()
    codes_mod._cached_dist0.cache_clear()
    _ACTIVE_FAULT.append(fault)
    try:
        for mod in targets:
            setattr(mod, name, patched)
        yield
    finally:
        for mod, fn in saved:
            setattr(mod, name, fn)
        codes_mod._cached_graph.cache_clear()
        codes_mod._cached_dist0.cache_clear()
        _ACTIVE_FAULT.pop()


def _graph(q: QuotientRing, kind: GraphKind | str) -> CayleyGraph:
    # looked up at call time so an injected fault reaches it
    return build_cyclotomic_graph(q, kind)


# ---------------------------------------------------------------------------
# random ideal suite


def _random_element(rng: np.random.Generator, m: int, bound: int) -> CycInt:
    ctx = make_context(m)
    return ctx.element(int(x) for x in rng.integers(-bound, bound + 1, size=ctx.phi))


def ideal_suite(seed: int = DEFAULT_SEED, per_m: int = 10, max_norm: int = 2000,
                ms: Iterable[int] = (3, 4, 5, 8)) -> list[IdealLattice]:
    """Seeded nonzero proper ideals with N(A) <= max_norm, per_m + 2 for each m.

    Each m contributes (2), (1 - zeta), a mix of principal ideals and
    two-generator ideals.
    """
    rng = np.random.default_rng(seed)
    out: list[IdealLattice] = []
    for m in ms:
        ctx = make_context(m)
        chosen: dict[tuple, IdealLattice] = {}
        for fixed in (ctx.integer(2), ctx.one() - ctx.zeta()):
            d = principal_ideal(fixed)
            if 2 <= d.norm <= max_norm:
                chosen[d.key] = d
        target = len(chosen) + per_m
        tries = 0
        while len(chosen) < target:
            tries += 1
            if tries > 100000:
                raise RuntimeError(f"could not sample enough ideals for m={m}")
            bound = 2 if ctx.phi > 2 else 30
            gens = [_random_element(rng, m, bound)]
            if rng.random() < 0.3:
                gens.append(_random_element(rng, m, bound))
            if not any(gens[0].coeffs):
                continue
            d = ideal_from_generators(ctx, gens)
            if 2 <= d.norm <= max_norm:
                chosen.setdefault(d.key, d)
        out.extend(chosen.values())
    return out


# ---------------------------------------------------------------------------
# criteria


def criterion_1(seed: int = DEFAULT_SEED, fault: str | None = None) -> CriterionResult:
    from .cli import parse_generator  # same literal parsing as the command line

    alpha = parse_generator(3, "1,9", rho=True)
    q = QuotientRing(principal_ideal(alpha))
    res = search_perfect_ideal_codes(q, 1, "full")
    perfect = res.perfect
    details: dict = {"n_perfect": len(perfect)}
    passed = len(perfect) == 1
    if passed:
        code = perfect[0]
        try:
            bridge = frobenius_to_cyclotomic(3, 91, 10)
            verified = bridge.iso.verified
        except InternalInconsistencyError:
            bridge, verified = None, False
        same_ideal = bridge is not None and bridge.ideal == q.ideal
        image = sorted(int(x) for x in bridge_map(q, 91, (-10) % 91)[list(code.members)])
        details.update(
            norm=code.ideal.norm,
            members=len(code.members),
            bridge_verified=verified,
            bridge_ideal_matches=same_ideal,
            image=image,
        )
        passed = (
            code.ideal.norm == 7
            and len(code.members) == 13
            and verified
            and same_ideal
            and image == list(range(0, 91, 7))
        )
    return CriterionResult(1, "single perfect 1-code of EJ_(1+9rho) and its image in Z_91", passed, details)


def _weight_sweep_one(key_and_ideal: tuple[IdealLattice, str | None]) -> tuple[tuple, int, int]:
    ideal, fault = key_and_ideal
    with inject_fault(fault):
        return _weight_sweep_inner(ideal)


def _weight_sweep_inner(ideal: IdealLattice) -> tuple[tuple, int, int]:
    q = QuotientRing(ideal)
    g = _graph(q, GraphKind.SECOND)
    bfs = bfs_distances(g, 0)
    oracle = mannheim_oracle_table(q)
    return (ideal.key, q.order, int(np.count_nonzero(bfs != oracle)))


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def criterion_2(seed: int = DEFAULT_SEED, fault: str | None = None, jobs: int = 1) -> CriterionResult:
    suite = ideal_suite(seed)
    rows = _map(_weight_sweep_one, [(d, fault) for d in suite], jobs)
    mismatches = sum(r[2] for r in rows)
    per_m: dict[int, int] = {}
    for d in suite:
        per_m[d.ctx.m] = per_m.get(d.ctx.m, 0) + 1
    details = {
        "ideals_per_m": per_m,
        "vertices_checked": sum(r[1] for r in rows),
        "mismatches": mismatches,
    }
    passed = mismatches == 0 and all(v >= 10 for v in per_m.values())
    return CriterionResult(2, "BFS distance in G*_m(A) equals the Mannheim weight", passed, details)


def _random_alpha(rng: np.random.Generator, m: int, max_norm: int, min_norm: int) -> CycInt:
    while True:
        a, b = (int(x) for x in rng.integers(0, 75, size=2))
        alpha = from_rho(a, b) if m == 3 else make_context(4).element((a, b))
        if min_norm <= alpha.norm <= max_norm and a + b >= 3:
            return alpha


def criterion_3(seed: int = DEFAULT_SEED, fault: str | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed + 3)
    failures = []
    checked = {"gaussian": 0, "eisenstein": 0}
    for m, family, per_step, min_norm in ((4, "gaussian", 4, 5), (3, "eisenstein", 6, 7)):
        for _ in range(10):
            alpha, (a, b) = normalize_nonnegative(_random_alpha(rng, m, 5000, min_norm))
            q = QuotientRing(principal_ideal(alpha))
            g = _graph(q, GraphKind.FULL)
            counts = np.bincount(bfs_distances(g, 0))
            top = (a + b - 1) // 2 if m == 4 else (a + b + 1) // 2 - 1
            ts = range(1, top + 1)
            bad = [t for t in ts if t >= len(counts) or counts[t] != per_step * t]
            checked[family] += 1
            if bad:
                failures.append({"m": m, "alpha": [a, b], "t": bad})
    details = {"checked": checked, "failures": failures}
    return CriterionResult(3, "shell sizes 4t (Gaussian) and 6t (Eisenstein-Jacobi)", not failures, details)


def _theorem_suite(m: int, t: int, count: int, rng: np.random.Generator, extra: list[CycInt]) -> list[tuple[CycInt, int]]:
    if m == 4:
        ctx = make_context(4)
        betas = [ctx.element((t, t + 1)), ctx.element((t, -(t + 1)))]
    else:
        betas = [from_rho(t + 1, t), from_rho(t, t + 1)]
    out: list[tuple[CycInt, int]] = [(x, t) for x in extra]
    seen = {principal_ideal(x).key for x in extra}
    while len(out) < count + len(extra):
        beta = betas[int(rng.integers(0, 2))]
        gamma = (
            from_rho(*(int(v) for v in rng.integers(-3, 4, size=2)))
            if m == 3
            else make_context(4).element(int(v) for v in rng.integers(-3, 4, size=2))
        )
        if not gamma or gamma.norm < 2:
            continue
        alpha, (a, b) = normalize_nonnegative(beta * gamma)
        if (a + b - 1) // 2 < t:
            continue
        key = principal_ideal(alpha).key
        if key in seen:
            continue
        seen.add(key)
        out.append((alpha, t))
    return out


def _reconcile(m: int, cases: list[tuple[CycInt, int]]) -> dict:
    check = gaussian_theorem_check if m == 4 else ej_theorem_check
    rows, discrepancies = [], 0
    for alpha, t in cases:
        rep = check(alpha, t)
        observed = set(rep.observed)
        agree = rep.predicted == observed and all(rep.identities.values())
        nonempty = bool(rep.predicted)
        discrepancies += (not agree) + (not nonempty)
        rows.append({"alpha": list(rep.alpha), "t": t, "predicted": len(rep.predicted),
                     "observed": len(observed), "agree": agree})
    return {"cases": rows, "discrepancies": discrepancies}


def criterion_4(seed: int = DEFAULT_SEED, fault: str | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed + 4)
    cases = _theorem_suite(4, 1, 5, rng, []) + _theorem_suite(4, 2, 3, rng, [])
    details = _reconcile(4, cases)
    return CriterionResult(4, "Gaussian perfect codes match associates of t+-(t+1)i",
                           details["discrepancies"] == 0, details)


def criterion_5(seed: int = DEFAULT_SEED, fault: str | None = None) -> CriterionResult:
    rng = np.random.default_rng(seed + 5)
    # (2 + rho) * 2 = 4 + 2rho: rho-coordinates share the factor 2
    non_coprime = from_rho(2, 1) * 2
    cases = _theorem_suite(3, 1, 5, rng, [non_coprime, from_rho(1, 9)]) + _theorem_suite(3, 2, 3, rng, [])
    details = _reconcile(3, cases)
    a, b = normalize_nonnegative(non_coprime)[1]
    details["non_coprime_alpha"] = {"alpha": [a, b], "gcd": gcd(a, b)}
    passed = details["discrepancies"] == 0 and gcd(a, b) > 1
    return CriterionResult(5, "Eisenstein-Jacobi perfect codes match associates of (t+1)+t*rho, t+(t+1)rho",
                           passed, details)


def _classify_n(args: tuple[int, int, str | None]) -> tuple[int, int, bool, list[int]]:
    n, p, fault = args
    with inject_fault(fault):
        return _classify_n_inner(n, p)


def _classify_n_inner(n: int, p: int) -> tuple[int, int, bool, list[int]]:
    cands = classify_2p(n, p)
    found = {c.S for c in cands}
    oracle = frobenius_subgroups_oracle(n, p)
    return n, p, found == oracle, sorted(c.a for c in cands)


def criterion_6(seed: int = DEFAULT_SEED, fault: str | None = None, jobs: int = 1) -> CriterionResult:
    work = [(n, 3, fault) for n in range(3, 501)] + [(n, 5, fault) for n in range(3, 351)]
    rows = _map(_classify_n, work, jobs)
    disagreements = [(n, p) for n, p, ok, _ in rows if not ok]
    gens = {(n, p): a for n, p, _, a in rows}
    must = {"p=3,n=91,a=10": 10 in gens[(91, 3)], "p=3,n=7,a=3": 3 in gens[(7, 3)]}
    details = {
        "disagreements": disagreements,
        "required_candidates": must,
        "candidates": sum(len(a) for a in gens.values()),
    }
    return CriterionResult(6, "2p-valent Frobenius classifier equals the definitional oracle",
                           not disagreements and all(must.values()), details)


def _bridge_n(args: tuple[int, int, str | None]) -> list[tuple[int, int, int, bool]]:
    n, p, fault = args
    out = []
    with inject_fault(fault):
        for c in classify_2p(n, p):
            try:
                br = frobenius_to_cyclotomic(p, n, c.a)
                ok = br.iso.verified and br.graph.valency == 2 * p
            except InternalInconsistencyError:
                ok = False
            out.append((n, p, c.a, ok))
    return out


def criterion_7(seed: int = DEFAULT_SEED, fault: str | None = None, jobs: int = 1) -> CriterionResult:
    work = [(n, p, fault) for p in (3, 5) for n in range(3, 201)]
    rows = [r for chunk in _map(_bridge_n, work, jobs) for r in chunk]
    failed = [(n, p, a) for n, p, a, ok in rows if not ok]
    details = {"bridges": len(rows), "failed": failed}
    return CriterionResult(7, "every classified circulant with n <= 200 bridges to G_p(A_(p,n,-a))",
                           bool(rows) and not failed, details)


def _battery_one(args: tuple[IdealLattice, str | None]) -> dict:
    ideal, fault = args
    with inject_fault(fault):
        return _battery_inner(ideal)


def _battery_inner(ideal: IdealLattice) -> dict:
    q = QuotientRing(ideal)
    g = _graph(q, GraphKind.FULL)
    val = verify_valency_theorem(q, g)
    rot = check_complete_rotation(q, g)
    arc = check_arc_regular(q, g) if g.n_arcs <= 10**5 else None
    return {
        "m": q.ctx.m,
        "norm": q.order,
        "valency": g.valency,
        "clause": val.clause,
        "valency_ok": val.ok and (2 * q.ctx.m) % g.valency == 0,
        "rotation_ok": rot.ok,
        "arc_ok": None if arc is None else arc.ok,
    }


def criterion_8(seed: int = DEFAULT_SEED, fault: str | None = None, jobs: int = 1) -> CriterionResult:
    suite = ideal_suite(seed)
    rows = _map(_battery_one, [(d, fault) for d in suite], jobs)
    failures = [r for r in rows if not (r["valency_ok"] and r["rotation_ok"] and r["arc_ok"] is not False)]
    clauses: dict[str, int] = {}
    for r in rows:
        clauses[r["clause"]] = clauses.get(r["clause"], 0) + 1
    details = {
        "graphs": len(rows),
        "arc_checked": sum(r["arc_ok"] is not None for r in rows),
        "clauses": dict(sorted(clauses.items())),
        "failures": failures,
    }
    return CriterionResult(8, "valency rules, complete rotation and arc-regularity", not failures, details)


CRITERIA: dict[int, tuple[Callable[..., CriterionResult], float | None, bool]] = {
    # number: (function, time limit in seconds, accepts jobs)
    1: (criterion_1, 1.0, False),
    2: (criterion_2, 60.0, True),
    3: (criterion_3, 30.0, False),
    4: (criterion_4, None, False),
    5: (criterion_5, None, False),
    6: (criterion_6, 120.0, True),
    7: (criterion_7, None, True),
    8: (criterion_8, None, True),
}


def run_criterion(number: int, seed: int = DEFAULT_SEED, fault: str | None = None, jobs: int = 1) -> CriterionResult:
    if number not in CRITERIA:
        raise ValueError(f"no criterion {number}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    fn, limit, parallel = CRITERIA[number]
    kwargs = {"seed": seed, "fault": fault}
    if parallel:
        kwargs["jobs"] = jobs
    start = time.perf_counter()
    with inject_fault(fault):
        result = fn(**kwargs)
    elapsed = time.perf_counter() - start
    return replace(result, elapsed=elapsed, time_limit=limit)


def run_acceptance(
    only: Iterable[int] | None = None,
    seed: int = DEFAULT_SEED,
    fault: str | None = None,
    jobs: int = 1,
    time_budget: float | None = None,
) -> tuple[list[CriterionResult], list[int]]:
    """Run the selected criteria in order; returns (results, skipped numbers)."""
    numbers = sorted(set(only)) if only else sorted(CRITERIA)
    results, skipped = [], []
    start = time.perf_counter()
    for k in numbers:
        if time_budget is not None and time.perf_counter() - start > time_budget:
            skipped.append(k)
            continue
        results.append(run_criterion(k, seed=seed, fault=fault, jobs=jobs))
    return results, skipped
