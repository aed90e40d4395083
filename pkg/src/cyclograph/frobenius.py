"""Frobenius circulants of valency 2p and their cyclotomic models.

A circulant Cay(Z_n, H) with H <= Z_n^* is first-kind Frobenius when H is
semiregular on the nonzero residues and generates Z_n additively. For
|H| = 2p the generators a of H are characterised arithmetically by
:func:`classify_2p`; :func:`brute_force_frobenius` checks the definition
directly. The bridge maps Z[zeta_m]/A_{m,n,a} onto Z_n via zeta -> a.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import intmat
from .core import make_context
from .errors import HypothesisViolationError, InternalInconsistencyError, InvalidParameterError
from .graphs import CayleyGraph, IsoWitness, build_circulant, build_cyclotomic_graph, verify_isomorphism
from .ideals import IdealLattice, QuotientRing

__all__ = [
    "FrobeniusCandidate",
    "BridgeResult",
    "cyclic_subgroup",
    "is_semiregular",
    "frobenius_checks",
    "classify_2p",
    "brute_force_frobenius",
    "frobenius_subgroups_oracle",
    "build_A_mna",
    "bridge_map",
    "circulant_to_cyclotomic",
    "frobenius_to_cyclotomic",
    "frobenius_report",
]


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % k for k in range(3, int(p**0.5) + 1, 2))


def cyclic_subgroup(n: int, a: int) -> tuple[int, ...]:
    """Sorted elements of <a> in Z_n^*."""
    if gcd(a, n) != 1:
        raise InvalidParameterError(f"{a} is not a unit mod {n}")
    out, x = [1 % n], a % n
    while x != 1 % n:
        out.append(x)
        x = x * a % n
    return tuple(sorted(out))


def is_semiregular(n: int, a: int) -> bool:
    """True iff gcd(h - 1, n) = 1 for every h != 1 in <a>."""
    return all(gcd(h - 1, n) == 1 for h in cyclic_subgroup(n, a) if h != 1)


@dataclass(frozen=True)
class FrobeniusCandidate:
    n: int
    p: int
    a: int
    S: tuple[int, ...]
    checks: dict
    group: int  # smallest candidate a with the same S

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def frobenius_checks(n: int, p: int, a: int) -> dict:
    a %= n
    return {
        "n = 1 mod 2p": n % (2 * p) == 1,
        "a^p = -1 mod n": (pow(a, p, n) + 1) % n == 0,
        "gcd(a^i - 1, n) = 1": all(gcd(pow(a, i, n) - 1, n) == 1 for i in range(1, p)),
        "gcd(a^i + 1, n) = 1": all(gcd(pow(a, i, n) + 1, n) == 1 for i in range(1, p)),
    }


def classify_2p(n: int, p: int) -> list[FrobeniusCandidate]:
    """All a in [2, n-2] making Cay(Z_n, <a>) a 2p-valent first-kind Frobenius graph.

    Returns an empty list when n is not 1 mod 2p (this includes n < 2p + 1).
    """
    if not _is_odd_prime(p):
        raise InvalidParameterError(f"p must be an odd prime, got {p}")
    if n < 3:
        raise InvalidParameterError(f"n must be >= 3, got {n}")
    if n % (2 * p) != 1:
        return []
    found: list[tuple[int, tuple[int, ...], dict]] = []
    for a in range(2, n - 1):
        if (pow(a, p, n) + 1) % n:
            continue
        checks = frobenius_checks(n, p, a)
        if not all(checks.values()):
            continue
        s = cyclic_subgroup(n, a)
        if len(s) != 2 * p:
            raise InternalInconsistencyError(f"<{a}> mod {n} has order {len(s)}, not {2 * p}")
        found.append((a, s, checks))
    first: dict[tuple[int, ...], int] = {}
    for a, s, _ in found:
        first.setdefault(s, a)
    return [FrobeniusCandidate(n, p, a, s, c, first[s]) for a, s, c in found]


def brute_force_frobenius(n: int, s: Iterable[int]) -> bool:
    """Definition check: S a subgroup of Z_n^* of even order, fixed-point-free on
    Z_n minus 0, and additively generating Z_n."""
    conn = sorted({int(x) % n for x in s})
    if not conn or 0 in conn:
        raise InvalidParameterError("connection set must be nonempty and avoid 0")
    if sorted({(-x) % n for x in conn}) != conn:
        raise InvalidParameterError("connection set is not closed under negation")
    members = set(conn)
    if any(gcd(x, n) != 1 for x in conn) or 1 % n not in members:
        return False
    if any((x * y) % n not in members for x in conn for y in conn):
        return False
    if len(conn) % 2:
        return False
    nonzero = np.arange(1, n, dtype=np.int64)
    for h in conn:
        if h != 1 and np.any((h * nonzero - nonzero) % n == 0):
            return False
    g = n
    for x in conn:
        g = gcd(g, x)
    return g == 1


def frobenius_subgroups_oracle(n: int, p: int) -> set[tuple[int, ...]]:
    """Every symmetric subgroup of order 2p of Z_n^* passing the definition check.

    Groups of order 2p are cyclic, so scanning the cyclic subgroups finds them all.
    """
    seen: set[tuple[int, ...]] = set()
    for x in range(1, n):
        if gcd(x, n) != 1:
            continue
        h = cyclic_subgroup(n, x)
        if len(h) == 2 * p and (n - 1) in h:
            seen.add(h)
    return {h for h in seen if brute_force_frobenius(n, h)}


# ---------------------------------------------------------------------------
# the lattice A_{m,n,a} and the bridge


def _verify_mna(m: int, n: int, a: int) -> None:
    if m < 2 or m % 2 == 0:
        raise HypothesisViolationError("m odd", f"m = {m}")
    if n < 3 or n % 2 == 0:
        raise HypothesisViolationError("n odd and n >= 3", f"n = {n}")
    ctx = make_context(m)
    for i in range(ctx.phi, m):
        lhs = pow(a, i, n)
        rhs = sum(c * pow(a, j, n) for j, c in enumerate(ctx.reduction_table[i])) % n
        if lhs != rhs:
            raise HypothesisViolationError(
                "a^i = sum_j c_ij a^j mod n", f"fails at i = {i}: {lhs} vs {rhs}"
            )
    if pow(a, m, n) != 1 % n:
        raise HypothesisViolationError("a^m = 1 mod n", f"a^m = {pow(a, m, n)}")
    for i in range(1, m):
        if pow(a, i, n) in (1, n - 1):
            raise HypothesisViolationError("a^i != +-1 mod n for 1 <= i <= m-1", f"i = {i}")


def build_A_mna(m: int, n: int, a: int) -> IdealLattice:
    """{x : sum x_i a^i = 0 mod n}, after checking the bridge hypotheses."""
    a %= n
    _verify_mna(m, n, a)
    ctx = make_context(m)
    phi = ctx.phi
    vectors = [tuple(n if k == 0 else 0 for k in range(phi))]
    for i in range(1, phi):
        v = [0] * phi
        v[0] = -pow(a, i, n)
        v[i] = 1
        vectors.append(tuple(v))
    hnf = intmat.hnf_from_vectors(vectors, phi, modulus=n)
    norm = 1
    for k in range(phi):
        norm *= hnf[k][k]
    ideal = IdealLattice(ctx, hnf, norm)
    if norm != n:
        raise InternalInconsistencyError(f"A_(m,n,a) has index {norm}, expected {n}")
    z = ctx.zeta()
    if not all(ideal.contains(z * ctx.element(c)) for c in ideal.columns):
        raise InternalInconsistencyError("A_(m,n,a) is not closed under multiplication by zeta")
    return ideal


def bridge_map(q: QuotientRing, n: int, a: int) -> np.ndarray:
    """f(sum x_i zeta^i) = sum x_i a^i mod n on canonical representatives."""
    phi = q.ctx.phi
    powers = np.array([pow(a, i, n) for i in range(phi)], dtype=object)
    reps = np.asarray(q.reps, dtype=object)
    return np.array((reps @ powers) % n, dtype=np.int64)


@dataclass(frozen=True)
class BridgeResult:
    m: int
    n: int
    a: int
    ideal: IdealLattice
    quotient: QuotientRing
    graph: CayleyGraph
    circulant: CayleyGraph
    vertex_map: np.ndarray
    iso: IsoWitness


def circulant_to_cyclotomic(m: int, n: int, a: int) -> BridgeResult:
    """Certify Cay(Z_n, <-a>) = G_m(A_{m,n,a}) through the map zeta -> a."""
    a %= n
    ideal = build_A_mna(m, n, a)
    q = QuotientRing(ideal)
    g = build_cyclotomic_graph(q, "full")
    if g.valency != 2 * m:
        raise InternalInconsistencyError(f"G_m(A) has valency {g.valency}, expected {2 * m}")
    circ = build_circulant(n, cyclic_subgroup(n, (-a) % n))
    f = bridge_map(q, n, a)
    iso = verify_isomorphism(g, circ, f)
    if not iso.verified:
        raise InternalInconsistencyError(f"bridge map failed for m={m}, n={n}, a={a}")
    return BridgeResult(m, n, a, ideal, q, g, circ, f, iso)


def frobenius_to_cyclotomic(p: int, n: int, a: int) -> BridgeResult:
    """Bridge a classified 2p-valent Frobenius circulant to G_p(A_{p,n,-a})."""
    if not _is_odd_prime(p):
        raise InvalidParameterError(f"p must be an odd prime, got {p}")
    checks = frobenius_checks(n, p, a)
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise HypothesisViolationError(failed[0], f"n={n}, p={p}, a={a}")
    return circulant_to_cyclotomic(p, n, (-a) % n)


def frobenius_report(p: int, ns: Sequence[int], bridge_max: int = 200) -> dict:
    """JSON-ready classifier output, bridging candidates with n <= bridge_max."""
    results = []
    for n in ns:
        rows = []
        for c in classify_2p(n, p):
            row = {"a": c.a, "S": list(c.S), "group": c.group, "checks": c.checks,
                   "bridged": False, "ideal_hnf": None}
            if n <= bridge_max:
                br = frobenius_to_cyclotomic(p, n, c.a)
                row["bridged"] = br.iso.verified
                row["ideal_hnf"] = [list(r) for r in br.ideal.hnf]
            rows.append(row)
        results.append({"n": n, "candidates": rows})
    return {"schema": 1, "p": p, "results": results}
