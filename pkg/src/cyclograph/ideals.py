"""Ideals of Z[zeta_m] as integer lattices and the quotient rings they define.

An ideal is stored by the column-style Hermite normal form of its coefficient
lattice, which makes equality a tuple comparison. The quotient Z[zeta_m]/A is
indexed through the Smith normal form of that basis: residue ``index`` is the
mixed-radix encoding of the SNF coordinates, and index 0 is always the zero
residue.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import intmat
from .core import (
    CycInt,
    CyclotomicContext,
    _mul_coeffs,
    field_norm,
    multiplication_matrix,
    torsion_units,
    zeta_power,
)
from .errors import InvalidParameterError, ResourceLimitError, UnitIdealError, ZeroIdealError

__all__ = [
    "IdealLattice",
    "QuotientRing",
    "Residue",
    "IdealFamily",
    "ideal_from_generators",
    "principal_ideal",
    "contains",
    "reduce_mod",
    "quotient_ring",
    "intermediate_ideals",
    "PID_CONDUCTORS",
]

# m (not 2 mod 4) for which Z[zeta_m] is a principal ideal domain
PID_CONDUCTORS = frozenset(
    (1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19, 20, 21, 24, 25, 27, 28, 32, 33,
     35, 36, 40, 44, 45, 48, 60, 84)
)

# int64 vectorised paths are used only below this order; larger rings fall back
# to Python integers inside numpy object arrays.
_INT64_SAFE_ORDER = 1 << 20


def _is_pid(m: int) -> bool:
    return (m // 2 if m % 4 == 2 else m) in PID_CONDUCTORS


def _as_coeffs(ctx: CyclotomicContext, x: CycInt | Sequence[int]) -> tuple[int, ...]:
    if isinstance(x, CycInt):
        if x.ctx.m != ctx.m:
            raise InvalidParameterError(f"context mismatch: m={x.ctx.m} vs m={ctx.m}")
        return x.coeffs
    coeffs = tuple(int(c) for c in x)
    if len(coeffs) != ctx.phi:
        raise InvalidParameterError(f"expected {ctx.phi} coefficients, got {len(coeffs)}")
    return coeffs


@dataclass(frozen=True, eq=False)
class IdealLattice:
    ctx: CyclotomicContext
    hnf: tuple[tuple[int, ...], ...]
    norm: int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IdealLattice) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"IdealLattice(m={self.ctx.m}, norm={self.norm}, hnf={[list(r) for r in self.hnf]})"

    @property
    def key(self) -> tuple:
        return (self.ctx.m, self.hnf)

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.hnf))

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.hnf[i][i] for i in range(self.ctx.phi))

    def is_unit_ideal(self) -> bool:
        return self.norm == 1

    def reduce(self, x: CycInt | Sequence[int]) -> tuple[int, ...]:
        """Representative of x + A in the fundamental box of the HNF basis."""
        v = list(_as_coeffs(self.ctx, x))
        cols = self.columns
        for k in reversed(range(self.ctx.phi)):
            q = v[k] // self.hnf[k][k]
            if q:
                v = [a - q * b for a, b in zip(v, cols[k])]
        return tuple(v)

    def contains(self, x: CycInt | Sequence[int]) -> bool:
        v = list(_as_coeffs(self.ctx, x))
        cols = self.columns
        for k in reversed(range(self.ctx.phi)):
            q, r = divmod(v[k], self.hnf[k][k])
            if r:
                return False
            if q:
                v = [a - q * b for a, b in zip(v, cols[k])]
        return True

    def reduce_many(self, x: np.ndarray) -> np.ndarray:
        """Row-wise :meth:`reduce` of an (n, phi) integer array."""
        v = np.array(x, copy=True)
        cols = np.array(self.columns, dtype=v.dtype)
        for k in reversed(range(self.ctx.phi)):
            q = v[:, k] // self.hnf[k][k]
            v -= q[:, None] * cols[k][None, :]
        return v

    def contains_many(self, x: np.ndarray) -> np.ndarray:
        return ~np.any(self.reduce_many(x), axis=1)

    def contains_ideal(self, other: IdealLattice) -> bool:
        return all(self.contains(c) for c in other.columns)


def ideal_from_generators(
    ctx: CyclotomicContext, gens: Iterable[CycInt | Sequence[int]]
) -> IdealLattice:
    coeffs = [_as_coeffs(ctx, g) for g in gens]
    nonzero = [c for c in coeffs if any(c)]
    if not nonzero:
        raise ZeroIdealError("the zero ideal is not allowed")
    # N(g) * Z[zeta_m] lies inside (g), which bounds the HNF entries
    modulus = field_norm(CycInt(ctx, nonzero[0]))
    vectors = [_mul_coeffs(ctx, g, ctx.reduction_table[j]) for g in nonzero for j in range(ctx.phi)]
    hnf = intmat.hnf_from_vectors(vectors, ctx.phi, modulus=modulus)
    norm = 1
    for i in range(ctx.phi):
        norm *= hnf[i][i]
    return IdealLattice(ctx, hnf, norm)


def principal_ideal(alpha: CycInt) -> IdealLattice:
    return ideal_from_generators(alpha.ctx, [alpha])


def ideal_norm(ideal: IdealLattice) -> int:
    return ideal.norm


def contains(ideal: IdealLattice, x: CycInt | Sequence[int]) -> bool:
    return ideal.contains(x)


class QuotientRing:
    """Z[zeta_m]/A with canonical residues and an index <-> residue bijection."""

    def __init__(self, ideal: IdealLattice) -> None:
        if ideal.norm == 1:
            raise UnitIdealError("quotient by the unit ideal has a single element")
        self.ideal = ideal
        self.ctx = ideal.ctx
        diag, u, u_inv, v = intmat.smith_normal_form(ideal.hnf)
        self.snf_diag: tuple[int, ...] = tuple(diag)
        self.to_snf: tuple[tuple[int, ...], ...] = tuple(
            tuple(x % d for x in row) for row, d in zip(u, diag)
        )
        self.from_snf: tuple[tuple[int, ...], ...] = tuple(map(tuple, u_inv))
        self.snf_right: tuple[tuple[int, ...], ...] = tuple(map(tuple, v))
        self.order = ideal.norm
        strides, acc = [], 1
        for d in self.snf_diag:
            strides.append(acc)
            acc *= d
        if acc != self.order:
            raise AssertionError("SNF invariant factors disagree with the HNF determinant")
        self.strides: tuple[int, ...] = tuple(strides)
        self._dtype = np.int64 if self.order <= _INT64_SAFE_ORDER else object

    def __repr__(self) -> str:
        return f"QuotientRing(m={self.ctx.m}, order={self.order}, snf={list(self.snf_diag)})"

    def __len__(self) -> int:
        return self.order

    # scalar paths -----------------------------------------------------------

    def coords_of(self, x: CycInt | Sequence[int]) -> tuple[int, ...]:
        v = _as_coeffs(self.ctx, x)
        return tuple(
            sum(a * b for a, b in zip(row, v)) % d for row, d in zip(self.to_snf, self.snf_diag)
        )

    def index_of_coords(self, t: Sequence[int]) -> int:
        return sum((c % d) * s for c, d, s in zip(t, self.snf_diag, self.strides))

    def coords_of_index(self, index: int) -> tuple[int, ...]:
        return tuple((index // s) % d for s, d in zip(self.strides, self.snf_diag))

    def index_of(self, x: CycInt | Sequence[int]) -> int:
        return self.index_of_coords(self.coords_of(x))

    def rep_of_index(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise InvalidParameterError(f"residue index {index} out of range")
        t = self.coords_of_index(index)
        return self.ideal.reduce(intmat.matvec(self.from_snf, t))

    def residue(self, x: CycInt | Sequence[int]) -> Residue:
        return Residue(self, self.index_of(x))

    def residue_at(self, index: int) -> Residue:
        if not 0 <= index < self.order:
            raise InvalidParameterError(f"residue index {index} out of range")
        return Residue(self, index)

    def zero(self) -> Residue:
        return Residue(self, 0)

    def one(self) -> Residue:
        return self.residue(zeta_power(self.ctx, 0))

    def residues(self) -> list[Residue]:
        return [Residue(self, i) for i in range(self.order)]

    def residue_add(self, a: Residue, b: Residue) -> Residue:
        return a + b

    def residue_neg(self, a: Residue) -> Residue:
        return -a

    def residue_mul(self, a: Residue, b: Residue) -> Residue:
        return a * b

    # vectorised paths ---------------------------------------------------------

    def _array(self, x) -> np.ndarray:
        return np.asarray(x, dtype=self._dtype)

    def indices(self, x: np.ndarray) -> np.ndarray:
        """Residue indices of the rows of an (n, phi) integer array."""
        x = self._array(x)
        u = np.array(self.to_snf, dtype=self._dtype)
        d = np.array(self.snf_diag, dtype=self._dtype)
        t = (x @ u.T) % d
        return t @ np.array(self.strides, dtype=self._dtype)

    def coords(self, idx: np.ndarray) -> np.ndarray:
        idx = self._array(idx)
        s = np.array(self.strides, dtype=self._dtype)
        d = np.array(self.snf_diag, dtype=self._dtype)
        return (idx[:, None] // s[None, :]) % d[None, :]

    def indices_of_coords(self, t: np.ndarray) -> np.ndarray:
        d = np.array(self.snf_diag, dtype=self._dtype)
        return (self._array(t) % d) @ np.array(self.strides, dtype=self._dtype)

    def add_indices(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        a = self._array(np.atleast_1d(a))
        b = self._array(np.broadcast_to(np.atleast_1d(b), a.shape))
        return self.indices_of_coords(self.coords(a) + self.coords(b))

    def neg_indices(self, a: np.ndarray) -> np.ndarray:
        return self.indices_of_coords(-self.coords(self._array(np.atleast_1d(a))))

    def mul_indices(self, a: np.ndarray, u: CycInt) -> np.ndarray:
        """Indices of (residue a) * u for every index in ``a``."""
        reps = self.reps[self._array(np.atleast_1d(a))]
        mat = np.array(multiplication_matrix(u), dtype=self._dtype)
        return self.indices(reps @ mat.T)

    @cached_property
    def reps(self) -> np.ndarray:
        """Canonical representatives, row ``i`` belonging to residue ``i``."""
        diag = self.ideal.diagonal
        grids = np.indices(diag).reshape(len(diag), -1).T.astype(self._dtype)
        idx = self.indices(grids)
        out = np.empty_like(grids)
        out[idx] = grids
        if len(np.unique(idx)) != self.order:
            raise AssertionError("residue index map is not a bijection")
        out.setflags(write=False)
        return out


@dataclass(frozen=True, eq=False)
class Residue:
    ring: QuotientRing
    index: int

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Residue)
            and other.ring.ideal == self.ring.ideal
            and other.index == self.index
        )

    def __hash__(self) -> int:
        return hash((self.ring.ideal.key, self.index))

    def __repr__(self) -> str:
        return f"Residue({list(self.canonical_rep.coeffs)} mod A, index={self.index})"

    @cached_property
    def canonical_rep(self) -> CycInt:
        return CycInt(self.ring.ctx, self.ring.rep_of_index(self.index))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ring.coords_of_index(self.index)

    def _check(self, other: Residue) -> None:
        if other.ring.ideal != self.ring.ideal:
            raise InvalidParameterError("residues belong to different quotient rings")

    def __add__(self, other: Residue) -> Residue:
        self._check(other)
        t = [a + b for a, b in zip(self.coords, other.coords)]
        return Residue(self.ring, self.ring.index_of_coords(t))

    def __neg__(self) -> Residue:
        return Residue(self.ring, self.ring.index_of_coords([-a for a in self.coords]))

    def __sub__(self, other: Residue) -> Residue:
        return self + (-other)

    def __mul__(self, other: Residue) -> Residue:
        self._check(other)
        return self.ring.residue(self.canonical_rep * other.canonical_rep)

    def __bool__(self) -> bool:
        return self.index != 0


def reduce_mod(ideal: IdealLattice | QuotientRing, x: CycInt | Sequence[int]) -> Residue:
    ring = ideal if isinstance(ideal, QuotientRing) else quotient_ring(ideal)
    return ring.residue(x)


def quotient_ring(ideal: IdealLattice) -> QuotientRing:
    return QuotientRing(ideal)


class IdealFamily(list):
    """List of ideals D with A <= D, plus how complete the enumeration is.

    Only ideals whose image D/A is principal in the quotient are produced; that
    covers every intermediate ideal when Z[zeta_m] is a PID (``complete``).
    """

    principal_quotient_only = True

    def __init__(self, items: Iterable[IdealLattice], complete: bool) -> None:
        super().__init__(items)
        self.complete = complete


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def intermediate_ideals(
    ring: QuotientRing, max_norm: int | None = None, max_candidates: int | None = None
) -> IdealFamily:
    """All ideals A + (r), r ranging over Z[zeta_m]/A, sorted by (norm, HNF)."""
    max_norm = max_norm or _env_int("CYCLOGRAPH_MAX_NORM", 10**6)
    max_candidates = max_candidates or _env_int("CYCLOGRAPH_MAX_CANDIDATES", 10**6)
    if ring.order > max_norm:
        raise ResourceLimitError(f"N(A) = {ring.order} exceeds the bound {max_norm}")
    ctx = ring.ctx
    base = list(ring.ideal.columns)
    everything = np.arange(ring.order)
    unit_perms = [ring.mul_indices(everything, u) for u in torsion_units(ctx)]
    reps = ring.reps
    seen = np.zeros(ring.order, dtype=bool)
    found: dict[tuple, IdealLattice] = {ring.ideal.key: ring.ideal}
    tried = 0
    for i in range(1, ring.order):
        if seen[i]:
            continue
        tried += 1
        if tried > max_candidates:
            raise ResourceLimitError(f"more than {max_candidates} candidate generators")
        # associates of r generate the same ideal A + (r)
        for perm in unit_perms:
            seen[perm[i]] = True
        rep = tuple(int(c) for c in reps[i])
        vectors = base + [_mul_coeffs(ctx, rep, ctx.reduction_table[j]) for j in range(ctx.phi)]
        hnf = intmat.hnf_from_vectors(vectors, ctx.phi, modulus=ring.order)
        norm = 1
        for k in range(ctx.phi):
            norm *= hnf[k][k]
        found.setdefault((ctx.m, hnf), IdealLattice(ctx, hnf, norm))
    ordered = sorted(found.values(), key=lambda d: (d.norm, d.hnf))
    return IdealFamily(ordered, complete=_is_pid(ctx.m))
