"""Exact arithmetic in the cyclotomic integers Z[zeta_m].

Elements are stored as integer coefficient vectors in the power basis
1, zeta, ..., zeta^(phi(m)-1). Everything is exact; there is no floating point.

For m = 3 the Eisenstein-Jacobi literature writes elements as x + y*rho with
rho^2 = rho - 1; since zeta_3 = -rho, :func:`from_rho` and :func:`to_rho` convert
between the two coordinate systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import intmat
from .errors import InvalidParameterError

__all__ = [
    "CyclotomicContext",
    "CycInt",
    "AssociateCheck",
    "make_context",
    "cyclotomic_polynomial",
    "mul",
    "zeta_power",
    "field_norm",
    "manhattan_weight",
    "torsion_units",
    "is_associate",
    "exact_divide",
    "multiplication_matrix",
    "from_rho",
    "to_rho",
]


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    # den is monic; coefficients are low degree first
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + dn]
        q[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise InvalidParameterError(f"m must be positive, got {m}")
    poly: list[int] = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@dataclass(frozen=True, eq=False)
class CyclotomicContext:
    """The ring Z[zeta_m] together with its reduction data.

    ``reduction_table[i]`` holds the power-basis coordinates of zeta^i for
    0 <= i < m.
    """

    m: int
    phi: int
    cyclo_poly: tuple[int, ...]
    reduction_table: tuple[tuple[int, ...], ...]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicContext) and other.m == self.m

    def __hash__(self) -> int:
        return hash(("CyclotomicContext", self.m))

    def __repr__(self) -> str:
        return f"CyclotomicContext(m={self.m})"

    def element(self, coeffs: Iterable[int]) -> CycInt:
        return CycInt(self, tuple(int(c) for c in coeffs))

    def zero(self) -> CycInt:
        return CycInt(self, (0,) * self.phi)

    def one(self) -> CycInt:
        return zeta_power(self, 0)

    def integer(self, n: int) -> CycInt:
        return CycInt(self, (n,) + (0,) * (self.phi - 1))

    def zeta(self, i: int = 1) -> CycInt:
        return zeta_power(self, i)

    @property
    def torsion_is_unit_group(self) -> bool:
        # unit rank phi/2 - 1 vanishes only for m in {1, 2, 3, 4, 6}
        return self.phi <= 2


@lru_cache(maxsize=None)
def make_context(m: int) -> CyclotomicContext:
    if not isinstance(m, int) or m < 2:
        raise InvalidParameterError(f"m must be an integer >= 2, got {m!r}")
    poly = cyclotomic_polynomial(m)
    phi = len(poly) - 1
    rows = []
    row = [1] + [0] * (phi - 1)
    for _ in range(m):
        rows.append(tuple(row))
        # multiply by x and fold the degree-phi term back with Phi_m
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            row = [c - top * p for c, p in zip(row, poly[:phi])]
    return CyclotomicContext(m, phi, poly, tuple(rows))


@dataclass(frozen=True, eq=False)
class CycInt:
    ctx: CyclotomicContext
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.ctx.phi:
            raise InvalidParameterError(
                f"expected {self.ctx.phi} coefficients for m={self.ctx.m}, got {len(self.coeffs)}"
            )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycInt):
            return self.ctx.m == other.ctx.m and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == (other,) + (0,) * (self.ctx.phi - 1)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.m, self.coeffs))

    def __repr__(self) -> str:
        return f"CycInt(m={self.ctx.m}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def _coerce(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return self.ctx.integer(other)
        if isinstance(other, CycInt):
            if other.ctx.m != self.ctx.m:
                raise InvalidParameterError(
                    f"context mismatch: m={self.ctx.m} vs m={other.ctx.m}"
                )
            return other
        raise TypeError(f"cannot combine CycInt with {type(other).__name__}")

    def __add__(self, other: CycInt | int) -> CycInt:
        o = self._coerce(other)
        return CycInt(self.ctx, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycInt | int) -> CycInt:
        return self + (-self._coerce(other))

    def __rsub__(self, other: CycInt | int) -> CycInt:
        return self._coerce(other) - self

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.ctx, tuple(a * other for a in self.coeffs))
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            raise InvalidParameterError("negative powers are not defined in Z[zeta_m]")
        out, base = self.ctx.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @cached_property
    def norm(self) -> int:
        return field_norm(self)

    @property
    def weight(self) -> int:
        return manhattan_weight(self)


def _mul_coeffs(ctx: CyclotomicContext, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    phi, m, table = ctx.phi, ctx.m, ctx.reduction_table
    conv = [0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    out = conv[:phi]
    for k in range(phi, len(conv)):
        c = conv[k]
        if c:
            row = table[k % m]
            for j in range(phi):
                out[j] += c * row[j]
    return tuple(out)


def mul(x: CycInt, y: CycInt) -> CycInt:
    if x.ctx.m != y.ctx.m:
        raise InvalidParameterError(f"context mismatch: m={x.ctx.m} vs m={y.ctx.m}")
    return CycInt(x.ctx, _mul_coeffs(x.ctx, x.coeffs, y.coeffs))


def zeta_power(ctx: CyclotomicContext, i: int) -> CycInt:
    return CycInt(ctx, ctx.reduction_table[i % ctx.m])


def multiplication_matrix(x: CycInt) -> list[list[int]]:
    """Matrix of y -> x*y in the power basis (column j is x * zeta^j)."""
    ctx = x.ctx
    cols = [_mul_coeffs(ctx, x.coeffs, ctx.reduction_table[j]) for j in range(ctx.phi)]
    return [[cols[j][i] for j in range(ctx.phi)] for i in range(ctx.phi)]


def field_norm(x: CycInt) -> int:
    return abs(intmat.det(multiplication_matrix(x)))


def manhattan_weight(x: CycInt) -> int:
    return sum(abs(a) for a in x.coeffs)


def torsion_units(ctx: CyclotomicContext) -> list[CycInt]:
    """The roots of unity +-zeta^i in Z[zeta_m], without repeats."""
    seen: dict[tuple[int, ...], CycInt] = {}
    for sign in (1, -1):
        for i in range(ctx.m):
            u = zeta_power(ctx, i) * sign
            seen.setdefault(u.coeffs, u)
    return list(seen.values())


@dataclass(frozen=True)
class AssociateCheck:
    """Outcome of :func:`is_associate`; truthy iff a torsion unit was found.

    When ``torsion_complete`` is False the ring has units of infinite order,
    so a negative answer only rules out torsion associates.
    """

    associate: bool
    unit: CycInt | None
    torsion_complete: bool

    def __bool__(self) -> bool:
        return self.associate


def is_associate(x: CycInt, y: CycInt) -> AssociateCheck:
    if x.ctx.m != y.ctx.m:
        raise InvalidParameterError(f"context mismatch: m={x.ctx.m} vs m={y.ctx.m}")
    complete = x.ctx.torsion_is_unit_group
    for u in torsion_units(x.ctx):
        if u * x == y:
            return AssociateCheck(True, u, complete)
    return AssociateCheck(False, None, complete)


def exact_divide(num: CycInt, den: CycInt) -> CycInt | None:
    """Return q with num == q*den, or None if den does not divide num."""
    if not den:
        raise InvalidParameterError("division by zero")
    if num.ctx.m != den.ctx.m:
        raise InvalidParameterError(f"context mismatch: m={num.ctx.m} vs m={den.ctx.m}")
    q = intmat.solve_integral(multiplication_matrix(den), num.coeffs)
    return None if q is None else CycInt(num.ctx, tuple(q))


def from_rho(c: int, d: int) -> CycInt:
    """The Eisenstein-Jacobi integer c + d*rho as an element of Z[zeta_3]."""
    return CycInt(make_context(3), (c, -d))


def to_rho(x: CycInt) -> tuple[int, int]:
    if x.ctx.m != 3:
        raise InvalidParameterError("rho coordinates only exist for m = 3")
    a0, a1 = x.coeffs
    return a0, -a1
