"""Exact arithmetic in Z[zeta_p], exponential sums and their L-functions.

The additive character is ``x -> zeta_p^Tr(x)`` with the absolute trace to
F_p. An exponential sum is therefore determined by how often each trace value
occurs, and the L-function follows from the sums S_1..S_{d-1} through the
logarithmic-derivative recursion ``k c_k = sum_{i<=k} S_i c_{k-i}``.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fields import (
    ENUMERATION_CAP,
    ExtensionField,
    FieldElement,
    UniPoly,
    embed_array,
    enumerate_field,
    absolute_trace,
    extend,
)
from .polygon import NewtonPolygon, lower_convex_hull

# fields larger than this are summed in chunks instead of through a cached table
TABLE_LIMIT = 2**20
CHUNK = 2**18


class NonIntegralError(ArithmeticError):
    """A division expected to be exact in Z[zeta_p] left a remainder."""


def vp_int(n: int, p: int) -> float:
    """p-adic valuation of an integer; ``math.inf`` for 0."""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class CycInt:
    """Element of Z[zeta_p] in the basis zeta^0 .. zeta^(p-2)."""

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords: Sequence[int]):
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates, got {len(coords)}")
        self.p = p
        self.coords = tuple(int(c) for c in coords)

    @classmethod
    def from_cycle(cls, p: int, cycle: Sequence[int]) -> CycInt:
        """From coefficients on zeta^0..zeta^(p-1), using zeta^(p-1) = -(1 + ... + zeta^(p-2))."""
        top = int(cycle[p - 1]) if len(cycle) >= p else 0
        return cls(p, [int(c) - top for c in cycle[: p - 1]])

    @classmethod
    def from_int(cls, p: int, n: int) -> CycInt:
        return cls(p, [n] + [0] * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, k: int) -> CycInt:
        cycle = [0] * p
        cycle[k % p] = 1
        return cls.from_cycle(p, cycle)

    @classmethod
    def zero(cls, p: int) -> CycInt:
        return cls(p, [0] * (p - 1))

    @classmethod
    def one(cls, p: int) -> CycInt:
        return cls.from_int(p, 1)

    def _coerce(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return CycInt.from_int(self.p, other)
        if other.p != self.p:
            raise ValueError("elements of different cyclotomic rings")
        return other

    def __add__(self, other: CycInt | int) -> CycInt:
        other = self._coerce(other)
        return CycInt(self.p, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, [-a for a in self.coords])

    def __sub__(self, other: CycInt | int) -> CycInt:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> CycInt:
        return (-self) + other

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.p, [other * a for a in self.coords])
        other = self._coerce(other)
        p = self.p
        cycle = [0] * p
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                if b:
                    cycle[(i + j) % p] += a * b
        return CycInt.from_cycle(p, cycle)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycInt:
        result = CycInt.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, k: int) -> CycInt:
        if any(c % k for c in self.coords):
            raise NonIntegralError(f"{self} is not divisible by {k}")
        return CycInt(self.p, [c // k for c in self.coords])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycInt.from_int(self.p, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.p, self.coords))

    def galois(self, t: int) -> CycInt:
        """Image under zeta -> zeta^t, gcd(t, p) = 1."""
        if t % self.p == 0:
            raise ValueError("t must be prime to p")
        cycle = [0] * self.p
        for j, a in enumerate(self.coords):
            cycle[(j * t) % self.p] += a
        return CycInt.from_cycle(self.p, cycle)

    def complex_embedding(self, t: int = 1) -> complex:
        z = cmath.exp(2j * math.pi * t / self.p)
        return sum(a * z**j for j, a in enumerate(self.coords))

    def lambda_coords(self) -> list[int]:
        """Coordinates in the basis lambda^0 .. lambda^(p-2), lambda = zeta - 1."""
        return to_lambda_basis(self.coords)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    def __repr__(self) -> str:
        return f"CycInt(p={self.p}, {list(self.coords)})"


def to_lambda_basis(coords: Sequence[int]) -> list[int]:
    """Rewrite sum a_j zeta^j as sum b_k (zeta - 1)^k, degrees unchanged."""
    n = len(coords)
    out = [0] * n
    for j, a in enumerate(coords):
        if not a:
            continue
        for k in range(j + 1):
            out[k] += a * math.comb(j, k)
    return out


def pi_valuation(x: CycInt) -> float:
    """Valuation normalized by v(pi) = 1, so v(p) = p - 1; ``math.inf`` for zero.

    In the lambda basis the terms b_k lambda^k have valuations
    (p-1) v_p(b_k) + k, pairwise distinct modulo p-1, so the minimum is exact.
    """
    best = math.inf
    for k, b in enumerate(x.lambda_coords()):
        if b:
            best = min(best, (x.p - 1) * vp_int(b, x.p) + k)
    return best


def pi_valuation_by_division(x: CycInt) -> float:
    """Same valuation, computed by dividing by lambda = zeta - 1 until a unit remains.

    x is divisible by lambda exactly when its constant lambda-coordinate is
    divisible by p; the quotient uses p = -sum_{k=1}^{p-1} binom(p, k+1) lambda^k.
    """
    if x.is_zero():
        return math.inf
    p = x.p
    b = x.lambda_coords()
    v = 0
    while b[0] % p == 0:
        t = b[0] // p
        b = [b[k] - t * math.comb(p, k + 1) if k < p - 1 else -t for k in range(1, p)]
        v += 1
    return v


@dataclass(frozen=True)
class LPolynomial:
    """L(f, T) = sum c_n T^n with c_0 = 1; q = p^m."""

    p: int
    m: int
    coeffs: tuple[CycInt, ...]

    @property
    def d(self) -> int:
        return len(self.coeffs)

    def power_sums(self, count: int) -> list[CycInt]:
        """Recover S_1..S_count from the coefficients."""
        c = list(self.coeffs) + [CycInt.zero(self.p)] * count
        sums: list[CycInt] = []
        for k in range(1, count + 1):
            acc = c[k] * k
            for i in range(1, k):
                acc = acc - sums[i - 1] * c[k - i]
            sums.append(acc)
        return sums

    def valuations(self) -> list[float]:
        return [pi_valuation(c) for c in self.coeffs]

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.coeffs]


def l_from_sums(p: int, m: int, sums: Sequence[CycInt]) -> LPolynomial:
    """Coefficients of exp(sum S_r T^r / r), truncated to degree len(sums)."""
    coeffs = [CycInt.one(p)]
    for k in range(1, len(sums) + 1):
        acc = CycInt.zero(p)
        for i in range(1, k + 1):
            acc = acc + sums[i - 1] * coeffs[k - i]
        coeffs.append(acc.exact_div(k))
    return LPolynomial(p, m, tuple(coeffs))


class PowerTraceTable:
    """Traces Tr(beta_c * x^i) for every x in F_{q^r}.

    ``beta_c`` runs over the basis of F_q and i over 1..d, so the trace of
    f(x) for any f = sum a_i X^i over F_q is an F_p-linear combination of
    table rows.
    """

    def __init__(self, base: ExtensionField, r: int, d: int, seed: int = 0,
                 cap: int = ENUMERATION_CAP):
        self.base = base
        self.field = extend(base, r, seed)
        self.r = r
        self.d = d
        field = self.field
        xs = field.elements_array(cap)
        m = base.s
        power = xs
        rows = np.zeros((d + 1, m, len(xs)), dtype=np.int64)
        rows[0] = _basis_traces(field, base, np.ones_like(xs[:, :1]) * field.one().coords)
        for i in range(1, d + 1):
            rows[i] = _basis_traces(field, base, power)
            if i < d:
                power = field.multiply_arrays(power, xs)
        self.rows = rows

    def trace_counts(self, coeffs: np.ndarray) -> np.ndarray:
        """Histogram over F_p of Tr(f(x)); ``coeffs`` has shape (deg+1, m)."""
        p = self.field.p
        deg = coeffs.shape[0] - 1
        if deg > self.d:
            raise ValueError(f"polynomial degree {deg} exceeds table degree {self.d}")
        flat = np.tensordot(coeffs, self.rows[: deg + 1], axes=([0, 1], [0, 1])) % p
        return np.bincount(flat, minlength=p)


def _basis_traces(field: ExtensionField, base: ExtensionField, values: np.ndarray) -> np.ndarray:
    out = []
    for c in range(base.s):
        beta = np.zeros((1, base.s), dtype=np.int64)
        beta[0, c] = 1
        beta = np.repeat(embed_array(beta, base, field), len(values), axis=0)
        prod = field.multiply_arrays(beta, values)
        out.append(prod @ field.trace_vector % field.p)
    return np.array(out)


@lru_cache(maxsize=32)
def trace_table(base: ExtensionField, r: int, d: int, seed: int = 0) -> PowerTraceTable:
    return PowerTraceTable(base, r, d, seed)


def sum_from_counts(p: int, counts: Sequence[int]) -> CycInt:
    return CycInt.from_cycle(p, [int(c) for c in counts])


def exp_sum(f: UniPoly, r: int, seed: int = 0, cap: int = ENUMERATION_CAP) -> CycInt:
    """S_r(f) = sum over x in F_{q^r} of zeta_p^Tr(f(x)), exactly."""
    if r < 1:
        raise ValueError("r must be >= 1")
    deg = len(f.coeffs) - 1
    field = extend(f.field, r, seed)
    if field.order > cap:
        raise ValueError(f"field of order {field.order} exceeds enumeration cap {cap}")
    if field.order > TABLE_LIMIT:
        return sum_from_counts(field.p, _streamed_counts(f, field))
    table = trace_table(f.field, r, max(deg, 1), seed)
    return sum_from_counts(f.field.p, table.trace_counts(f.coeff_arrays()))


def _streamed_counts(f: UniPoly, field: ExtensionField) -> np.ndarray:
    """Trace histogram of f over ``field`` by chunked Horner evaluation."""
    p = field.p
    coeffs = embed_array(f.coeff_arrays(), f.field, field)
    counts = np.zeros(p, dtype=np.int64)
    for start in range(0, field.order, CHUNK):
        xs = field.elements_chunk(start, start + CHUNK)
        acc = np.broadcast_to(coeffs[-1], xs.shape).copy()
        for c in coeffs[-2::-1]:
            acc = (field.multiply_arrays(acc, xs) + c) % p
        counts += np.bincount(acc @ field.trace_vector % p, minlength=p)
    return counts


def exp_sum_direct(f: UniPoly, r: int, seed: int = 0, character: int = 1) -> CycInt:
    """Element-by-element evaluation of S_r with character x -> zeta^(t Tr x)."""
    field = extend(f.field, r, seed)
    p = field.p
    counts = [0] * p
    lifted = UniPoly(field, tuple(field(c) for c in f.coeffs))
    for x in enumerate_field(field):
        counts[(character * absolute_trace(lifted(x))) % p] += 1
    return sum_from_counts(p, counts)


def exp_sums(f: UniPoly, count: int, seed: int = 0) -> list[CycInt]:
    return [exp_sum(f, r, seed) for r in range(1, count + 1)]


def l_function(f: UniPoly, seed: int = 0) -> LPolynomial:
    """L(f, T) of degree d - 1 from the sums S_1 .. S_{d-1}."""
    d = f.degree
    if d < 1:
        raise ValueError("polynomial must have positive degree")
    if d % f.field.p == 0:
        raise ValueError("degree must be prime to p")
    sums = exp_sums(f, d - 1, seed)
    return l_from_sums(f.field.p, f.field.s, sums)


def newton_polygon_of_l(L: LPolynomial) -> NewtonPolygon:
    """Hull of (n, v_q(c_n)), with v_q = v_pi / ((p-1) m)."""
    scale = (L.p - 1) * L.m
    pts = []
    for n, v in enumerate(L.valuations()):
        pts.append((n, math.inf if v == math.inf else Fraction(int(v), scale)))
    return lower_convex_hull(pts)


def weil_bound_ok(L: LPolynomial, rel_tol: float = 1e-6) -> bool:
    """Diagnostic: every complex root of every conjugate has |theta| = sqrt(q)."""
    q = L.p ** L.m
    for t in range(1, L.p):
        poly = [c.complex_embedding(t) for c in L.coeffs]
        while len(poly) > 1 and abs(poly[-1]) < 1e-12:
            poly.pop()
        if len(poly) < 2:
            continue
        # reciprocal roots of sum c_n T^n are roots of sum c_n X^(deg-n)
        roots = np.roots(poly)
        for root in roots:
            if not math.isclose(abs(root), math.sqrt(q), rel_tol=rel_tol):
                return False
    return True
