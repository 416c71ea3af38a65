"""Truncated arithmetic in Z_p[zeta_p] and the congruence on S_1(f).

Elements are stored in the basis lambda^0..lambda^(p-2) (lambda = zeta - 1)
with coefficients modulo p^B, B = ceil(N/(p-1)) + 1, and are meaningful
modulo pi^N. Dwork's pi is the root of X^(p-1) + p congruent to lambda
modulo lambda^2.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .cyclotomic import CycInt, exp_sum, to_lambda_basis, vp_int
from .fields import UniPoly, prime_field
from .strata import StratumParams, ceil_div


class PrecisionError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _eisenstein(p: int) -> tuple[int, ...]:
    # lambda^(p-1) = -sum_{k<p-1} binom(p, k+1) lambda^k
    return tuple(math.comb(p, k + 1) for k in range(p - 1))


class TruncatedCyc:
    """Element of Z_p[zeta_p] modulo pi^N."""

    __slots__ = ("p", "N", "B", "modulus", "coords")

    def __init__(self, p: int, N: int, coords: Sequence[int]):
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates")
        self.p = p
        self.N = N
        self.B = ceil_div(N, p - 1) + 1
        self.modulus = p**self.B
        self.coords = tuple(int(c) % self.modulus for c in coords)

    @classmethod
    def from_int(cls, p: int, N: int, n: int) -> TruncatedCyc:
        return cls(p, N, [n] + [0] * (p - 2))

    @classmethod
    def lam(cls, p: int, N: int) -> TruncatedCyc:
        coords = [0] * (p - 1)
        coords[1 % (p - 1)] += 1
        return cls(p, N, coords)

    @classmethod
    def from_cycint(cls, x: CycInt, N: int) -> TruncatedCyc:
        return cls(x.p, N, to_lambda_basis(x.coords))

    def _coerce(self, other: TruncatedCyc | int) -> TruncatedCyc:
        if isinstance(other, int):
            return TruncatedCyc.from_int(self.p, self.N, other)
        if other.p != self.p:
            raise ValueError("different primes")
        if other.N != self.N:
            raise PrecisionError(f"precision mismatch {self.N} vs {other.N}")
        return other

    def __add__(self, other: TruncatedCyc | int) -> TruncatedCyc:
        other = self._coerce(other)
        return TruncatedCyc(self.p, self.N, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self) -> TruncatedCyc:
        return TruncatedCyc(self.p, self.N, [-a for a in self.coords])

    def __sub__(self, other: TruncatedCyc | int) -> TruncatedCyc:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> TruncatedCyc:
        return (-self) + other

    def __mul__(self, other: TruncatedCyc | int) -> TruncatedCyc:
        if isinstance(other, int):
            return TruncatedCyc(self.p, self.N, [other * a for a in self.coords])
        other = self._coerce(other)
        p, mod = self.p, self.modulus
        n = p - 1
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        eis = _eisenstein(p)
        for top in range(len(prod) - 1, n - 1, -1):
            c = prod[top] % mod
            if c:
                base = top - n
                for k, e in enumerate(eis):
                    prod[base + k] -= c * e
        return TruncatedCyc(p, self.N, prod[:n])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> TruncatedCyc:
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedCyc.from_int(self.p, self.N, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def valuation(self) -> float:
        """pi-adic valuation of this representative; ``math.inf`` if all coordinates vanish."""
        best = math.inf
        for k, b in enumerate(self.coords):
            if b:
                best = min(best, (self.p - 1) * vp_int(b, self.p) + k)
        return best

    def is_unit(self) -> bool:
        return self.coords[0] % self.p != 0

    def inverse(self) -> TruncatedCyc:
        """Inverse of a unit by Newton iteration y <- y (2 - x y)."""
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        y = TruncatedCyc.from_int(self.p, self.N, pow(self.coords[0], -1, self.p))
        for _ in range(4 * max(self.N, 2).bit_length() + 8):
            err = 1 - self * y
            if err.is_zero_exact():
                return y
            y = y + y * err
        raise PrecisionError("inverse iteration did not stabilize")

    def is_zero_exact(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = TruncatedCyc.from_int(self.p, self.N, other)
        if not isinstance(other, TruncatedCyc):
            return NotImplemented
        return self.p == other.p and (self - other).valuation() >= min(self.N, other.N)

    def __hash__(self):
        raise TypeError("TruncatedCyc is compared up to precision and is unhashable")

    def truncate(self, N: int) -> TruncatedCyc:
        if N > self.N:
            raise PrecisionError("cannot raise precision by truncation")
        return TruncatedCyc(self.p, N, self.coords)

    def __repr__(self) -> str:
        return f"TruncatedCyc(p={self.p}, N={self.N}, {list(self.coords)})"


@lru_cache(maxsize=None)
def dwork_pi(p: int, N: int, branch: int = 1) -> TruncatedCyc:
    """Root of X^(p-1) + p; ``branch=1`` is the one congruent to zeta - 1 mod (zeta - 1)^2.

    Other branches are ``teichmuller(branch) * pi``. With lambda = zeta - 1 one
    has lambda^(p-1) = -p w for a unit w = 1 + O(lambda), so pi = lambda u with
    u^(p-1) w = 1, solved by Newton's method from u = 1.
    """
    if N < 2:
        raise ValueError("precision must be >= 2")
    if not 1 <= branch <= p - 1:
        raise ValueError(f"branch must lie in 1..{p - 1}")
    w = TruncatedCyc(p, N, [c // p for c in _eisenstein(p)])
    u = TruncatedCyc.from_int(p, N, 1)
    for _ in range(4 * N.bit_length() + 8):
        residual = u ** (p - 1) * w - 1
        if residual.valuation() >= N:
            break
        slope = (u ** (p - 2) * w) * (p - 1)
        u = u - residual * slope.inverse()
    else:
        raise PrecisionError(f"Newton iteration for pi did not converge at p={p}, N={N}")
    pi = TruncatedCyc.lam(p, N) * u
    if branch != 1:
        pi = pi * teichmuller(branch, p, N)
    check = pi ** (p - 1) + p
    if check.valuation() < N:
        raise PrecisionError("pi^(p-1) + p does not vanish to the requested precision")
    return pi


def teichmuller_int(a: int, p: int, B: int) -> int:
    """Teichmuller representative of a mod p, as an integer mod p^B."""
    mod = p**B
    t = a % p
    while True:
        nxt = pow(t, p, mod)
        if nxt == t:
            return t
        t = nxt


def teichmuller(a: int, p: int, N: int) -> TruncatedCyc:
    """omega(a) with omega(a)^p = omega(a) and omega(a) = a mod p."""
    B = ceil_div(N, p - 1) + 1
    return TruncatedCyc.from_int(p, N, teichmuller_int(a, p, B))


@dataclass
class CongruenceReport:
    p: int
    d: int
    coeffs: list[int]
    precision: int
    branch: int
    lhs: TruncatedCyc
    rhs: TruncatedCyc
    valuation_of_difference: float
    passed: bool
    literal_valuation: float
    passing_branches: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        v = self.valuation_of_difference
        return {
            "p": self.p,
            "d": self.d,
            "coeffs": self.coeffs,
            "precision": self.precision,
            "branch": self.branch,
            "lhs": [str(c) for c in self.lhs.coords],
            "rhs": [str(c) for c in self.rhs.coords],
            "valuation_of_difference": "inf" if v == math.inf else int(v),
            "pass": self.passed,
            "literal_valuation": "inf" if self.literal_valuation == math.inf else int(self.literal_valuation),
            "passing_branches": self.passing_branches,
        }


def congruence_series(coeffs: Sequence[int], p: int, N: int, branch: int = 1) -> TruncatedCyc:
    """sum_{k=ceil((p-1)/d)}^{p-1} sum_{i=1}^{d-1} {g^k}_{(p-1)i} pi^k / k!.

    ``g`` carries the Teichmuller lifts of ``coeffs`` (constant term first,
    which must be zero); {g^k}_n is the X^n coefficient of g^k, computed with
    integer arithmetic modulo p^B.
    """
    d = len(coeffs) - 1
    B = ceil_div(N, p - 1) + 1
    mod = p**B
    g = [teichmuller_int(c, p, B) for c in coeffs]
    pi = dwork_pi(p, N, branch)
    total = TruncatedCyc.from_int(p, N, 0)
    power = [1]
    pi_k = TruncatedCyc.from_int(p, N, 1)
    fact = 1
    for k in range(1, p):
        power = _int_poly_mul(power, g, mod)
        pi_k = pi_k * pi
        fact *= k
        if k < ceil_div(p - 1, d):
            continue
        inner = sum(power[(p - 1) * i] for i in range(1, d) if (p - 1) * i < len(power)) % mod
        if inner:
            total = total + pi_k * (inner * pow(fact, -1, mod) % mod)
    return total


def _int_poly_mul(a: Sequence[int], b: Sequence[int], mod: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % mod
    return out


def trace_congruence_check(coeffs: Sequence[int], p: int, N: int | None = None,
                           branch: int = 1, scan_branches: bool = True) -> CongruenceReport:
    """Check S_1(f) = -congruence_series(f) modulo p*pi.

    The minus sign comes from L(f, T) = exp(sum S_r T^r / r) = det(1 - T Gamma),
    which makes S_1 the negated trace of Gamma. ``literal_valuation`` records
    the valuation of S_1 - series as well, for comparison.

    ``coeffs`` lists f over F_p, constant term first; f(0) must be 0. When the
    chosen branch fails and ``scan_branches`` is set, every branch of pi is
    tried and the passing ones are recorded in the report.
    """
    coeffs = [int(c) % p for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    d = len(coeffs) - 1
    StratumParams(d, p).require_congruence_tier()
    if coeffs[0] != 0:
        raise ValueError("f(0) must be 0")
    N = p + 1 if N is None else N
    if N < p + 1:
        raise PrecisionError(f"precision N={N} is below p+1={p + 1}")
    f = UniPoly.from_ints(prime_field(p), coeffs)
    lhs = TruncatedCyc.from_cycint(exp_sum(f, 1), N)

    def run(br: int) -> tuple[TruncatedCyc, float, float]:
        series = congruence_series(coeffs, p, N, br)
        return -series, (lhs + series).valuation(), (lhs - series).valuation()

    rhs, v, literal = run(branch)
    passed = v >= p
    passing = [branch] if passed else []
    if not passed and scan_branches:
        passing = [br for br in range(1, p) if run(br)[1] >= p]
    return CongruenceReport(p, d, coeffs, N, branch, lhs, rhs, v, passed, literal, passing)
