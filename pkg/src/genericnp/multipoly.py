"""Sparse multivariate polynomials over F_p and the Hasse polynomials.

The generic polynomial ``g = a_1 X + ... + a_d X^d`` is treated with
indeterminate coefficients ``X_1..X_d`` (one variable per coefficient).
``power_coefficient(params, k, n)`` is the coefficient of ``X^n`` in ``g^k``
as a polynomial in those variables; the Hasse polynomials are signed sums
of products of such coefficients over the minimizing permutations.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from functools import lru_cache
from typing import Any

from .strata import StratumParams, b_set, ceil_div, residue_j, sigma_set, sigma_zero

Monomial = tuple[int, ...]


class FpMultiPoly:
    """Immutable sparse polynomial over F_p in ``nvars`` variables.

    Terms map dense exponent tuples to nonzero residues in 1..p-1. The zero
    polynomial has no terms and degree ``-math.inf``.
    """

    __slots__ = ("p", "nvars", "_terms")

    def __init__(self, p: int, nvars: int, terms: Mapping[Monomial, int] | None = None):
        self.p = p
        self.nvars = nvars
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"exponent {mono} has wrong length for {nvars} variables")
            c %= p
            if c:
                clean[tuple(mono)] = c
        self._terms = clean

    @classmethod
    def constant(cls, p: int, nvars: int, c: int) -> FpMultiPoly:
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, p: int, nvars: int, i: int) -> FpMultiPoly:
        """The variable ``X_i`` (1-based)."""
        mono = [0] * nvars
        mono[i - 1] = 1
        return cls(p, nvars, {tuple(mono): 1})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[Monomial, int]]:
        return self._terms.items()

    def coefficient(self, mono: Sequence[int]) -> int:
        return self._terms.get(tuple(mono), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMultiPoly):
            return NotImplemented
        return (self.p, self.nvars, self._terms) == (other.p, other.nvars, other._terms)

    def __hash__(self) -> int:
        return hash((self.p, self.nvars, frozenset(self._terms.items())))

    def _check(self, other: FpMultiPoly) -> None:
        if self.p != other.p or self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: FpMultiPoly) -> FpMultiPoly:
        self._check(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return FpMultiPoly(self.p, self.nvars, out)

    def __neg__(self) -> FpMultiPoly:
        return FpMultiPoly(self.p, self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: FpMultiPoly) -> FpMultiPoly:
        return self + (-other)

    def scale(self, c: int) -> FpMultiPoly:
        return FpMultiPoly(self.p, self.nvars, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other: FpMultiPoly | int) -> FpMultiPoly:
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.p
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return FpMultiPoly(p, self.nvars, out)

    __rmul__ = __mul__

    def total_degree(self) -> float:
        if not self._terms:
            return -math.inf
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int) -> float:
        if not self._terms:
            return -math.inf
        return max(m[i - 1] for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def substitute(self, values: Mapping[int, int]) -> FpMultiPoly:
        """Specialize variables ``X_i := values[i]`` (constants in F_p) and drop them.

        The remaining variables keep their relative order.
        """
        keep = [i for i in range(1, self.nvars + 1) if i not in values]
        out: dict[Monomial, int] = {}
        for mono, c in self._terms.items():
            for i, v in values.items():
                e = mono[i - 1]
                if e:
                    c = c * pow(v, e, self.p) % self.p
                    if not c:
                        break
            if not c:
                continue
            m = tuple(mono[i - 1] for i in keep)
            out[m] = (out.get(m, 0) + c) % self.p
        return FpMultiPoly(self.p, len(keep), out)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in decreasing graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def evaluate(self, point: Sequence[Any]) -> Any:
        """Evaluate at a point whose entries support ``+``, ``*``, ``**`` and int scaling.

        Entries are typically :class:`genericnp.fields.FieldElement`; plain
        ints are reduced mod p. The field characteristic must equal p.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        if all(isinstance(x, int) for x in point):
            total = 0
            for mono, c in self._terms.items():
                term = c
                for x, e in zip(point, mono):
                    term = term * pow(x, e, self.p) % self.p
                total = (total + term) % self.p
            return total
        field = next(x.field for x in point if not isinstance(x, int))
        if field.p != self.p:
            raise ValueError(f"field characteristic {field.p} does not match modulus {self.p}")
        xs = [field(x) if isinstance(x, int) else x for x in point]
        total = field.zero()
        for mono, c in self._terms.items():
            term = field(c)
            for x, e in zip(xs, mono):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"FpMultiPoly(p={self.p}, {to_text(self)})"


def to_text(poly: FpMultiPoly) -> str:
    """Canonical text form, e.g. ``4*X1*X3^3+6*X2^2*X3^2``; ``0`` for zero."""
    if poly.is_zero():
        return "0"
    parts = []
    for mono, c in poly.sorted_terms():
        factors = [str(c)] if c != 1 or not any(mono) else []
        for i, e in enumerate(mono, 1):
            if e == 1:
                factors.append(f"X{i}")
            elif e > 1:
                factors.append(f"X{i}^{e}")
        parts.append("*".join(factors))
    return "+".join(parts)


def from_text(text: str, p: int, nvars: int) -> FpMultiPoly:
    """Parse the canonical text form back into a polynomial."""
    text = text.strip()
    terms: dict[Monomial, int] = {}
    if text == "0":
        return FpMultiPoly(p, nvars)
    for part in text.split("+"):
        c = 1
        mono = [0] * nvars
        for factor in part.split("*"):
            if factor.startswith("X"):
                name, _, exp = factor.partition("^")
                mono[int(name[1:]) - 1] += int(exp) if exp else 1
            else:
                c *= int(factor)
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + c
    return FpMultiPoly(p, nvars, terms)


@lru_cache(maxsize=None)
def _codegree_power(p: int, d: int, k: int, top: int) -> tuple[dict[Monomial, int], ...]:
    """Powers of ``1 + sum_j Y_j U^j`` truncated at ``U^top``.

    Here ``Y_j`` stands for ``X_{d-j}/X_d`` (j = 1..d-1), so that
    ``g^k = (X_d T^d)^k (1 + sum_j Y_j T^{-j})^k``. Entry e of the result
    maps exponent tuples of (Y_1..Y_{d-1}) to their coefficient mod p.
    """
    if k == 0:
        return ({(0,) * (d - 1): 1},) + ({},) * top
    half = _codegree_power(p, d, k // 2, top)
    result = _truncated_mul(p, half, half, top)
    if k % 2:
        base = [{} for _ in range(top + 1)]
        base[0][(0,) * (d - 1)] = 1
        for j in range(1, min(d - 1, top) + 1):
            mono = [0] * (d - 1)
            mono[j - 1] = 1
            base[j][tuple(mono)] = 1
        result = _truncated_mul(p, result, tuple(base), top)
    return result


def _truncated_mul(p, a, b, top):
    out = [dict() for _ in range(top + 1)]
    for e1, poly1 in enumerate(a):
        if not poly1:
            continue
        for e2 in range(top - e1 + 1):
            poly2 = b[e2]
            if not poly2:
                continue
            acc = out[e1 + e2]
            for m1, c1 in poly1.items():
                for m2, c2 in poly2.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    acc[m] = (acc.get(m, 0) + c1 * c2) % p
    return tuple({m: c for m, c in acc.items() if c} for acc in out)


def power_coefficient(params: StratumParams, k: int, n: int) -> FpMultiPoly:
    """Coefficient of ``X^n`` in ``(X_1 X + X_2 X^2 + ... + X_d X^d)^k`` mod p.

    Every monomial ``X_1^{m_1}...X_d^{m_d}`` in the result has
    ``sum m_i == k`` and ``sum i*m_i == n``. Computed by truncated powering in
    the co-degree ``d*k - n``, which stays small for the coefficients that
    enter the Hasse polynomials.
    """
    p, d = params.p, params.d
    if k < 0 or n < 0:
        raise ValueError("k and n must be nonnegative")
    codeg = d * k - n
    if codeg < 0 or n < k:
        return FpMultiPoly(p, d)
    series = _codegree_power(p, d, k, codeg)
    terms: dict[Monomial, int] = {}
    for ymono, c in series[codeg].items():
        # Y_j = X_{d-j} / X_d
        mono = [0] * d
        for j, e in enumerate(ymono, 1):
            mono[d - j - 1] += e
        mono[d - 1] = k - sum(ymono)
        terms[tuple(mono)] = c
    return FpMultiPoly(p, d, terms)


def power_coefficient_enumerated(params: StratumParams, k: int, n: int) -> FpMultiPoly:
    """Same as :func:`power_coefficient`, by enumerating multinomial exponents."""
    p, d = params.p, params.d
    terms: dict[Monomial, int] = {}

    def rec(i: int, left_k: int, left_n: int, acc: list[int]) -> None:
        if i == d:
            if left_n == d * left_k:
                mono = acc + [left_k]
                coeff = math.factorial(k)
                for e in mono:
                    coeff //= math.factorial(e)
                terms[tuple(mono)] = coeff
            return
        for e in range(0, min(left_k, left_n // i) + 1):
            rec(i + 1, left_k - e, left_n - i * e, acc + [e])

    if k >= 0 and n >= 0:
        rec(1, k, n, [])
    return FpMultiPoly(p, d, terms)


@lru_cache(maxsize=None)
def hasse_P_n(params: StratumParams, n: int) -> FpMultiPoly:
    """Signed sum over Sigma_n of products of power coefficients, reduced mod p."""
    p, d = params.p, params.d
    total = FpMultiPoly(p, d)
    for sigma in sigma_set(params, n):
        prod = FpMultiPoly.constant(p, d, sigma.sign)
        for i in range(1, n + 1):
            shift = p * i - sigma(i)
            prod = prod * power_coefficient(params, ceil_div(shift, d), shift)
            if prod.is_zero():
                break
        total = total + prod
    return total


def hasse_product(params: StratumParams) -> FpMultiPoly:
    """Product of P_1 .. P_{floor(d/2)}."""
    out = FpMultiPoly.constant(params.p, params.d, 1)
    for n in range(1, params.d // 2 + 1):
        out = out * hasse_P_n(params, n)
    return out


def hasse_G(params: StratumParams) -> FpMultiPoly:
    """Hasse polynomial for all monic polynomials: ``P_{d,p}(X_1..X_{d-1}, 1)``."""
    return hasse_product(params).substitute({params.d: 1})


def hasse_H(params: StratumParams) -> FpMultiPoly:
    """Hasse polynomial for normalized polynomials: ``P_{d,p}(X_1..X_{d-2}, 0, 1)``."""
    return hasse_product(params).substitute({params.d - 1: 0, params.d: 1})


def degree_bound_G(d: int) -> float:
    h = d // 2
    return (d - 1) / 2 * h * (h + 1)


def degree_bound_H(d: int) -> float:
    h = d // 2
    return (d - 1) / 4 * h * (h + 1)


def witness_monomial(params: StratumParams, n: int) -> tuple[Monomial, int]:
    """Monomial of P_n attached to sigma_0 and its predicted coefficient mod p.

    ``X_d^{sum floor(p i/d)} * prod_{i not in B_n} X_{j_i - sigma_0(i)}`` with
    coefficient ``sgn(sigma_0) * prod_{i not in B_n} ceil((p i - sigma_0(i))/d)``.
    """
    p, d = params.p, params.d
    bn = b_set(params, n)
    s0 = sigma_zero(params, n)
    mono = [0] * d
    mono[d - 1] = sum(p * i // d for i in range(1, n + 1))
    coeff = s0.sign
    for i in range(1, n + 1):
        if i in bn:
            continue
        mono[residue_j(params, i) - s0(i) - 1] += 1
        coeff *= ceil_div(p * i - s0(i), d)
    return tuple(mono), coeff % p

