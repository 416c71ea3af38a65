"""Finite fields F_p, F_q and towers F_{q^r}, flattened to vectors over F_p.

Every field is stored as F_p^s together with a multiplication tensor, so an
extension of an extension multiplies exactly like a simple extension and
whole-field arithmetic vectorizes with numpy. A field built with
:func:`extend` records its base field; the base embeds as the ``Y^0``
coordinate block, which makes ``F_q -> F_{q^r}`` canonical.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .strata import is_prime

ENUMERATION_CAP = 10**8
MODULI_CACHE_ENV = "GENERICNP_MODULI_DIR"


class FieldElement:
    """Element of an :class:`ExtensionField`, as coordinates in its basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: ExtensionField, coords: Sequence[int]):
        if len(coords) != field.s:
            raise ValueError(f"expected {field.s} coordinates, got {len(coords)}")
        self.field = field
        self.coords = tuple(int(c) % field.p for c in coords)

    def _coerce(self, other: FieldElement | int) -> FieldElement:
        if isinstance(other, int):
            return self.field(other)
        if other.field is not self.field:
            if other.field.p != self.field.p:
                raise ValueError("elements of fields with different characteristic")
            return embed(other, self.field)
        return other

    def __add__(self, other: FieldElement | int) -> FieldElement:
        other = self._coerce(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> FieldElement:
        return self.field(other) - self

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        other = self._coerce(other)
        return FieldElement(self.field, self.field.multiply(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((id(self.field), self.coords))

    def frobenius(self, times: int = 1) -> FieldElement:
        return self ** (self.field.p ** times)

    def __repr__(self) -> str:
        if self.field.s == 1:
            return f"{self.coords[0]}"
        return f"[{','.join(map(str, self.coords))}]"

    def to_json(self) -> list[int]:
        return list(self.coords)


class ExtensionField:
    """A finite field of order p**s.

    Args:
        p: characteristic.
        base: field this one extends, or None for the prime field.
        modulus: monic irreducible polynomial over ``base`` as a list of base
            elements, constant term first. Ignored for the prime field.
    """

    def __init__(self, p: int, base: ExtensionField | None = None,
                 modulus: Sequence[FieldElement] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.base = base
        if base is None:
            self.s = 1
            self.modulus: tuple[FieldElement, ...] = ()
            self._tensor = np.ones((1, 1, 1), dtype=np.int64)
        else:
            if base.p != p:
                raise ValueError("base field has a different characteristic")
            mod = tuple(base(c) if isinstance(c, int) else c for c in modulus)
            if not mod[-1] == base.one():
                raise ValueError("modulus must be monic")
            if not is_irreducible(mod):
                raise ValueError("modulus is not irreducible")
            self.modulus = mod
            self.degree = len(mod) - 1
            self.s = base.s * self.degree
            self._tensor = _tower_tensor(base, mod)
        if base is None:
            self.degree = 1
        self._mul_table = self._tensor.tolist()

    def __call__(self, x: int | FieldElement | Sequence[int]) -> FieldElement:
        if isinstance(x, FieldElement):
            return x if x.field is self else embed(x, self)
        if isinstance(x, int):
            return FieldElement(self, [x] + [0] * (self.s - 1))
        return FieldElement(self, list(x))

    @property
    def order(self) -> int:
        return self.p ** self.s

    def zero(self) -> FieldElement:
        return FieldElement(self, [0] * self.s)

    def one(self) -> FieldElement:
        return self(1)

    def generator(self) -> FieldElement:
        """The root ``Y`` of the modulus, as an element of this field."""
        if self.base is None:
            return self.one()
        coords = [0] * self.s
        if self.degree > 1:
            coords[self.base.s] = 1
        else:
            return self(-self.modulus[0])
        return FieldElement(self, coords)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        p, s, table = self.p, self.s, self._mul_table
        out = [0] * s
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for k, t in enumerate(row[j]):
                    if t:
                        out[k] += c * t
        return [x % p for x in out]

    def multiply_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-wise product of two ``(N, s)`` coordinate arrays."""
        s = self.s
        outer = (a[:, :, None] * b[:, None, :]).reshape(-1, s * s) % self.p
        return (outer @ self._tensor.reshape(s * s, s)) % self.p

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """Absolute traces of the basis vectors (trace of multiplication maps)."""
        return np.array([int(np.trace(self._tensor[k])) % self.p for k in range(self.s)],
                        dtype=np.int64)

    def elements_array(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        """All elements as an ``(order, s)`` array, lexicographic in coordinates."""
        if self.order > cap:
            raise ValueError(f"field of order {self.order} exceeds enumeration cap {cap}")
        grids = np.indices((self.p,) * self.s, dtype=np.int64)
        return grids.reshape(self.s, -1).T.copy()

    def elements_chunk(self, start: int, stop: int) -> np.ndarray:
        """Rows ``start..stop-1`` of :meth:`elements_array`, without building the rest."""
        idx = np.arange(start, min(stop, self.order), dtype=np.int64)
        weights = self.p ** np.arange(self.s - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // weights[None, :]) % self.p

    def chain(self) -> list[ExtensionField]:
        """This field followed by its successive base fields."""
        out = [self]
        while out[-1].base is not None:
            out.append(out[-1].base)
        return out

    def describe(self) -> dict:
        return {
            "p": self.p,
            "degree": self.s,
            "moduli": [[c.to_json() for c in f.modulus] for f in reversed(self.chain()) if f.base],
        }

    def __repr__(self) -> str:
        return f"ExtensionField(p={self.p}, s={self.s})"


def _tower_tensor(base: ExtensionField, modulus: Sequence[FieldElement]) -> np.ndarray:
    r = len(modulus) - 1
    m = base.s
    s = m * r
    tensor = np.zeros((s, s, s), dtype=np.int64)
    basis = [FieldElement(base, [int(c == i) for c in range(m)]) for i in range(m)]
    for (j1, c1), (j2, c2) in itertools.product(itertools.product(range(r), range(m)), repeat=2):
        poly = [base.zero()] * (j1 + j2) + [basis[c1] * basis[c2]]
        poly = poly_mod(poly, modulus)
        flat = []
        for coeff in poly + [base.zero()] * (r - len(poly)):
            flat.extend(coeff.coords)
        tensor[j1 * m + c1, j2 * m + c2] = flat
    return tensor


# Univariate polynomials over a field, as lists of FieldElements (constant first).

def poly_trim(a: list[FieldElement]) -> list[FieldElement]:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def poly_mul(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    if not a or not b:
        return []
    field = a[0].field
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_sub(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    field = (a or b)[0].field
    n = max(len(a), len(b))
    a = list(a) + [field.zero()] * (n - len(a))
    b = list(b) + [field.zero()] * (n - len(b))
    return poly_trim([x - y for x, y in zip(a, b)])


def poly_divmod(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> tuple[list, list]:
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = poly_trim(list(a))
    field = b[0].field
    inv_lead = b[-1].inverse()
    quot = [field.zero()] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = a[shift + i] - c * y
        a = poly_trim(a)
    return poly_trim(quot), a


def poly_mod(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    return poly_divmod(a, b)[1]


def poly_gcd(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_powmod(a: Sequence[FieldElement], e: int, mod: Sequence[FieldElement]) -> list[FieldElement]:
    field = mod[0].field
    result = [field.one()]
    base = poly_mod(a, mod)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base), mod)
        base = poly_mod(poly_mul(base, base), mod)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: Sequence[FieldElement]) -> bool:
    """Rabin's test for a monic polynomial over a finite field."""
    poly = poly_trim(list(poly))
    r = len(poly) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    field = poly[0].field
    q = field.order
    y = [field.zero(), field.one()]
    # y^(q^k) mod poly, by repeated q-th powers
    frob = [y]
    for _ in range(r):
        frob.append(poly_powmod(frob[-1], q, poly))
    if poly_sub(frob[r], y):
        return False
    for ell in _prime_factors(r):
        g = poly_gcd(poly, poly_sub(frob[r // ell], y))
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def prime_field(p: int) -> ExtensionField:
    return ExtensionField(p)


def extend(base: ExtensionField, r: int, seed: int = 0) -> ExtensionField:
    """Degree-r extension of ``base`` with a seeded irreducible modulus.

    Candidates are random monic polynomials drawn from ``random.Random(seed)``;
    the first irreducible one is used. ``r == 1`` returns ``base`` itself.
    """
    return _extend_cached(base, r, seed)


@lru_cache(maxsize=None)
def _extend_cached(base: ExtensionField, r: int, seed: int) -> ExtensionField:
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    if r == 1:
        return base
    key = f"{base.describe()['moduli']}|{base.p}|{r}|{seed}"
    cached = _load_modulus(key)
    if cached is not None:
        modulus = [base(c) for c in cached]
        if is_irreducible(modulus):
            return ExtensionField(base.p, base, modulus)
    rng = random.Random(seed)
    while True:
        coeffs = [base([rng.randrange(base.p) for _ in range(base.s)]) for _ in range(r)]
        candidate = coeffs + [base.one()]
        if is_irreducible(candidate):
            _store_modulus(key, [c.to_json() for c in candidate])
            return ExtensionField(base.p, base, candidate)


def _cache_path() -> str | None:
    directory = os.environ.get(MODULI_CACHE_ENV)
    return os.path.join(directory, "moduli.json") if directory else None


def _load_modulus(key: str) -> list | None:
    path = _cache_path()
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        return json.load(fh).get(key)


def _store_modulus(key: str, modulus: list) -> None:
    path = _cache_path()
    if not path:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    data = {}
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
    data[key] = modulus
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)


def build_field(p: int, s: int, seed: int = 0) -> ExtensionField:
    """F_{p^s} as a simple extension of F_p."""
    return extend(prime_field(p), s, seed)


def embed(x: FieldElement, target: ExtensionField) -> FieldElement:
    """Image of ``x`` in a tower extension ``target`` of its field."""
    if x.field is target:
        return x
    if x.field not in target.chain():
        raise ValueError(f"no embedding recorded from {x.field} into {target}")
    coords = list(x.coords)
    field = x.field
    chain = target.chain()
    for upper in reversed(chain[: chain.index(field)]):
        coords = coords + [0] * (upper.s - len(coords))
    return FieldElement(target, coords)


def embed_array(coords: np.ndarray, source: ExtensionField, target: ExtensionField) -> np.ndarray:
    if source not in target.chain():
        raise ValueError(f"no embedding recorded from {source} into {target}")
    out = np.zeros(coords.shape[:-1] + (target.s,), dtype=np.int64)
    out[..., : source.s] = coords
    return out


def absolute_trace(x: FieldElement) -> int:
    """``x + x^p + ... + x^(p^(s-1))``, returned as a residue mod p."""
    total = x.field.zero()
    y = x
    for _ in range(x.field.s):
        total = total + y
        y = y ** x.field.p
    if any(total.coords[1:]):
        raise ArithmeticError("trace did not land in the prime field")
    return total.coords[0]


def relative_trace(x: FieldElement) -> FieldElement:
    """Trace from ``x.field`` down to its recorded base field."""
    field = x.field
    if field.base is None:
        return x
    q = field.base.order
    total = field.zero()
    y = x
    for _ in range(field.degree):
        total = total + y
        y = y ** q
    if any(total.coords[field.base.s:]):
        raise ArithmeticError("relative trace did not land in the base field")
    return FieldElement(field.base, total.coords[: field.base.s])


def enumerate_field(field: ExtensionField, cap: int = ENUMERATION_CAP) -> Iterator[FieldElement]:
    """Every element once, lexicographic in coordinates."""
    if field.order > cap:
        raise ValueError(f"field of order {field.order} exceeds enumeration cap {cap}")
    for coords in itertools.product(range(field.p), repeat=field.s):
        yield FieldElement(field, coords)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial over a finite field, constant term first."""

    field: ExtensionField
    coeffs: tuple[FieldElement, ...]

    @classmethod
    def from_ints(cls, field: ExtensionField, coeffs: Sequence[int | Sequence[int]]) -> UniPoly:
        return cls(field, tuple(field(c if isinstance(c, int) else list(c)) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(poly_trim(list(self.coeffs))) - 1

    def is_monic(self) -> bool:
        return self.degree >= 0 and self.coeffs[self.degree] == self.field.one()

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = x.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coeff_arrays(self) -> np.ndarray:
        return np.array([c.coords for c in self.coeffs], dtype=np.int64)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if c == self.field.one() and mono:
                terms.append(mono)
            else:
                terms.append(f"{c!r}*{mono}" if mono else f"{c!r}")
        return " + ".join(reversed(terms)) or "0"
