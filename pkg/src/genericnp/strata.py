"""Permutation combinatorics behind the generic Newton polygon.

For a pair (d, p) with gcd(p, d) = 1 this module computes the residues
``j_i``, the sets ``B_n``, the minima ``Y_n`` and the minimizing permutation
sets ``Sigma_n``, ``Sigma_n^+`` together with the distinguished permutation
``sigma_0`` used to certify that the Hasse polynomials do not vanish.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

BRUTE_FORCE_CAP = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def ceil_div(a: int, b: int) -> int:
    """Ceiling of a/b for b > 0, valid for negative a."""
    return -((-a) // b)


@dataclass(frozen=True)
class StratumParams:
    """Degree ``d`` and characteristic ``p`` of the family of polynomials."""

    d: int
    p: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"degree must be >= 2, got {self.d}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if math.gcd(self.p, self.d) != 1:
            raise ValueError(f"p={self.p} divides d={self.d}")

    @property
    def tier_congruence(self) -> bool:
        return self.p >= self.d + 3

    @property
    def tier_generic(self) -> bool:
        return self.p >= 3 * self.d

    def require_generic_tier(self) -> None:
        if not self.tier_generic:
            raise ValueError(f"need p >= 3d, got d={self.d}, p={self.p}")

    def require_congruence_tier(self) -> None:
        if not self.tier_congruence:
            raise ValueError(f"need p >= d+3, got d={self.d}, p={self.p}")

    @cached_property
    def residues(self) -> tuple[int, ...]:
        # residues[i - 1] == j_i
        return tuple((self.p * i) % self.d for i in range(1, self.d))


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    @cached_property
    def sign(self) -> int:
        seen = [False] * len(self.images)
        parity = 0
        for start in range(len(self.images)):
            if seen[start]:
                continue
            length = 0
            k = start
            while not seen[k]:
                seen[k] = True
                k = self.images[k] - 1
                length += 1
            parity += length - 1
        return -1 if parity % 2 else 1

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{i}->{s}" for i, s in enumerate(self.images, 1)) + ")"


def _check_n(params: StratumParams, n: int, low: int = 1) -> None:
    if not low <= n <= params.d - 1:
        raise ValueError(f"n must lie in {low}..{params.d - 1}, got {n}")


def residue_j(params: StratumParams, i: int) -> int:
    """Least positive integer congruent to p*i modulo d, for 1 <= i <= d-1."""
    if not 1 <= i <= params.d - 1:
        raise ValueError(f"i must lie in 1..{params.d - 1}, got {i}")
    return params.residues[i - 1]


def b_set(params: StratumParams, n: int) -> frozenset[int]:
    """Indices i <= n whose residue j_i is also <= n."""
    _check_n(params, n)
    return frozenset(i for i in range(1, n + 1) if residue_j(params, i) <= n)


def permutation_weight(params: StratumParams, sigma: Permutation) -> int:
    """Sum over k of ceil((p*k - sigma(k)) / d)."""
    p, d = params.p, params.d
    return sum(ceil_div(p * k - s, d) for k, s in enumerate(sigma.images, 1))


def y_n(params: StratumParams, n: int) -> int:
    """Closed form of the minimal permutation weight; ``y_n(params, 0) == 0``."""
    _check_n(params, n, low=0)
    if n == 0:
        return 0
    p, d = params.p, params.d
    return sum(ceil_div(p * k, d) for k in range(1, n + 1)) - len(b_set(params, n))


def y_n_bruteforce(params: StratumParams, n: int, cap: int = BRUTE_FORCE_CAP) -> int:
    """Minimum of the permutation weight over all of S_n, by enumeration."""
    _check_n(params, n)
    if n > cap:
        raise ValueError(f"n={n} exceeds the brute-force cap {cap}")
    return min(permutation_weight(params, s) for s in all_permutations(n))


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(t) for t in itertools.permutations(range(1, n + 1))]


def sigma_set(params: StratumParams, n: int) -> list[Permutation]:
    """Permutations with sigma(i) >= j_i for every i in B_n.

    These are exactly the permutations attaining ``y_n``; the result is
    sorted lexicographically by images.
    """
    _check_n(params, n)
    bn = b_set(params, n)
    return [
        s for s in all_permutations(n)
        if all(s(i) >= residue_j(params, i) for i in bn)
    ]


def sigma_set_bruteforce(params: StratumParams, n: int, cap: int = BRUTE_FORCE_CAP) -> list[Permutation]:
    _check_n(params, n)
    if n > cap:
        raise ValueError(f"n={n} exceeds the brute-force cap {cap}")
    perms = all_permutations(n)
    weights = [permutation_weight(params, s) for s in perms]
    best = min(weights)
    return [s for s, w in zip(perms, weights) if w == best]


def sigma_plus(params: StratumParams, n: int) -> list[Permutation]:
    """Members of ``sigma_set`` with sigma(i) == j_i on all of B_n."""
    bn = b_set(params, n)
    return [s for s in sigma_set(params, n) if all(s(i) == residue_j(params, i) for i in bn)]


def sigma_zero(params: StratumParams, n: int) -> Permutation:
    """Greedy member of ``sigma_plus`` whose witness monomial is unique.

    Indices in B_n are sent to their residue. The remaining indices are
    processed by decreasing residue, each receiving the smallest image
    still free.
    """
    _check_n(params, n)
    bn = b_set(params, n)
    images = {i: residue_j(params, i) for i in bn}
    free = sorted(set(range(1, n + 1)) - set(images.values()))
    rest = sorted((i for i in range(1, n + 1) if i not in bn),
                  key=lambda i: residue_j(params, i), reverse=True)
    for i, image in zip(rest, free):
        images[i] = image
    return Permutation(tuple(images[i] for i in range(1, n + 1)))
