"""Stratum census: compare actual Newton polygons with the Hasse criterion.

For every normalized polynomial ``x^d + a_{d-2} x^{d-2} + ... + a_1 x`` in the
census, the Newton polygon is computed from the exact L-function and,
separately, the Hasse polynomial H_{d,p} is evaluated at (a_1..a_{d-2}).
Neither side is derived from the other.
"""

from __future__ import annotations

import itertools
import logging
import multiprocessing
import random
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

from . import __version__
from .cyclotomic import TABLE_LIMIT, l_function, newton_polygon_of_l, trace_table
from .dwork import trace_congruence_check
from .fields import ExtensionField, FieldElement, UniPoly, build_field
from .multipoly import FpMultiPoly, hasse_H, to_text
from .polygon import NewtonPolygon, generic_polygon, hodge_polygon, is_symmetric, lies_above
from .strata import StratumParams

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CENSUS_CAP = 10**6


class InvariantViolation(AssertionError):
    """A census record contradicts a checked invariant."""


@dataclass(frozen=True)
class NormalizedPolynomial:
    """``x^d + a_{d-2} x^{d-2} + ... + a_1 x`` over ``field``; coeffs are a_1..a_{d-2}."""

    field: ExtensionField
    d: int
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.d - 2:
            raise ValueError(f"need {self.d - 2} coefficients, got {len(self.coeffs)}")

    def to_unipoly(self) -> UniPoly:
        F = self.field
        return UniPoly(F, (F.zero(),) + tuple(self.coeffs) + (F.zero(), F.one()))

    def key(self) -> tuple:
        return tuple(c.coords for c in self.coeffs)


def _taylor_shift(coeffs: Sequence[FieldElement], t: FieldElement) -> list[FieldElement]:
    # coefficients of f(x + t), by repeated synthetic division
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + t * out[j + 1]
    return out


def normalize(f: UniPoly) -> tuple[NormalizedPolynomial, FieldElement]:
    """Shift ``x -> x + t`` and drop the constant so that ``g(x) = f(x + t) - f(t)``.

    ``t = -a_{d-1}/d`` kills the subleading coefficient; requires f monic of
    degree d prime to p.
    """
    d = f.degree
    F = f.field
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    if d < 2 or d % F.p == 0:
        raise ValueError(f"degree {d} must be >= 2 and prime to p")
    coeffs = list(f.coeffs[: d + 1])
    t = -coeffs[d - 1] / F(d)
    shifted = _taylor_shift(coeffs, t)
    return NormalizedPolynomial(F, d, tuple(shifted[1 : d - 1])), t


@dataclass
class CensusRecord:
    d: int
    p: int
    m: int
    coefficients: list[list[int]]
    hasse_value: list[int]
    np_vertices: NewtonPolygon
    gnp_vertices: NewtonPolygon
    is_generic: bool
    lies_above: bool
    symmetric: bool
    congruence: dict | None = None

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "p": self.p,
            "m": self.m,
            "coefficients": self.coefficients,
            "hasse_value": self.hasse_value,
            "np_vertices": self.np_vertices.to_json(),
            "gnp_vertices": self.gnp_vertices.to_json(),
            "is_generic": self.is_generic,
            "lies_above": self.lies_above,
            "symmetric": self.symmetric,
        }
        if self.congruence is not None:
            out["congruence"] = self.congruence
        return out


@dataclass
class CensusResult:
    params: StratumParams
    m: int
    mode: str
    seed: int
    field: ExtensionField
    hasse: FpMultiPoly
    gnp: NewtonPolygon
    hodge: NewtonPolygon
    records: list[CensusRecord]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        generic = sum(r.is_generic for r in self.records)
        hasse_nonzero = sum(any(r.hasse_value) for r in self.records)
        polys = Counter(str(r.np_vertices) for r in self.records)
        out = {
            "records": len(self.records),
            "generic": generic,
            "non_generic": len(self.records) - generic,
            "hasse_nonzero": hasse_nonzero,
            "all_lie_above_gnp": all(r.lies_above for r in self.records),
            "gnp_lies_above_hp": lies_above(self.gnp, self.hodge),
            "hasse_iff_holds": all(r.is_generic == any(r.hasse_value) for r in self.records),
            "polygon_counts": dict(sorted(polys.items())),
            "violations": self.violations,
        }
        if any(r.congruence is not None for r in self.records):
            out["congruence_passed"] = sum(bool(r.congruence and r.congruence["pass"])
                                           for r in self.records)
        return out

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "generator": f"genericnp {__version__}",
            "params": {"d": self.params.d, "p": self.params.p, "m": self.m,
                       "mode": self.mode, "seed": self.seed},
            "field": self.field.describe(),
            "hasse_H": to_text(self.hasse),
            "gnp": self.gnp.to_json(),
            "hp": self.hodge.to_json(),
            "summary": self.summary(),
            "records": [r.to_json() for r in self.records],
        }


def _points(F: ExtensionField, d: int, mode: str, sample_size: int, seed: int,
            cap: int) -> list[tuple[tuple[int, ...], ...]]:
    n = d - 2
    if mode == "exhaustive":
        total = F.order ** n
        if total > cap:
            raise ValueError(f"exhaustive census of {total} polynomials exceeds cap {cap}")
        elems = list(itertools.product(range(F.p), repeat=F.s))
        return list(itertools.product(elems, repeat=n))
    if mode == "sample":
        if sample_size < 1:
            raise ValueError("sample size must be positive")
        rng = random.Random(seed)
        return [tuple(tuple(rng.randrange(F.p) for _ in range(F.s)) for _ in range(n))
                for _ in range(sample_size)]
    raise ValueError(f"unknown census mode {mode!r}")


def _evaluate_hasse(H: FpMultiPoly, F: ExtensionField, point: Sequence[FieldElement]) -> FieldElement:
    value = H.evaluate(list(point))
    return F(value) if isinstance(value, int) else value


def census_record(params: StratumParams, F: ExtensionField, point: Sequence[Sequence[int]],
                  hasse: FpMultiPoly, gnp: NewtonPolygon, with_congruence: bool = False,
                  field_seed: int = 0) -> CensusRecord:
    d, p = params.d, params.p
    coeffs = tuple(F(list(c)) for c in point)
    f = NormalizedPolynomial(F, d, coeffs)
    L = l_function(f.to_unipoly(), seed=field_seed)
    np_ = newton_polygon_of_l(L)
    value = _evaluate_hasse(hasse, F, coeffs)
    congruence = None
    if with_congruence and F.s == 1:
        ints = [c.coords[0] for c in f.to_unipoly().coeffs]
        congruence = trace_congruence_check(ints, p).to_json()
    return CensusRecord(
        d=d, p=p, m=F.s,
        coefficients=[list(c.coords) for c in coeffs],
        hasse_value=list(value.coords),
        np_vertices=np_,
        gnp_vertices=gnp,
        is_generic=np_ == gnp,
        lies_above=lies_above(np_, gnp),
        symmetric=is_symmetric(np_),
        congruence=congruence,
    )


_WORKER: dict = {}


def _init_worker(d, p, m, field_seed, with_congruence):
    params = StratumParams(d, p)
    F = build_field(p, m, field_seed)
    _WORKER.update(params=params, F=F, hasse=hasse_H(params), gnp=generic_polygon(params),
                   with_congruence=with_congruence, field_seed=field_seed)


def _work(point):
    w = _WORKER
    return census_record(w["params"], w["F"], point, w["hasse"], w["gnp"],
                         w["with_congruence"], w["field_seed"])


def census(d: int, p: int, m: int = 1, mode: str = "exhaustive", sample_size: int = 100,
           seed: int = 0, with_congruence: bool = False, workers: int = 1,
           cap: int = CENSUS_CAP, field_seed: int = 0) -> CensusResult:
    """Run the census and collect invariant violations (never raises on them)."""
    params = StratumParams(d, p)
    params.require_generic_tier()
    if with_congruence and m != 1:
        raise ValueError("the trace congruence is only defined over the prime field")
    F = build_field(p, m, field_seed)
    hasse = hasse_H(params)
    gnp = generic_polygon(params)
    hodge = hodge_polygon(d)
    points = _points(F, d, mode, sample_size, seed, cap)
    log.info("census d=%d p=%d m=%d: %d polynomials", d, p, m, len(points))
    for r in range(1, d):
        if F.order**r <= TABLE_LIMIT:
            trace_table(F, r, d, field_seed)
    if workers > 1 and len(points) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers, _init_worker, (d, p, m, field_seed, with_congruence)) as pool:
            records = pool.map(_work, points, chunksize=max(1, len(points) // (4 * workers)))
    else:
        records = [census_record(params, F, pt, hasse, gnp, with_congruence, field_seed)
                   for pt in points]
    records.sort(key=lambda r: r.coefficients)
    result = CensusResult(params, m, mode, seed, F, hasse, gnp, hodge, records)
    result.violations = check_invariants(result)
    return result


def check_invariants(result: CensusResult) -> list[str]:
    """Structural invariants for every record; returns human-readable violations."""
    out = []
    d = result.params.d
    if not lies_above(result.gnp, result.hodge):
        out.append("GNP does not lie above HP")
    if not is_symmetric(result.gnp):
        out.append("GNP is not symmetric")
    for r in result.records:
        tag = f"a={r.coefficients}"
        if r.is_generic != any(r.hasse_value):
            out.append(f"{tag}: generic={r.is_generic} but H={r.hasse_value}")
        if not r.lies_above:
            out.append(f"{tag}: NP {r.np_vertices} is below GNP")
        if not r.symmetric:
            out.append(f"{tag}: NP {r.np_vertices} is not symmetric")
        x, y = r.np_vertices.endpoint
        if x != d - 1 or 2 * y != d - 1:
            out.append(f"{tag}: NP endpoint ({x},{y}) is not ({d - 1},{d - 1}/2)")
        if r.congruence is not None and not r.congruence["pass"]:
            out.append(f"{tag}: trace congruence failed")
    return out
