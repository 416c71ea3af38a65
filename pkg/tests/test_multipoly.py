import itertools

import pytest
import sympy

from genericnp.fields import build_field
from genericnp.multipoly import (
    FpMultiPoly,
    degree_bound_G,
    degree_bound_H,
    from_text,
    hasse_G,
    hasse_H,
    hasse_P_n,
    hasse_product,
    power_coefficient,
    power_coefficient_enumerated,
    to_text,
    witness_monomial,
)
from genericnp.strata import StratumParams, is_prime, y_n


def sympy_power_coefficient(d, p, k, n):
    """Expand (a_1 X + ... + a_d X^d)^k symbolically and read off X^n."""
    x = sympy.Symbol("X")
    a = sympy.symbols(f"a1:{d + 1}")
    g = sum(a[i] * x ** (i + 1) for i in range(d))
    coeff = sympy.Poly(sympy.expand(g**k), x).coeff_monomial(x**n)
    terms = {}
    if coeff != 0:
        for mono, c in sympy.Poly(coeff, *a).terms():
            terms[mono] = int(c)
    return FpMultiPoly(p, d, terms)


def generic_pairs(dmax=6, pmax=60):
    return [(d, p) for d in range(2, dmax + 1) for p in range(3 * d, pmax) if is_prime(p) and p % d]


def test_power_coefficient_examples():
    params = StratumParams(3, 11)
    assert to_text(power_coefficient(params, 1, 2)) == "X2"
    assert to_text(power_coefficient(params, 4, 10)) == "4*X1*X3^3+6*X2^2*X3^2"
    assert power_coefficient(params, 2, 7).is_zero()
    assert power_coefficient(params, 3, 2).is_zero()


@pytest.mark.parametrize("d,p,k,n", [(3, 11, 4, 10), (4, 19, 5, 18), (3, 7, 6, 11), (5, 17, 3, 9),
                                     (4, 13, 7, 20), (2, 5, 6, 9), (5, 31, 4, 14)])
def test_power_coefficient_against_sympy(d, p, k, n):
    params = StratumParams(d, p)
    expected = sympy_power_coefficient(d, p, k, n)
    assert power_coefficient(params, k, n) == expected
    assert power_coefficient_enumerated(params, k, n) == expected


@pytest.mark.parametrize("d,p", [(3, 11), (4, 13), (5, 17)])
def test_power_coefficient_methods_agree(d, p):
    params = StratumParams(d, p)
    for k in range(0, 7):
        for n in range(0, d * k + 2):
            fast = power_coefficient(params, k, n)
            assert fast == power_coefficient_enumerated(params, k, n)
            for mono, _ in fast.items():
                assert sum(mono) == k
                assert sum(i * e for i, e in enumerate(mono, 1)) == n


def test_hasse_examples():
    assert to_text(hasse_P_n(StratumParams(3, 11), 1)) == "4*X1*X3^3+6*X2^2*X3^2"
    p13 = hasse_P_n(StratumParams(3, 13), 1)
    assert len(p13) == 1 and p13.coefficient((0, 0, 4)) != 0
    params = StratumParams(4, 19)
    assert hasse_P_n(params, 1) == power_coefficient(params, 5, 18)
    assert hasse_product(StratumParams(3, 11)) == hasse_P_n(StratumParams(3, 11), 1)


@pytest.mark.parametrize("d,p", [(4, 19), (5, 17)])
def test_hasse_product_degree(d, p):
    params = StratumParams(d, p)
    prod = hasse_product(params)
    assert prod == hasse_P_n(params, 1) * hasse_P_n(params, 2)
    assert prod.is_homogeneous()
    assert prod.total_degree() == y_n(params, 1) + y_n(params, 2)


def test_hasse_G_and_H_examples():
    assert to_text(hasse_G(StratumParams(3, 11))) == "6*X2^2+4*X1"
    assert to_text(hasse_H(StratumParams(3, 11))) == "4*X1"
    g13 = hasse_G(StratumParams(3, 13))
    assert g13.total_degree() == 0 and g13
    h13 = hasse_H(StratumParams(3, 13))
    assert h13.total_degree() == 0 and h13
    g2 = hasse_G(StratumParams(2, 7))
    assert g2.nvars == 1 and g2.total_degree() == 0 and g2
    h419 = hasse_H(StratumParams(4, 19))
    assert h419 and h419.nvars == 2


@pytest.mark.parametrize("d,p", generic_pairs(dmax=7, pmax=50))
def test_hasse_factor_structure(d, p):
    params = StratumParams(d, p)
    for n in range(1, d):
        poly = hasse_P_n(params, n)
        assert poly
        assert poly.is_homogeneous()
        assert poly.total_degree() == y_n(params, n)
        mono, coeff = witness_monomial(params, n)
        assert coeff != 0
        assert poly.coefficient(mono) == coeff
        if d > 2:
            assert mono[d - 2] == 0
    assert hasse_G(params).total_degree() <= degree_bound_G(d)
    assert hasse_H(params).total_degree() <= degree_bound_H(d)
    assert hasse_H(params)


@pytest.mark.parametrize("d,p", [(d, p) for d, p in generic_pairs(7, 100) if p % d == 1])
def test_split_case_monomial(d, p):
    params = StratumParams(d, p)
    for n in range(1, d):
        poly = hasse_P_n(params, n)
        expected = [0] * d
        expected[-1] = y_n(params, n)
        assert list(poly.terms) == [tuple(expected)]
    h = hasse_H(params)
    assert h.total_degree() == 0 and h


def test_evaluate():
    h = hasse_H(StratumParams(3, 11))
    assert h.evaluate([0]) == 0
    assert h.evaluate([3]) == 1
    F = build_field(11, 2)
    y = F.generator()
    assert h.evaluate([y]) == y * 4
    c = FpMultiPoly.constant(11, 2, 7)
    assert c.evaluate([5, 9]) == 7
    G = build_field(13, 2)
    with pytest.raises(ValueError):
        h.evaluate([G.generator()])
    with pytest.raises(ValueError):
        h.evaluate([1, 2])


def test_text_round_trip():
    for d, p in [(3, 11), (4, 19), (5, 17)]:
        params = StratumParams(d, p)
        for poly in (hasse_product(params), hasse_G(params), hasse_H(params)):
            assert from_text(to_text(poly), p, poly.nvars) == poly
    assert to_text(FpMultiPoly(5, 2)) == "0"


def test_arithmetic():
    p = 7
    x1, x2 = FpMultiPoly.variable(p, 2, 1), FpMultiPoly.variable(p, 2, 2)
    assert (x1 + x2) * (x1 - x2) == x1 * x1 - x2 * x2
    assert (x1 * 7).is_zero()
    assert FpMultiPoly(p, 2).total_degree() == float("-inf")
    with pytest.raises(ValueError):
        x1 + FpMultiPoly.variable(5, 2, 1)


def test_substitute_matches_evaluation():
    params = StratumParams(4, 19)
    prod = hasse_product(params)
    h = hasse_H(params)
    for a1, a2 in itertools.product(range(0, 19, 5), repeat=2):
        assert h.evaluate([a1, a2]) == prod.evaluate([a1, a2, 0, 1])
