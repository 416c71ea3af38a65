import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genericnp.fields import (
    ExtensionField,
    UniPoly,
    absolute_trace,
    build_field,
    embed,
    embed_array,
    enumerate_field,
    extend,
    is_irreducible,
    prime_field,
    relative_trace,
)


def random_element(F, rng):
    return F([rng.randrange(F.p) for _ in range(F.s)])


def tensor_trace(x):
    return int(np.dot(x.field.trace_vector, x.coords)) % x.field.p


@pytest.mark.parametrize("p,s", [(11, 1), (11, 2), (13, 3), (17, 4), (19, 2), (2, 5)])
def test_build_field(p, s):
    F = build_field(p, s)
    assert F.order == p**s
    assert F.s == s
    assert is_irreducible(list(F.modulus)) or s == 1
    assert build_field(p, s) is F


def test_modulus_depends_on_seed_deterministically():
    a = build_field(13, 3, seed=0).describe()
    b = build_field(13, 3, seed=0).describe()
    assert a == b
    assert a["moduli"] and a["degree"] == 3


@pytest.mark.parametrize("p,s", [(11, 2), (13, 3), (7, 4)])
def test_trace_of_modulus_root(p, s):
    F = build_field(p, s)
    y = F.generator()
    assert y ** 0 == F.one()
    assert absolute_trace(y) == (-F.modulus[s - 1].coords[0]) % p
    assert F.modulus[-1] == F.base.one()
    assert sum((y**i * c for i, c in enumerate(F.modulus)), F.zero()) == F.zero()


@pytest.mark.parametrize("p,s", [(11, 2), (13, 3), (5, 4)])
def test_trace_properties(p, s):
    F = build_field(p, s)
    rng = random.Random(1)
    for _ in range(100):
        x, y = random_element(F, rng), random_element(F, rng)
        a = rng.randrange(p)
        assert absolute_trace(x + y) == (absolute_trace(x) + absolute_trace(y)) % p
        assert absolute_trace(x * a) == absolute_trace(x) * a % p
        assert absolute_trace(x**p) == absolute_trace(x)
        assert absolute_trace(x) == tensor_trace(x)


@pytest.mark.parametrize("p,s", [(7, 2), (5, 3)])
def test_trace_is_surjective_and_balanced(p, s):
    F = build_field(p, s)
    counts = [0] * p
    for x in enumerate_field(F):
        counts[absolute_trace(x)] += 1
    assert counts == [p ** (s - 1)] * p


@pytest.mark.parametrize("p,s", [(7, 2), (5, 3), (3, 4)])
def test_frobenius_fixes_exactly_prime_field(p, s):
    F = build_field(p, s)
    fixed = [x for x in enumerate_field(F) if x.frobenius() == x]
    assert len(fixed) == p
    assert all(not any(x.coords[1:]) for x in fixed)
    y = F.generator()
    assert y.frobenius(s) == y
    assert all(y.frobenius(k) != y for k in range(1, s))


@pytest.mark.parametrize("p,s", [(11, 2), (13, 3)])
def test_field_axioms(p, s):
    F = build_field(p, s)
    rng = random.Random(2)
    for _ in range(60):
        x, y, z = (random_element(F, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        if x:
            assert x * x.inverse() == F.one()
            assert x ** (F.order - 1) == F.one()
            assert (y / x) * x == y


def test_multiply_arrays_matches_scalar():
    F = build_field(13, 3)
    rng = np.random.default_rng(0)
    a = rng.integers(0, 13, size=(50, 3))
    b = rng.integers(0, 13, size=(50, 3))
    out = F.multiply_arrays(a, b)
    for i in range(50):
        assert list(out[i]) == (F(list(a[i])) * F(list(b[i]))).to_json()


@pytest.mark.parametrize("p,m,r", [(11, 2, 3), (13, 2, 2), (5, 3, 2), (7, 1, 3)])
def test_tower_trace_transitivity(p, m, r):
    Fq = build_field(p, m)
    K = extend(Fq, r, seed=3)
    assert K.s == m * r and K.base is Fq
    rng = random.Random(4)
    for _ in range(40):
        x = random_element(K, rng)
        rel = relative_trace(x)
        assert rel.field is Fq
        assert absolute_trace(x) == absolute_trace(rel)
        assert absolute_trace(x) == tensor_trace(x)


@pytest.mark.parametrize("p,m,r", [(11, 2, 3), (13, 2, 2), (5, 3, 2)])
def test_embedding_is_a_ring_homomorphism(p, m, r):
    Fq = build_field(p, m)
    K = extend(Fq, r)
    rng = random.Random(5)
    for _ in range(100):
        a, b = random_element(Fq, rng), random_element(Fq, rng)
        assert embed(a + b, K) == embed(a, K) + embed(b, K)
        assert embed(a * b, K) == embed(a, K) * embed(b, K)
    assert embed(Fq.one(), K) == K.one()
    # Frobenius of order q fixes exactly the image of F_q
    for _ in range(20):
        a = random_element(Fq, rng)
        assert embed(a, K) ** Fq.order == embed(a, K)
    arr = np.array([random_element(Fq, rng).coords for _ in range(10)])
    out = embed_array(arr, Fq, K)
    assert [K(list(row)) for row in out] == [embed(Fq(list(row)), K) for row in arr]


def test_mixed_field_coercion():
    Fq = build_field(11, 2)
    K = extend(Fq, 2)
    a = Fq.generator()
    x = K.generator()
    assert (x + a) - a == x
    with pytest.raises(ValueError):
        x + build_field(13, 2).one()


@pytest.mark.parametrize("p,s,count", [(11, 1, 11), (11, 2, 121), (5, 3, 125), (17, 4, 83521)])
def test_enumeration_counts(p, s, count):
    F = build_field(p, s)
    arr = F.elements_array()
    assert arr.shape == (count, s)
    assert len({tuple(r) for r in arr.tolist()}) == count
    if count < 1000:
        assert [x.to_json() for x in enumerate_field(F)] == arr.tolist()


def test_enumeration_cap():
    F = build_field(17, 4)
    with pytest.raises(ValueError):
        F.elements_array(cap=1000)
    with pytest.raises(ValueError):
        next(enumerate_field(F, cap=1000))


def test_invalid_constructions():
    F = prime_field(7)
    with pytest.raises(ValueError):
        ExtensionField(7, F, [F(6), F(0), F(1)])  # X^2 - 1
    with pytest.raises(ValueError):
        ExtensionField(7, F, [F(1), F(0), F(2)])  # not monic
    with pytest.raises(ValueError):
        ExtensionField(8)
    with pytest.raises(ValueError):
        extend(F, 0)


def test_irreducibility():
    F = prime_field(7)
    assert is_irreducible([F(1), F(0), F(1)])  # -1 is a non-residue mod 7
    assert not is_irreducible([F(6), F(0), F(1)])  # X^2 - 1
    assert is_irreducible([F(4), F(1), F(0), F(1)]) == all(
        (x**3 + x + 4) % 7 for x in range(7))


def test_modulus_cache(tmp_path, monkeypatch):
    from genericnp import fields

    monkeypatch.setenv(fields.MODULI_CACHE_ENV, str(tmp_path))
    fields._extend_cached.cache_clear()
    F1 = build_field(23, 3, seed=9)
    assert (tmp_path / "moduli.json").exists()
    fields._extend_cached.cache_clear()
    F2 = build_field(23, 3, seed=9)
    assert F1.describe() == F2.describe()
    fields._extend_cached.cache_clear()


def test_unipoly():
    F = build_field(11, 1)
    f = UniPoly.from_ints(F, [0, 3, 0, 1])
    assert f.degree == 3 and f.is_monic()
    assert f(F(2)) == 14 % 11
    assert str(f) == "X^3 + 3*X"


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=2, max_size=2), st.lists(st.integers(0, 12), min_size=2, max_size=2))
def test_frobenius_is_additive(a, b):
    F = build_field(13, 2)
    x, y = F(a), F(b)
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()


def test_elements_chunk_matches_full_array():
    F = build_field(5, 3)
    full = F.elements_array()
    assert (F.elements_chunk(0, F.order) == full).all()
    assert (F.elements_chunk(17, 40) == full[17:40]).all()
    assert F.elements_chunk(120, 200).shape == (5, 3)
