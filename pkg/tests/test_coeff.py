"""Coefficient rings and ideal identities."""

import pytest

from grady.coeff import CoeffRing, coeff_ring, ideal, ideal_identity


def test_ring_construction():
    r = coeff_ring([6])
    assert r.size == 6
    assert r.one == (1,)
    with pytest.raises(ValueError):
        coeff_ring([1])
    with pytest.raises(ValueError):
        coeff_ring([])


def test_componentwise_arithmetic():
    r = coeff_ring([2, 3])
    assert r.add((1, 2), (1, 2)) == (0, 1)
    assert r.mul((1, 2), (1, 2)) == (1, 1)
    assert r.neg((1, 1)) == (1, 2)
    assert r.from_int(5) == (1, 2)
    assert len(r.elements()) == 6


def test_ideal_span2_mod6():
    r = CoeffRing((6,))
    I = ideal(r, [(2,)])
    assert I.members == frozenset({(0,), (2,), (4,)})
    # independent enumeration: 4 is the unique element fixing all members
    fixing = [u for u in sorted(I.members) if all(r.mul(u, x) == x for x in I.members)]
    assert fixing == [(4,)]
    assert ideal_identity(I) == (4,)


def test_ideal_span2_mod4_has_no_identity():
    r = CoeffRing((4,))
    I = ideal(r, [(2,)])
    assert I.members == frozenset({(0,), (2,)})
    assert ideal_identity(I) is None  # 2*2 = 0 mod 4


def test_whole_ring_identity():
    r = CoeffRing((6,))
    I = ideal(r, [(1,)])
    assert len(I.members) == 6
    assert ideal_identity(I) == (1,)


def test_ideal_identity_is_idempotent_and_central():
    r = CoeffRing((6,))
    for gens in ([(2,)], [(3,)], [(4,)], [(1,)]):
        I = ideal(r, gens)
        u = ideal_identity(I)
        if u is None:
            continue
        assert r.mul(u, u) == u
        for x in r.elements():
            assert r.mul(u, x) == r.mul(x, u)


def test_ideal_closed_under_ambient_multiplication():
    r = CoeffRing((2, 3))
    I = ideal(r, [(1, 0)])
    for a in I.members:
        for x in r.elements():
            assert r.mul(a, x) in I.members
        for b in I.members:
            assert r.add(a, b) in I.members
