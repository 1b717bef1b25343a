"""Finite field, polynomial, and place arithmetic."""

import pytest

from selmerfq import ffpoly
from selmerfq.ffpoly import (BinaryForm, Place, QuotientField, UniPoly,
                             factor, field_make, is_squarefree, ord_at,
                             places_of_degree_one)
from selmerfq.rng import SplitMix64


def test_prime_field_arithmetic():
    F = field_make(7)
    assert F.add(3, 5) == 1
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    assert F.neg(2) == 5
    assert F.sub(1, 3) == 5
    for a in range(1, 7):
        assert F.mul(a, F.inv(a)) == F.one


def test_field_make_rejects_small_characteristic():
    for p in (2, 3):
        with pytest.raises(ValueError):
            field_make(p)
    with pytest.raises(ValueError):
        field_make(4)


def test_extension_field_properties():
    F = field_make(5, 2)
    assert F.q == 25
    els = list(F.elements())
    assert len(els) == 25
    # Fermat: a^25 = a for all elements
    for a in els:
        assert F.pow(a, 25) == a
    # chi is multiplicative on nonzero elements
    rng = SplitMix64(4)
    for _ in range(30):
        a, b = F.random(rng), F.random(rng)
        if a and b:
            assert F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b)


def test_sqrt_of_squares():
    F = field_make(13)
    for a in range(1, 13):
        sq = F.mul(a, a)
        r = F.sqrt(sq)
        assert F.mul(r, r) == sq


def test_unipoly_divmod_and_gcd():
    F = field_make(5)
    rng = SplitMix64(1)
    for _ in range(25):
        f = UniPoly(F, [F.random(rng) for _ in range(6)])
        g = UniPoly(F, [F.random(rng) for _ in range(3)])
        if g.is_zero():
            continue
        q, r = f.divmod(g)
        assert q * g + r == f
        assert r.is_zero() or r.degree() < g.degree()
        d = f.gcd(g)
        assert f.divmod(d)[1].is_zero() or f.is_zero()
        assert g.divmod(d)[1].is_zero()


def test_irreducible_count_degree_2():
    # number of monic irreducible quadratics over F_5 is (25 - 5)/2 = 10
    F = field_make(5)
    count = 0
    for c0 in range(5):
        for c1 in range(5):
            if UniPoly(F, [c0, c1, 1]).is_irreducible():
                count += 1
    assert count == 10


def test_factor_roundtrip():
    F = field_make(7)
    rng = SplitMix64(2)
    for _ in range(20):
        f = UniPoly(F, [F.random(rng) for _ in range(8)])
        if f.is_zero() or f.is_constant():
            continue
        prod = UniPoly.const(F, f.leading())
        for g, mult in factor(f):
            assert g.is_irreducible()
            assert g.leading() == F.one
            for _ in range(mult):
                prod = prod * g
        assert prod == f


def test_roots_and_count_roots_agree():
    F = field_make(11)
    rng = SplitMix64(3)
    for _ in range(20):
        f = UniPoly(F, [F.random(rng) for _ in range(5)])
        if f.is_zero():
            continue
        rs = f.roots()
        assert len(rs) == f.count_roots()
        for r in rs:
            assert f.evaluate(r) == F.zero


def test_squarefree_detection():
    F = field_make(5)
    t = UniPoly.x(F)
    one = UniPoly.const(F, F.one)
    assert is_squarefree(t * t + one) in (True, False)  # total function
    assert not is_squarefree((t + one) * (t + one) * t)
    assert is_squarefree(t * (t + one))


def test_place_residue_fields():
    F = field_make(5)
    t = UniPoly.x(F)
    # degree-1 place: residue field is the base field, tau the root
    v = Place(t + UniPoly.const(F, F.from_int(2)))
    K, tau = v.residue_field()
    assert K is F and tau == F.neg(F.from_int(2))
    # degree-2 place: quotient field of size 25
    two = UniPoly.const(F, F.from_int(2))
    g = t * t + two  # t^2 + 2 is irreducible over F_5
    assert g.is_irreducible()
    K2, tau2 = Place(g).residue_field()
    assert isinstance(K2, QuotientField) and K2.q == 25
    # tau2 satisfies the place polynomial
    assert K2.add(K2.mul(tau2, tau2), K2.embed(F.from_int(2))) == K2.zero


def test_places_of_degree_one():
    F = field_make(5)
    pls = places_of_degree_one(F)
    assert len(pls) == 6  # 5 finite + infinity
    assert sum(1 for v in pls if v.is_infinity) == 1


def test_ord_at_finite_and_infinity():
    F = field_make(5)
    t = UniPoly.x(F)
    f = (t * t) * (t + UniPoly.const(F, F.one))
    form = BinaryForm.from_unipoly(f, 6)
    assert ord_at(form, Place(t)) == 2
    assert ord_at(form, Place(t + UniPoly.const(F, F.one))) == 1
    # degree-3 polynomial in a degree-6 form: ord at infinity is 3
    assert ord_at(form, Place.infinity()) == 3


def test_binary_form_evaluation_charts():
    F = field_make(7)
    rng = SplitMix64(6)
    form = BinaryForm(F, 4, [F.random(rng) for _ in range(5)])
    dt = form.dehomog_t()
    for a in range(7):
        assert form.evaluate(F.one, F.from_int(a)) == dt.evaluate(F.from_int(a))
    ds = form.dehomog_s()
    assert form.evaluate(F.zero, F.one) == ds.evaluate(F.zero)


def test_taylor_at_matches_shift():
    F = field_make(5)
    rng = SplitMix64(7)
    f = UniPoly(F, [F.random(rng) for _ in range(6)])
    a = F.from_int(3)
    cs = f.taylor_at(a, f.degree() + 1)
    g = UniPoly(F, cs)
    for x in range(5):
        xe = F.from_int(x)
        assert g.evaluate(F.sub(xe, a)) == f.evaluate(xe)
