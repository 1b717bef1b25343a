"""Parameter-space statistics: minimality counts, the singular-surface
locus, and orbit-stabilizer audits."""

import numpy as np
import pytest

from selmerfq import census, weierstrass
from selmerfq.census import (coeff_lengths, exhaustive_minimality,
                             incidence_mask, index_to_tuple,
                             orbit_stabilizer_audit, run_census,
                             singular_divisor_count, tuple_to_index)
from selmerfq.ffpoly import Field, field_make
from selmerfq.rng import SplitMix64

# q = 3, d = 1 fixture: fiber at t = 0 is y^2 = (x - 1)^2 x with an I_2
# node at x0 = 1, built to satisfy the three incidence constraints
NODE_DIGITS = [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0]


def test_index_roundtrip():
    for q in (3, 5):
        rng = SplitMix64(q)
        for _ in range(20):
            digits = [rng.below(q) for _ in range(15)]
            assert index_to_tuple(tuple_to_index(digits, q), q, 15) == digits


def test_exhaustive_minimality_q3():
    rep = exhaustive_minimality(3, 1)
    assert rep["total"] == 3 ** 15
    # 4 degree-1 places x 27-element subspaces, overlapping only in the
    # zero tuple: 4*27 - 6 + 4 - 1 = 105 non-minimal tuples
    assert rep["nonminimal"] == 105
    assert rep["oracle_nonminimal"] == 105
    assert rep["minimal"] == 3 ** 15 - 105


def test_minimality_budget():
    with pytest.raises(ValueError):
        exhaustive_minimality(5, 1)


def test_incidence_mask_marks_node_fixture():
    mask = incidence_mask(3, 1)
    assert bool(mask[tuple_to_index(NODE_DIGITS, 3)])


def test_node_fixture_is_directly_singular_i2():
    from selmerfq.ffpoly import Place, UniPoly, ord_at
    F = Field(3, 1)
    a2, a4, a6 = census._forms_from_digits(F, 1, NODE_DIGITS)
    m = weierstrass.WeierstrassModel(F, 1, a2, a4, a6)
    wits = weierstrass.singular_surface_points(m)
    assert any((not v.is_infinity) and v.poly.coeffs == (0, 1) and x == 1
               for v, x in wits)
    assert ord_at(weierstrass.discriminant(m), Place(UniPoly.x(F))) == 2


def test_squarefree_disc_not_marked():
    # models with squarefree discriminant are never incidence-marked
    mask = incidence_mask(3, 1)
    from selmerfq.ffpoly import Place, is_squarefree, ord_at
    F = Field(3, 1)
    rng = SplitMix64(50)
    checked = 0
    while checked < 30:
        digits = [rng.below(3) for _ in range(15)]
        a2, a4, a6 = census._forms_from_digits(F, 1, digits)
        disc = weierstrass._disc_form(a2, a4, a6)
        if disc.is_zero():
            continue
        dt = disc.dehomog_t()
        if dt.is_constant() or not is_squarefree(dt):
            continue
        if ord_at(disc, Place.infinity()) > 1:
            continue
        assert not mask[tuple_to_index(digits, 3)]
        checked += 1


def test_singular_divisor_count_window():
    import math
    rep = singular_divisor_count(3, 1, seed=7, direct_samples=600)
    assert 13.5 < math.log(rep.image_count, 3) < 14.5
    assert 0.3 <= rep.image_ratio <= 3.0
    assert rep.direct_detail["containment_violations"] == 0
    # the direct count dominates the rational-point image count
    assert rep.direct_count >= rep.image_count


def test_run_census_exhaustive_d0():
    rep = run_census(5, 0, mode="exhaustive")
    assert rep.counts["total"] == 125
    assert rep.counts["minimal"] == 125
    # disc = -16(4 a2^3 a6 - a2^2 a4^2 + 4 a4^3 + 27 a6^2 - 18 a2 a4 a6):
    # vanishing locus has exactly 25 points over F_5
    assert rep.counts["disc_zero"] == 25
    assert rep.counts["smooth"] == 100
    assert rep.stacky_count * (5 ** 1 * 4) == rep.counts["minimal"]
    assert rep.ratios["minimal"][0] == 1.0


def test_run_census_rejects_small_p():
    with pytest.raises(ValueError):
        run_census(3, 1, mode="sample", n=10 ** 4)


def test_run_census_sample_reproducible_and_dense():
    r1 = run_census(5, 1, mode="sample", n=10 ** 4, seed=1)
    r1b = run_census(5, 1, mode="sample", n=10 ** 4, seed=1)
    assert r1.counts == r1b.counts
    r2 = run_census(5, 1, mode="sample", n=10 ** 4, seed=2)
    for key in ("minimal", "smooth"):
        f1, rad1 = r1.ratios[key]
        f2, rad2 = r2.ratios[key]
        assert 0.5 < f1 <= 1.0
        se = ((rad1 / 1.96) ** 2 + (rad2 / 1.96) ** 2) ** 0.5
        assert abs(f1 - f2) <= max(3 * se, 1e-12)


def test_run_census_sample_size_floor():
    with pytest.raises(ValueError):
        run_census(5, 1, mode="sample", n=100)


def test_orbit_stabilizer_audit():
    results = orbit_stabilizer_audit(5, 1, 5, seed=60)
    assert all(r["pass"] for r in results)
    for r in results:
        assert r["orbit_size"] * r["stabilizer"] == 500
