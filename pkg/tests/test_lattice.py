"""Lattices, mod-n quadratic modules, reflection orbits, and connectivity
certificates."""

import numpy as np
import pytest

from selmerfq import lattice
from selmerfq.lattice import (QuadraticModule, e8_gram, e8_lattice,
                              e8_root_count, orbit_decompose,
                              sampling_connectivity, selmer_lattice,
                              spinor_sign, standard_generators,
                              weyl_e8_orbits)
from selmerfq.rng import SplitMix64


def _sigma(n):
    return sum(m for m in range(1, n + 1) if n % m == 0)


def test_e8_gram_shape():
    g = e8_gram()
    assert g.shape == (8, 8)
    assert np.array_equal(g, g.T)
    assert all(g[i, i] == 2 for i in range(8))
    assert lattice._int_det(g.tolist()) == 1


def test_e8_root_count():
    assert e8_root_count() == 240


def test_selmer_lattice_even_unimodular():
    for d in (2, 3):
        lat = selmer_lattice(d)
        assert lat.rank == 12 * d - 4
        assert abs(lattice._int_det(lat.gram.tolist())) == 1
        for i in range(lat.rank):
            assert lat.gram[i, i] % 2 == 0
    with pytest.raises(ValueError):
        selmer_lattice(1)


def test_reflection_is_involution_and_preserves_q():
    lat, gens = standard_generators(2, SplitMix64(30))
    for n in (2, 3, 5):
        mod = QuadraticModule(lat, n)
        rng = SplitMix64(n)
        usable = [g for g in gens
                  if np.gcd(mod.q(g), n) == 1][:6]
        for w in usable:
            for _ in range(5):
                v = tuple(rng.below(n) for _ in range(lat.rank))
                rv = mod.reflect(w, v)
                assert mod.reflect(w, rv) == tuple(x % n for x in v)
                assert mod.q(rv) == mod.q(v)


def test_content_invariant_is_reflection_invariant():
    lat, gens = standard_generators(2, SplitMix64(31))
    mod = QuadraticModule(lat, 6)
    rng = SplitMix64(32)
    usable = [g for g in gens if np.gcd(mod.q(g), 6) == 1][:8]
    for _ in range(40):
        v = tuple(rng.below(6) for _ in range(lat.rank))
        inv = mod.content_invariant(v)
        for w in usable:
            assert mod.content_invariant(mod.reflect(w, v)) == inv


def test_predicted_class_counts():
    lat = selmer_lattice(2)
    for n in range(1, 13):
        mod = QuadraticModule(lat, n)
        assert len(mod.predicted_classes()) == _sigma(n)


def test_spinor_sign():
    lat = e8_lattice(negate=True)  # all q-values negative on basis roots
    word = [np.eye(8, dtype=np.int64)[i] for i in range(3)]
    assert spinor_sign(lat, word) == 1  # q < 0 contributes no sign flips
    lat2 = e8_lattice()
    assert spinor_sign(lat2, word) == -1  # three positive-q reflections


def test_weyl_e8_orbit_counts_small_n():
    assert weyl_e8_orbits(1).orbit_count == 1
    assert weyl_e8_orbits(2).orbit_count == 3
    assert weyl_e8_orbits(3).orbit_count == 5


def test_orbit_decompose_budget():
    lat, gens = standard_generators(2, SplitMix64(33))
    mod = QuadraticModule(lat, 3)
    with pytest.raises(ValueError):
        orbit_decompose(mod, gens, budget=1000)


def test_sampling_connectivity_n2():
    lat, gens = standard_generators(2, SplitMix64(34))
    mod = QuadraticModule(lat, 2)
    rep = sampling_connectivity(mod, SplitMix64(35), pairs_per_class=25)
    assert rep.orbit_count == _sigma(2)
    assert rep.unresolved == []


def test_sampling_connectivity_composite_n():
    lat, gens = standard_generators(2, SplitMix64(36))
    mod = QuadraticModule(lat, 6)
    rep = sampling_connectivity(mod, SplitMix64(37), pairs_per_class=10)
    assert rep.orbit_count == _sigma(6)
    assert rep.unresolved == []
