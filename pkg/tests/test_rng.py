"""Determinism of the splitmix-style generator."""

from selmerfq.rng import SplitMix64


def test_determinism():
    a = SplitMix64(42)
    b = SplitMix64(42)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_below_range():
    r = SplitMix64(7)
    for _ in range(1000):
        assert 0 <= r.below(13) < 13


def test_spawn_streams_differ():
    r = SplitMix64(1)
    s1 = r.spawn()
    s2 = r.spawn()
    assert [s1.next_u64() for _ in range(4)] != [s2.next_u64() for _ in range(4)]
