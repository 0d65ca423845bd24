import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cadlag_qv import Partition, PartitionError, PartitionScheme, parse_levels, parse_scheme


def test_generate():
    d = PartitionScheme("dyadic")
    assert d.generate(1).points.tolist() == [0, 0.5, 1]
    assert d.generate(2).points.tolist() == [0, 0.25, 0.5, 0.75, 1]
    assert PartitionScheme("uniform").generate(3).points.tolist() == [0, 0.25, 0.5, 0.75, 1]


def test_dyadic_non_dyadic_horizon():
    p = PartitionScheme("dyadic", 1.3).generate(1)
    assert p.points.tolist() == [0, 0.5, 1.0, 1.3]


def test_mesh():
    assert PartitionScheme("dyadic").generate(3).mesh() == 0.125
    p = Partition([0, 0.1, 1])
    assert p.mesh(1.0) == pytest.approx(0.9)
    assert p.mesh(0.05) == pytest.approx(0.1)


def test_locators():
    p = PartitionScheme("dyadic").generate(2)
    assert p.last_at_or_before(0.7071) == 0.5
    assert p.last_at_or_before(0.25) == 0.25
    assert p.last_at_or_before(0.1) == 0.0
    assert p.last_strictly_before(0.25) == 0.0
    assert p.last_strictly_before(0.7071) == 0.5
    assert p.last_strictly_before(0.26) == 0.25
    with pytest.raises(PartitionError):
        p.last_strictly_before(0.0)


def test_successor_predecessor():
    assert PartitionScheme("dyadic").generate(1).successor(0.5) == 1.0
    assert PartitionScheme("dyadic").generate(1).successor(1.0) == 1.0
    assert PartitionScheme("dyadic").generate(3).successor(0.125) == 0.25
    assert PartitionScheme("dyadic").generate(3).predecessor(0.0) == 0.0
    with pytest.raises(PartitionError):
        PartitionScheme("dyadic").generate(3).successor(0.3)


@pytest.mark.parametrize("pts", [[0.0], [0.1, 1.0], [0, 0.5, 0.5], [0, 0.6, 0.4]])
def test_invalid_partitions(pts):
    with pytest.raises(PartitionError):
        Partition(pts)


def test_explicit_scheme_from_file(tmp_path):
    f = tmp_path / "parts.txt"
    f.write_text("# levels\n0,0.5,1\n0,0.3,0.6,1\n")
    s = parse_scheme(f"file:{f}")
    assert s.max_level == 1
    assert s.generate(1).points.tolist() == [0, 0.3, 0.6, 1]
    with pytest.raises(PartitionError):
        s.generate(2)


def test_parse_levels():
    assert parse_levels("4..7") == [4, 5, 6, 7]
    assert parse_levels("3") == [3]
    for bad in ("7..4", "a..b", "-1..2"):
        with pytest.raises(PartitionError):
            parse_levels(bad)


@given(st.integers(0, 12), st.floats(0.0, 1.0))
@settings(max_examples=100, deadline=None)
def test_locator_properties(n, t):
    p = PartitionScheme("dyadic").generate(n)
    a = p.last_at_or_before(t)
    assert a <= t < p.successor(a) or a == p.last
    if t > 0:
        b = p.last_strictly_before(t)
        assert b < t <= p.successor(b)
        assert p.contains(b)


@given(st.integers(0, 10))
def test_dyadic_refines(n):
    d = PartitionScheme("dyadic")
    assert np.all(np.isin(d.generate(n).points, d.generate(n + 1).points))
