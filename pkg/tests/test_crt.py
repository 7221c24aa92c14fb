import pytest
from hypothesis import given, strategies as st

from mobs.crt import CongruenceSystem, crt_combine, merge
from oracles import scan_crt


@pytest.mark.parametrize("entries, expected", [
    ([(1, 2), (2, 3)], (5, 6)),
    ([(1, 4), (3, 6)], (9, 12)),
    ([(0, 2), (1, 4)], None),
    ([(3, 7)], (3, 7)),
    ([(0, 1)], (0, 1)),
    ([(2, 4), (2, 4), (0, 2)], (2, 4)),
])
def test_examples(entries, expected):
    assert scan_crt(entries) == expected
    assert crt_combine(CongruenceSystem(entries)) == expected


def test_empty_and_invalid():
    with pytest.raises(ValueError):
        crt_combine(CongruenceSystem([]))
    with pytest.raises(ValueError):
        CongruenceSystem([(5, 3)])
    with pytest.raises(ValueError):
        CongruenceSystem([(0, 0)])


def test_lcm_divides_product():
    s = CongruenceSystem([(1, 4), (3, 6), (2, 5)])
    assert s.lcm == 60
    assert s.moduli_product % s.lcm == 0


def test_merge_rejects_contradiction():
    assert merge(1, 6, 2, 4) is None
    assert merge(1, 6, 3, 4) == (7, 12)


congruence = st.integers(1, 30).flatmap(lambda m: st.tuples(st.integers(0, m - 1), st.just(m)))


@given(st.lists(congruence, min_size=1, max_size=4))
def test_matches_scan(entries):
    assert crt_combine(CongruenceSystem(entries)) == scan_crt(entries)
